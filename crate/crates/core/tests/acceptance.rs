//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use morphkit::cli::binary_corpus;
use morphkit::factorbasis::{enumerate_factor_bases, is_reducible, DerivationGraph, Limits};
use morphkit::factorization::{
    is_factor, is_left_factor, uniquely_reducible_blockform, uniqueness_report, Caps, Verdict,
};
use morphkit::incidence::{
    classify_empirical, classify_symbolic, consistent, incidence, matrix_multiply, EmpiricalCaps, IncidenceMatrix,
    VerdictKind,
};
use morphkit::morphisms::{compose, embed, permutation};
use morphkit::oracle::{oracle_factor_bases, oracle_is_reducible, SearchBounds};
use morphkit::words::Alphabet;
use morphkit::{FactorBasis, Morphism};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn m(images: &[&str]) -> Morphism {
    Morphism::from_images(images).unwrap()
}

fn mat(s: &str) -> IncidenceMatrix {
    s.parse().unwrap()
}

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    check(took < limit, format!("{what} took {took:.2?}, limit {limit:?}"))
}

fn reducible(phi: &Morphism) -> bool {
    is_reducible(phi).unwrap().reducible
}

fn criterion_1() -> Outcome {
    let second = Duration::from_secs(1);
    let cases: [(&[&str], bool); 4] = [
        (&["a", "aabb"], true),
        (&["a", "babb"], false),
        (&["aaabcbc", "acbcc", "bbabb"], false),
        (&["abab", "baba"], true),
    ];
    for (images, expected) in cases {
        let t = Instant::now();
        let phi = m(images);
        let r = is_reducible(&phi).map_err(|e| e.to_string())?;
        check(r.reducible == expected, format!("{phi}: expected reducible={expected}"))?;
        if let Some(w) = r.witness {
            check(compose(&w.psi2, &w.psi1).unwrap() == phi, format!("{phi}: witness does not recompose"))?;
        }
        within(second, t, &phi.to_string())?;
    }
    let t = Instant::now();
    let (psi1, psi2) = (m(&["abb", "ba"]), m(&["ab", "bba"]));
    let phi = compose(&psi2, &psi1).unwrap();
    check(phi == m(&["abbbabba", "bbaab"]), format!("split recomposes to {phi}"))?;
    let lf = is_left_factor(&psi2, &phi).map_err(|e| e.to_string())?.ok_or("no left-factor split")?;
    check(lf.psi1 == psi1, format!("left factor gave {}", lf.psi1))?;
    within(second, t, "non-unique split")?;
    Ok("4 verdicts and the (abb, ba) / (ab, bba) split".into())
}

fn listed_bases() -> Vec<FactorBasis> {
    [
        &["abab", "c", "abbba"][..],
        &["ab", "c", "abbba"],
        &["abab", "ca", "bbba"],
        &["ab", "ca", "bbba"],
        &["abab", "cab", "bba"],
        &["ab", "cab", "bba"],
        &["abab", "cabb", "ba"],
        &["ab", "cabb", "ba"],
        &["abab", "cabbb", "a"],
        &["ab", "cabbb", "a"],
        &["ab", "c", "bba"],
        &["a", "b", "ca"],
    ]
    .iter()
    .map(|e| FactorBasis::from_strs(e).unwrap().canonical())
    .collect()
}

fn edge_set(g: &DerivationGraph) -> BTreeSet<(FactorBasis, FactorBasis)> {
    g.edges.iter().map(|&(x, y)| (g.vertices[x].clone(), g.vertices[y].clone())).collect()
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let phi = m(&["abababab", "ababcabbba", "cabbbaabab"]);
    let all = enumerate_factor_bases(&phi, Limits::default()).map_err(|e| e.to_string())?;
    let found: Vec<FactorBasis> = all.nontrivial().map(|v| v.canonical()).collect();
    let listed = listed_bases();
    let expected_edges =
        [(1, 2), (5, 6), (3, 4), (7, 8), (9, 10), (2, 11), (6, 11), (6, 12), (4, 12), (8, 12), (10, 12)]
            .iter()
            .map(|&(x, y): &(usize, usize)| (listed[x - 1].clone(), listed[y - 1].clone()))
            .collect::<BTreeSet<_>>();
    let full = DerivationGraph::from_bases(found.clone(), all.truncated);
    let on_listed = DerivationGraph::from_bases(listed.clone(), false);
    within(Duration::from_secs(10), t, "enumeration")?;

    let found_set: BTreeSet<_> = found.iter().cloned().collect();
    let listed_set: BTreeSet<_> = listed.iter().cloned().collect();
    let missing: Vec<String> = listed_set.difference(&found_set).map(ToString::to_string).collect();
    let extra: Vec<String> = found_set.difference(&listed_set).map(ToString::to_string).collect();
    let restricted_edges_match = edge_set(&on_listed) == expected_edges;
    if missing.is_empty() && extra.is_empty() && edge_set(&full) == expected_edges {
        return Ok("12 bases, 11 edges".into());
    }
    Err(format!(
        "{} non-trivial bases found, 12 expected; missing {missing:?}; extra {extra:?}; \
         transitive reduction restricted to the 12 listed bases matches the 11 edges: {restricted_edges_match}",
        found.len()
    ))
}

fn criterion_3() -> Outcome {
    let limit = Duration::from_secs(10);
    let t = Instant::now();
    let w = is_factor(&m(&["bb", "a"]), &m(&["aaaab", "baaaa"]), Caps::default())
        .map_err(|e| e.to_string())?
        .ok_or("no witness for (bb, a)")?;
    check(w.psi1 == m(&["ab", "ba"]), format!("psi1 = {}", w.psi1))?;
    check(
        compose(&w.psi2, &compose(&m(&["bb", "a"]), &w.psi1).unwrap()).unwrap() == m(&["aaaab", "baaaa"]),
        "witness does not recompose",
    )?;
    within(limit, t, "present instance")?;
    let t = Instant::now();
    let absent = is_factor(&m(&["aab", "aba"]), &m(&["ababbababbabb", "abbabbababb"]), Caps::default())
        .map_err(|e| e.to_string())?;
    check(absent.is_none(), "witness reported for (aab, aba)")?;
    within(limit, t, "absent instance")?;
    Ok("witness psi1 = (ab, ba); (aab, aba) absent".into())
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let corpus = binary_corpus(8);
    let mut disagreements = Vec::new();
    for phi in &corpus {
        let bounds = SearchBounds::covering(phi);
        let oracle = oracle_is_reducible(phi, bounds).map_err(|e| e.to_string())?;
        if reducible(phi) != oracle {
            disagreements.push(format!("{phi}: reducibility"));
        }
        let mut mine: Vec<_> = enumerate_factor_bases(phi, Limits::default())
            .map_err(|e| e.to_string())?
            .bases
            .into_iter()
            .map(|e| e.basis.canonical())
            .collect();
        let mut theirs: Vec<_> =
            oracle_factor_bases(phi, bounds).map_err(|e| e.to_string())?.into_iter().map(|v| v.canonical()).collect();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            disagreements.push(format!("{phi}: bases"));
        }
    }
    check(disagreements.is_empty(), format!("{} disagreements: {disagreements:?}", disagreements.len()))?;
    within(Duration::from_secs(600), t, "corpus")?;
    Ok(format!("{} morphisms, 100% agreement", corpus.len()))
}

fn random_positive(rng: &mut StdRng, n: usize, max_len: usize) -> Morphism {
    let alphabet = Alphabet::standard(n);
    loop {
        let images = (0..n)
            .map(|_| (0..rng.gen_range(1..=max_len)).map(|_| alphabet.symbol(rng.gen_range(0..n))).collect())
            .collect();
        let phi = Morphism::endo(alphabet.clone(), images).unwrap();
        if phi.is_parikh_positive_endo() {
            return phi;
        }
    }
}

fn random_permutation(rng: &mut StdRng, alphabet: &Alphabet) -> Morphism {
    let mut p: Vec<usize> = (0..alphabet.len()).collect();
    p.shuffle(rng);
    permutation(alphabet, &p)
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6d6f7270);
    let mut violations = Vec::new();
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let (phi, psi) = (random_positive(&mut rng, n, 6), random_positive(&mut rng, n, 6));
        let composite = incidence(&compose(&psi, &phi).unwrap()).unwrap();
        if composite != matrix_multiply(&incidence(&phi).unwrap(), &incidence(&psi).unwrap()).unwrap() {
            violations.push(format!("composition law: {psi} after {phi}"));
        }
        let verdict = reducible(&phi);
        if reducible(&phi.reversed()) != verdict {
            violations.push(format!("reversal: {phi}"));
        }
        let a = phi.domain().clone();
        let (p, q) = (random_permutation(&mut rng, &a), random_permutation(&mut rng, &a));
        let dressed = compose(&p, &compose(&phi, &q).unwrap()).unwrap();
        if reducible(&dressed) != verdict {
            violations.push(format!("dressing: {phi} vs {dressed}"));
        }
        let big = embed(&phi, &Alphabet::standard(n + rng.gen_range(1..=2))).unwrap();
        if reducible(&big) != verdict {
            violations.push(format!("embedding: {phi}"));
        }
    }
    check(violations.is_empty(), format!("{} violations: {violations:?}", violations.len()))?;
    Ok("1000 instances, 4 laws, 0 violations".into())
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let l = Limits::default();
    let block = |images: &[&str]| uniquely_reducible_blockform(&m(images), l).map(|r| r.verdict);
    let v = block(&["aabbbbbaaabbbbbaa", "aaaaabbbbbaaabbbbbaaaaaaa"]).map_err(|e| e.to_string())?;
    check(v == Verdict::Unique, format!("first block example: {v:?}"))?;
    let v = block(&["aabbbaaaaabbbaaa", "aabbbaaa"]).map_err(|e| e.to_string())?;
    check(v == Verdict::NonUnique, format!("second block example: {v:?}"))?;
    let r = uniqueness_report(&m(&["aba", "a"]), Caps::default()).map_err(|e| e.to_string())?;
    check(r.verdict == Verdict::NonUnique, format!("(aba, a): {:?}", r.verdict))?;
    let r = uniqueness_report(&m(&["aaaaaaaaaaaa"]), Caps::default()).map_err(|e| e.to_string())?;
    check(r.verdict == Verdict::Unique, format!("a^12: {:?}", r.verdict))?;
    let mut exps = r.unary_exponents.clone().unwrap_or_default();
    exps.sort();
    check(exps == [2, 2, 3], format!("a^12 exponents {exps:?}"))?;
    within(Duration::from_secs(30), t, "uniqueness examples")?;
    Ok("Unique, NonUnique, NonUnique, Unique [2, 2, 3]".into())
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let caps = EmpiricalCaps::default();
    let kind = |s: &str| classify_symbolic(&mat(s)).kind;
    check(kind("2 2; 2 2") == VerdictKind::ExclusivelyReducible, "[[2,2],[2,2]]")?;
    check(kind("1 2; 3 1") == VerdictKind::ExclusivelyIrreducible, "[[1,2],[3,1]]")?;
    let p = mat("8 4; 10 6");
    check(kind("8 4; 10 6") == VerdictKind::NotExclusivelyIrreducible, "[[8,4],[10,6]] symbolic")?;
    let e = classify_empirical(&p, caps).map_err(|e| e.to_string())?;
    check(e.kind == VerdictKind::Mixed, format!("[[8,4],[10,6]] empirical {}", e.kind))?;

    let p = mat("2 1; 4 7");
    let v = classify_symbolic(&p);
    check(v.kind == VerdictKind::NotExclusivelyIrreducible, "[[2,1],[4,7]]")?;
    let w = v.witnesses.first().ok_or("no witness for [[2,1],[4,7]]")?;
    check(w.verify(&p) && reducible(&w.morphism), format!("witness {} not reducible", w.morphism))?;
    let (psi1, psi2) = (w.psi1.as_ref().ok_or("no psi1")?, w.psi2.as_ref().ok_or("no psi2")?);
    check(compose(psi2, psi1).unwrap() == w.morphism, "witness split does not recompose")?;

    let mut contradictions = Vec::new();
    let mut swept = 0;
    for e in 0..4usize.pow(4) {
        let v: Vec<usize> = (0..4).map(|i| (e / 4usize.pow(i)) % 4).collect();
        let Ok(p) = IncidenceMatrix::new(vec![vec![v[0], v[1]], vec![v[2], v[3]]]) else { continue };
        swept += 1;
        let s = classify_symbolic(&p);
        let e = classify_empirical(&p, caps).map_err(|e| e.to_string())?;
        if !consistent(s.kind, e.kind) || s.witnesses.iter().any(|w| !w.verify(&p)) {
            contradictions.push(format!("{p}: symbolic {} ({}) vs empirical {}", s.kind, s.rule, e.kind));
        }
    }
    check(
        contradictions.is_empty(),
        format!("contradictions against the incidence-module open questions: {contradictions:?}"),
    )?;
    within(Duration::from_secs(900), t, "matrix sweep")?;
    Ok(format!("4 examples, {swept} matrices swept, 0 contradictions"))
}

/// `μ` images `a b^k a` and `b a^k b` form a biprefix code.
fn criterion_8() -> Outcome {
    let limit = Duration::from_secs(1);
    let k = 49_998;
    let long = |x: char, y: char| format!("{x}{}{x}", y.to_string().repeat(k));
    let mu = m(&[&long('a', 'b'), &long('b', 'a')]);
    check(mu.total_length() == 100_000, "mu total length")?;
    let psi1 = m(&["abbab", "baaba"]);
    let phi = compose(&mu, &psi1).unwrap();
    let t = Instant::now();
    let lf = is_left_factor(&mu, &phi).map_err(|e| e.to_string())?.ok_or("no left factor")?;
    within(limit, t, "long mu")?;
    check(lf.psi1 == psi1, "wrong psi1 for long mu")?;

    let mu = m(&["aab", "abb"]);
    let mut rng = StdRng::seed_from_u64(8);
    let psi1 = Morphism::endo(
        Alphabet::standard(2),
        (0..2).map(|_| (0..16_667).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect()).collect(),
    )
    .unwrap();
    let phi = compose(&mu, &psi1).unwrap();
    let t = Instant::now();
    let lf = is_left_factor(&mu, &phi).map_err(|e| e.to_string())?.ok_or("no left factor for long phi")?;
    within(limit, t, "long phi")?;
    check(lf.psi1 == psi1, "wrong psi1 for long phi")?;
    let mut broken = phi.images().to_vec();
    broken[0].push('a');
    let broken = Morphism::endo(Alphabet::standard(2), broken).unwrap();
    let t = Instant::now();
    check(is_left_factor(&mu, &broken).map_err(|e| e.to_string())?.is_none(), "split found for a non-image")?;
    within(limit, t, "rejection")?;
    Ok(format!("|mu| = 100000 and |phi| = {}, each under 1 s", phi.total_length()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("worked verdicts", criterion_1),
        ("derivation graph of the tree morphism", criterion_2),
        ("factor witnesses", criterion_3),
        ("binary oracle agreement", criterion_4),
        ("algebraic laws", criterion_5),
        ("uniqueness verdicts", criterion_6),
        ("matrix classification", criterion_7),
        ("left-factor speed", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let took = t.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({took:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({took:.2?}): {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
