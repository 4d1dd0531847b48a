//! Exhaustive sweeps over small instances.

use morphkit::cli::binary_corpus;
use morphkit::factorbasis::{enumerate_factor_bases, is_reducible, Limits};
use morphkit::incidence::{
    classify_empirical, classify_symbolic, consistent, EmpiricalCaps, IncidenceMatrix, VerdictKind,
};
use morphkit::oracle::{oracle_factor_bases, oracle_is_reducible, SearchBounds};

#[test]
fn binary_corpus_matches_the_oracle() {
    let corpus = binary_corpus(8);
    assert_eq!(corpus.len(), 3020);
    for phi in &corpus {
        let bounds = SearchBounds::covering(phi);
        assert_eq!(is_reducible(phi).unwrap().reducible, oracle_is_reducible(phi, bounds).unwrap(), "{phi}");
        let mut mine: Vec<_> = enumerate_factor_bases(phi, Limits::default())
            .unwrap()
            .bases
            .into_iter()
            .map(|e| e.basis.canonical())
            .collect();
        let mut theirs: Vec<_> = oracle_factor_bases(phi, bounds).unwrap().into_iter().map(|v| v.canonical()).collect();
        mine.sort();
        theirs.sort();
        assert_eq!(mine, theirs, "{phi}");
    }
}

fn two_by_two(max: usize) -> impl Iterator<Item = IncidenceMatrix> {
    let k = max + 1;
    (0..k.pow(4)).filter_map(move |e| {
        let v: Vec<usize> = (0..4).map(|i| (e / k.pow(i as u32)) % k).collect();
        IncidenceMatrix::new(vec![vec![v[0], v[1]], vec![v[2], v[3]]]).ok()
    })
}

#[test]
fn symbolic_never_contradicts_empirical() {
    for p in two_by_two(3) {
        let s = classify_symbolic(&p);
        let e = classify_empirical(&p, EmpiricalCaps::default()).unwrap();
        assert!(consistent(s.kind, e.kind), "{p}: symbolic {} ({}) vs empirical {}", s.kind, s.rule, e.kind);
        for w in &s.witnesses {
            assert!(w.verify(&p), "{p}: witness {} does not check", w.morphism);
        }
    }
}

/// The shared-divisor family read as "not coprime": report any realisation
/// that is irreducible instead of failing outright on the first.
#[test]
fn shared_divisor_family_is_reducible() {
    let mut counterexamples = Vec::new();
    for al in 2..=6usize {
        for be in 2..=6usize {
            let p = IncidenceMatrix::new(vec![vec![1, al], vec![1, be]]).unwrap();
            let e = classify_empirical(&p, EmpiricalCaps::default()).unwrap();
            let coprime = (2..=al.min(be)).all(|d| al % d != 0 || be % d != 0);
            if !coprime && e.kind != VerdictKind::ExclusivelyReducible {
                counterexamples.push(p.to_string());
            }
        }
    }
    assert!(counterexamples.is_empty(), "{counterexamples:?}");
}

/// Either condition alone of the gcd and dominance test fires; each firing
/// must be backed by a reducible realisation.
#[test]
fn gcd_and_dominance_fire_separately() {
    for p in two_by_two(5) {
        let s = classify_symbolic(&p);
        if s.kind == VerdictKind::NotExclusivelyIrreducible {
            let w = &s.witnesses[0];
            assert!(w.verify(&p));
            assert!(is_reducible(&w.morphism).unwrap().reducible, "{p}");
        }
    }
}
