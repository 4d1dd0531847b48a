//! Factor and left-factor tests, factorisation chains and uniqueness analysis.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::code::{Parses, Trie};
use crate::error::{Error, Result};
use crate::factorbasis::{self, derivation_graph, enumerate_factor_bases, is_reducible_with, FactorBasis, Limits};
use crate::morphisms::{commute, compose, is_equivalent, Morphism};
use crate::words::{runs, show, Word};

fn same_alphabet_endos(a: &Morphism, b: &Morphism) -> Result<()> {
    if !a.is_endomorphism() || !b.is_endomorphism() || a.domain() != b.domain() {
        return Err(Error::AlphabetMismatch("expected endomorphisms on one alphabet".into()));
    }
    Ok(())
}

fn letters(phi: &Morphism, idx: &[usize]) -> Word {
    idx.iter().map(|&i| phi.domain().symbol(i)).collect()
}

/// Caps for decoding-heavy searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub limits: Limits,
    /// Parses enumerated per word.
    pub max_decodings: usize,
    /// Recursion depth for chain building.
    pub max_depth: usize,
    /// Chains kept per morphism.
    pub max_chains: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { limits: Limits::default(), max_decodings: 10_000, max_depth: 64, max_chains: 10_000 }
    }
}

/// Evidence that `φ = ψ2 ∘ μ ∘ ψ1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorWitness {
    /// `v_1..v_n`; repeated entries pad a basis smaller than the alphabet.
    #[serde(serialize_with = "ser_words")]
    pub indexed_basis: Vec<Word>,
    /// `s_i`, a parse of `φ(a_i)` written over the alphabet.
    #[serde(serialize_with = "ser_words")]
    pub decodings: Vec<Word>,
    pub psi1: Morphism,
    pub psi2: Morphism,
}

fn ser_words<S: serde::Serializer>(ws: &[Word], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ws.iter().map(|w| show(w)))
}

/// Per-letter best choice for one covering pattern.
struct Pick {
    len: usize,
    s: Word,
    s_prime: Word,
}

/// Parikh-positive `ψ1, ψ2` with `φ = ψ2 ∘ μ ∘ ψ1`, if any.
///
/// Among all witnesses the one with the shortest `ψ1` wins; ties go to the
/// basis with the smaller total length, then the earlier indexing, then the
/// lexicographically smaller decodings.
pub fn is_factor(mu: &Morphism, phi: &Morphism, caps: Caps) -> Result<Option<FactorWitness>> {
    mu.require_parikh_positive_endo()?;
    phi.require_parikh_positive_endo()?;
    same_alphabet_endos(mu, phi)?;
    let n = phi.n();
    let z_trie = Trie::new(mu.images());
    let (sets, mut truncated) = factorbasis::enumerate_used_sets(phi, caps.limits);
    let mut best: Option<(usize, FactorWitness)> = None;
    'bases: for v in &sets {
        let m = v.len();
        for sigma in (0..n).map(|_| 0..m).multi_cartesian_product() {
            if sigma.iter().unique().count() != m {
                continue;
            }
            let list: Vec<Word> = sigma.iter().map(|&j| v.elements()[j].clone()).collect();
            let trie = Trie::new(&list);
            // per letter: symbol mask of s'_i -> shortest, least (s, s')
            let mut options: Vec<Vec<(u32, Pick)>> = Vec::with_capacity(n);
            for w in phi.images() {
                let parses = Parses::new(&trie, w);
                let ds = parses.enumerate(caps.max_decodings);
                if ds.len() >= caps.max_decodings {
                    truncated = true;
                }
                let mut by_mask: HashMap<u32, Pick> = HashMap::new();
                for d in ds {
                    let s = letters(phi, &d);
                    let zp = Parses::new(&z_trie, &s);
                    for sp in zp.enumerate(caps.max_decodings) {
                        let mask = sp.iter().fold(0u32, |acc, &i| acc | 1 << i);
                        let pick = Pick { len: sp.len(), s: s.clone(), s_prime: letters(phi, &sp) };
                        let better = match by_mask.get(&mask) {
                            None => true,
                            Some(old) => (pick.len, &pick.s_prime, &pick.s) < (old.len, &old.s_prime, &old.s),
                        };
                        if better {
                            by_mask.insert(mask, pick);
                        }
                    }
                }
                if by_mask.is_empty() {
                    options.clear();
                    break;
                }
                let mut opts: Vec<(u32, Pick)> = by_mask.into_iter().collect();
                opts.sort_by(|a, b| (a.1.len, &a.1.s_prime).cmp(&(b.1.len, &b.1.s_prime)));
                options.push(opts);
            }
            if options.len() != n {
                continue;
            }
            let full = (1u32 << n) - 1;
            let mut local: Option<(usize, Vec<&Pick>)> = None;
            for combo in options.iter().map(|o| o.iter()).multi_cartesian_product() {
                if combo.iter().fold(0, |acc, (mask, _)| acc | mask) != full {
                    continue;
                }
                let total: usize = combo.iter().map(|(_, p)| p.len).sum();
                let picks: Vec<&Pick> = combo.iter().map(|(_, p)| p).collect();
                let better = match &local {
                    None => true,
                    Some((t, old)) => {
                        total < *t || (total == *t && picks.iter().map(|p| &p.s).lt(old.iter().map(|p| &p.s)))
                    }
                };
                if better {
                    local = Some((total, picks));
                }
            }
            let Some((total, picks)) = local else { continue };
            if best.as_ref().is_some_and(|(t, _)| *t <= total) {
                continue;
            }
            let alpha = phi.domain().clone();
            let psi1 = Morphism::endo(alpha.clone(), picks.iter().map(|p| p.s_prime.clone()).collect())?;
            let psi2 = Morphism::endo(alpha, list.clone())?;
            debug_assert_eq!(&compose(&psi2, &compose(mu, &psi1)?)?, phi);
            let witness = FactorWitness {
                indexed_basis: list,
                decodings: picks.iter().map(|p| p.s.clone()).collect(),
                psi1,
                psi2,
            };
            best = Some((total, witness));
            if total == n {
                break 'bases;
            }
        }
    }
    match best {
        Some((_, w)) => Ok(Some(w)),
        None if truncated => Err(Error::Truncated("factor search hit its limits".into())),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseMethod {
    PrefixCode,
    SuffixCode,
    DynamicProgramming,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeftFactor {
    pub psi1: Morphism,
    /// Every image has exactly one parse, so `ψ1` is forced.
    pub unique: bool,
    pub method: ParseMethod,
}

/// `ψ1` with `φ = μ ∘ ψ1`. Prefix and suffix codes are parsed in one linear
/// pass; anything else goes through the parse table.
pub fn is_left_factor(mu: &Morphism, phi: &Morphism) -> Result<Option<LeftFactor>> {
    same_alphabet_endos(mu, phi)?;
    let alpha = phi.domain().clone();
    let trie = Trie::new(mu.images());
    if trie.is_prefix_code() {
        let mut images = Vec::with_capacity(phi.n());
        for w in phi.images() {
            match trie.parse_prefix_code(w) {
                Some(d) => images.push(letters(phi, &d)),
                None => return Ok(None),
            }
        }
        let psi1 = Morphism::endo(alpha, images)?;
        return Ok(Some(LeftFactor { psi1, unique: true, method: ParseMethod::PrefixCode }));
    }
    let reversed: Vec<Word> = mu.images().iter().map(|w| crate::words::reverse(w)).collect();
    let rtrie = Trie::new(&reversed);
    if rtrie.is_prefix_code() {
        let mut images = Vec::with_capacity(phi.n());
        for w in phi.images() {
            match rtrie.parse_prefix_code(&crate::words::reverse(w)) {
                Some(mut d) => {
                    d.reverse();
                    images.push(letters(phi, &d));
                }
                None => return Ok(None),
            }
        }
        let psi1 = Morphism::endo(alpha, images)?;
        return Ok(Some(LeftFactor { psi1, unique: true, method: ParseMethod::SuffixCode }));
    }
    let mut images = Vec::with_capacity(phi.n());
    let mut unique = true;
    for w in phi.images() {
        let p = Parses::new(&trie, w);
        match p.least() {
            Some(d) => {
                unique &= p.count() == 1u32.into();
                images.push(letters(phi, &d));
            }
            None => return Ok(None),
        }
    }
    let psi1 = Morphism::endo(alpha, images)?;
    Ok(Some(LeftFactor { psi1, unique, method: ParseMethod::DynamicProgramming }))
}

pub fn prime_factors(mut k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        while k.is_multiple_of(p) {
            out.push(p);
            k /= p;
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Prime exponents of a unary morphism `a ↦ a^k`; empty for the unit.
pub fn unary_factorization(phi: &Morphism) -> Result<Vec<usize>> {
    if phi.n() != 1 || !phi.is_endomorphism() {
        return Err(Error::AlphabetMismatch("unary factorisation needs a one-letter endomorphism".into()));
    }
    Ok(prime_factors(phi.image(0).len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorFlags {
    /// `None` when the factor lies outside the decision procedure.
    pub irreducible: Option<bool>,
    pub injective: bool,
    pub unit: bool,
}

/// Factors listed outermost first: `[ψk, ..., ψ1]` composes to `ψk ∘ ... ∘ ψ1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationChain {
    pub factors: Vec<Morphism>,
    pub flags: Vec<FactorFlags>,
    /// Every factor is irreducible and not a unit.
    pub complete: bool,
}

impl FactorizationChain {
    pub fn new(factors: Vec<Morphism>) -> Self {
        let flags: Vec<FactorFlags> = factors
            .iter()
            .map(|f| FactorFlags {
                irreducible: factorbasis::is_reducible(f).ok().map(|r| !r.reducible),
                injective: f.is_injective(),
                unit: f.is_unit(),
            })
            .collect();
        let complete = flags.iter().all(|f| f.irreducible == Some(true) && !f.unit);
        FactorizationChain { factors, flags, complete }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn compose(&self) -> Result<Morphism> {
        crate::morphisms::compose_chain(&self.factors)
    }

    /// `ψj ∘ ... ∘ ψ1` for `j = 1..=k`.
    pub fn prefix_composites(&self) -> Result<Vec<Morphism>> {
        let mut out: Vec<Morphism> = Vec::with_capacity(self.len());
        for f in self.factors.iter().rev() {
            let next = match out.last() {
                Some(prev) => compose(f, prev)?,
                None => f.clone(),
            };
            out.push(next);
        }
        Ok(out)
    }
}

impl std::fmt::Display for FactorizationChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.factors.iter().map(|m| format!("[{m}]")).join(" ∘ "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorizations {
    pub chains: Vec<FactorizationChain>,
    /// Some cap was reached; more chains may exist.
    pub truncated: bool,
    /// Some reducible morphism met during the search had no split with a
    /// Parikh-positive right factor, so at least one chain ends early.
    pub incomplete: bool,
}

#[derive(Clone, Default)]
struct Partial {
    chains: Vec<Vec<Morphism>>,
    truncated: bool,
    incomplete: bool,
}

fn chains_equivalent(a: &[Morphism], b: &[Morphism]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| matches!(is_equivalent(x, y), Ok(Some(_))))
}

fn dedup_chains(chains: Vec<Vec<Morphism>>) -> Vec<Vec<Morphism>> {
    let mut out: Vec<Vec<Morphism>> = Vec::new();
    for c in chains {
        if !out.iter().any(|o| chains_equivalent(o, &c)) {
            out.push(c);
        }
    }
    out
}

struct ChainSearch {
    caps: Caps,
    memo: HashMap<Morphism, Partial>,
}

impl ChainSearch {
    fn chains(&mut self, phi: &Morphism, depth: usize) -> Result<Partial> {
        if let Some(p) = self.memo.get(phi) {
            return Ok(p.clone());
        }
        let result = self.compute(phi, depth)?;
        self.memo.insert(phi.clone(), result.clone());
        Ok(result)
    }

    fn compute(&mut self, phi: &Morphism, depth: usize) -> Result<Partial> {
        let single = |truncated, incomplete| Partial { chains: vec![vec![phi.clone()]], truncated, incomplete };
        if phi.is_unit() {
            return Ok(Partial { chains: vec![vec![]], ..Default::default() });
        }
        if phi.n() == 1 {
            let a = phi.domain().symbol(0);
            let primes = prime_factors(phi.image(0).len());
            let mut orders: Vec<Vec<usize>> = primes.iter().copied().permutations(primes.len()).unique().collect();
            let truncated = orders.len() > self.caps.max_chains;
            orders.truncate(self.caps.max_chains);
            let chains = orders
                .into_iter()
                .map(|o| {
                    o.into_iter()
                        .map(|p| Morphism::endo(phi.domain().clone(), vec![vec![a; p]]))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Partial { chains, truncated, incomplete: false });
        }
        let verdict = match is_reducible_with(phi, self.caps.limits) {
            Ok(r) => r,
            Err(Error::Truncated(_)) => return Ok(single(true, false)),
            Err(e) => return Err(e),
        };
        if !verdict.reducible {
            return Ok(single(false, false));
        }
        if depth == 0 {
            return Ok(single(true, false));
        }
        let graph = derivation_graph(phi, self.caps.limits)?;
        let mut out = Partial { truncated: graph.truncated, ..Default::default() };
        let alpha = phi.domain().clone();
        for sink in graph.sinks() {
            if sink.len() != phi.n() {
                continue;
            }
            let psi2 = Morphism::endo(alpha.clone(), sink.elements().to_vec())?;
            let trie = Trie::new(sink.elements());
            let per_letter: Vec<Vec<Word>> = phi
                .images()
                .iter()
                .map(|w| {
                    let ds = Parses::new(&trie, w).enumerate(self.caps.max_decodings);
                    if ds.len() >= self.caps.max_decodings {
                        out.truncated = true;
                    }
                    ds.iter().map(|d| letters(phi, d)).collect()
                })
                .collect();
            let left = self.chains(&psi2, depth - 1)?;
            out.truncated |= left.truncated;
            out.incomplete |= left.incomplete;
            for choice in per_letter.iter().map(|c| c.iter()).multi_cartesian_product() {
                let psi1 = Morphism::endo(alpha.clone(), choice.into_iter().cloned().collect())?;
                if !psi1.is_parikh_positive() {
                    continue;
                }
                let right = self.chains(&psi1, depth - 1)?;
                out.truncated |= right.truncated;
                out.incomplete |= right.incomplete;
                for l in &left.chains {
                    for r in &right.chains {
                        if out.chains.len() >= self.caps.max_chains {
                            out.truncated = true;
                            break;
                        }
                        out.chains.push(l.iter().chain(r).cloned().collect());
                    }
                }
            }
        }
        if out.chains.is_empty() {
            out.chains.push(vec![phi.clone()]);
            out.incomplete = true;
        }
        out.chains = dedup_chains(out.chains);
        Ok(out)
    }
}

/// Chains of irreducible non-unit factors composing to `φ`, found by splitting
/// along maximally derived bases of full size and recursing on both sides.
/// Chains whose factors are pairwise equivalent are reported once.
pub fn complete_factorizations(phi: &Morphism, caps: Caps) -> Result<Factorizations> {
    phi.require_parikh_positive_endo()?;
    let mut search = ChainSearch { caps, memo: HashMap::new() };
    let p = search.chains(phi, caps.max_depth)?;
    Ok(Factorizations {
        chains: p.chains.into_iter().map(FactorizationChain::new).collect(),
        truncated: p.truncated,
        incomplete: p.incomplete,
    })
}

fn in_pattern(w: &[char], x: char, y: char, at_least_one_y: bool) -> bool {
    // x+ (y x+)+  or  x+ (y x+)*
    let r = runs(w);
    let ok = !r.is_empty()
        && r.first().map(|p| p.0) == Some(x)
        && r.last().map(|p| p.0) == Some(x)
        && r.iter().all(|&(c, k)| (c == x) || (c == y && k == 1));
    ok && (!at_least_one_y || r.len() >= 3)
}

/// First `j` (counting factors from the right, from 1) at which
/// `ψj ∘ ... ∘ ψ1` sends one letter into `x⁺(yx⁺)⁺` and the other into
/// `x⁺(yx⁺)*`, for either assignment of images and letters.
pub fn detect_aba_ambiguity(chain: &FactorizationChain) -> Result<Option<usize>> {
    let Some(first) = chain.factors.first() else { return Ok(None) };
    if first.n() != 2 {
        return Ok(None);
    }
    let syms = first.domain().symbols();
    for (j, c) in chain.prefix_composites()?.iter().enumerate() {
        for (w1, w2) in [(c.image(0), c.image(1)), (c.image(1), c.image(0))] {
            for (x, y) in [(syms[0], syms[1]), (syms[1], syms[0])] {
                if in_pattern(w1, x, y, true) && in_pattern(w2, x, y, false) {
                    return Ok(Some(j + 1));
                }
            }
        }
    }
    Ok(None)
}

/// Some morphism `ρ` with `ρ(x) = y`.
fn maps_onto(x: &[char], y: &[char], a: char) -> bool {
    let ca = x.iter().filter(|&&c| c == a).count();
    let cb = x.len() - ca;
    for la in 1..=y.len() {
        for lb in 1..=y.len() {
            if ca * la + cb * lb != y.len() {
                continue;
            }
            let mut img: [Option<&[char]>; 2] = [None, None];
            let mut pos = 0;
            let ok = x.iter().all(|&c| {
                let (slot, l) = if c == a { (0, la) } else { (1, lb) };
                let piece = &y[pos..pos + l];
                pos += l;
                match img[slot] {
                    Some(prev) => prev == piece,
                    None => {
                        img[slot] = Some(piece);
                        true
                    }
                }
            });
            if ok {
                return true;
            }
        }
    }
    false
}

/// For binary `μ` with a single-letter image: distinct `x, y` of length at
/// least two, other than the long image itself, each satisfying
/// `u ∈ {x, β}⁺` or `u ∈ x x⁺` (`u` the long image, `β` the short one), with
/// no morphism carrying one onto the other.
pub fn detect_unit_image_nonuniqueness(mu: &Morphism) -> Result<Option<(Word, Word)>> {
    mu.require_parikh_positive_endo()?;
    if mu.n() != 2 {
        return Ok(None);
    }
    let (long, short) = if mu.image(1).len() == 1 {
        (mu.image(0), mu.image(1))
    } else if mu.image(0).len() == 1 {
        (mu.image(1), mu.image(0))
    } else {
        return Ok(None);
    };
    let a = mu.domain().symbol(0);
    let mut cands: Vec<Word> = crate::words::factors(long)
        .into_iter()
        .filter(|x| x.len() >= 2 && x.as_slice() != long)
        .filter(|x| {
            let gen = crate::code::is_member(&[x.clone(), short.to_vec()], long);
            let power = long.len() % x.len() == 0 && long.chunks(x.len()).all(|c| c == x.as_slice());
            gen || power
        })
        .collect();
    cands.sort_by(|p, q| crate::words::shortlex(p, q));
    for (x, y) in cands.iter().tuple_combinations() {
        if !maps_onto(x, y, a) && !maps_onto(y, x, a) {
            return Ok(Some((x.clone(), y.clone())));
        }
    }
    Ok(None)
}

/// First position (from the right, from 1) of a non-injective factor other
/// than the rightmost one.
pub fn detect_noninjective_factor(chain: &FactorizationChain) -> Option<usize> {
    let k = chain.len();
    (2..=k).find(|&j| !chain.factors[k - j].is_injective())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Unique,
    NonUnique,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub tag: String,
    pub detail: String,
}

fn reason(tag: &str, detail: impl Into<String>) -> Reason {
    Reason { tag: tag.into(), detail: detail.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
    /// One representative per class of factorisation; two or more back a `NonUnique`.
    pub chains: Vec<FactorizationChain>,
    /// Exactly one maximally derived factor basis; `None` when not computed.
    pub leftmost_factor_unique: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unary_exponents: Option<Vec<usize>>,
    pub truncated: bool,
}

impl UniquenessReport {
    fn new(verdict: Verdict) -> Self {
        UniquenessReport {
            verdict,
            reasons: Vec::new(),
            chains: Vec::new(),
            leftmost_factor_unique: None,
            unary_exponents: None,
            truncated: false,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime_power(k: usize) -> bool {
    k >= 2 && prime_factors(k).iter().all_equal()
}

/// Exponents of `x^{e1} y^{f1} ... x^{e_{n+1}}` when the word has that
/// shape with every exponent at least two.
fn block_exponents(w: &[char], x: char) -> Option<(Vec<usize>, Vec<usize>)> {
    let r = runs(w);
    if r.first()?.0 != x || r.last()?.0 != x || r.iter().any(|&(_, k)| k < 2) {
        return None;
    }
    let xs = r.iter().filter(|p| p.0 == x).map(|p| p.1).collect();
    let ys = r.iter().filter(|p| p.0 != x).map(|p| p.1).collect();
    Some((xs, ys))
}

/// Decides unique reducibility for binary morphisms whose images are
/// alternating blocks `a^{≥2} b^{≥2} ... a^{≥2}` with a non-trivial block gcd.
/// Everything else is `Unknown`.
pub fn uniquely_reducible_blockform(phi: &Morphism, limits: Limits) -> Result<UniquenessReport> {
    phi.require_parikh_positive_endo()?;
    let outside = |why: &str| {
        let mut r = UniquenessReport::new(Verdict::Unknown);
        r.reasons.push(reason("outside-block-class", why));
        Ok(r)
    };
    if phi.n() != 2 {
        return outside("needs a binary alphabet");
    }
    let a = phi.domain().symbol(0);
    let b = phi.domain().symbol(1);
    let (Some((xa, ya)), Some((xb, yb))) = (block_exponents(phi.image(0), a), block_exponents(phi.image(1), a)) else {
        return outside("images are not a-delimited blocks with exponents at least two");
    };
    let k1 = xa.iter().chain(&xb).fold(0, |g, &e| gcd(g, e));
    let k2 = ya.iter().chain(&yb).fold(0, |g, &e| gcd(g, e));
    if k1 == 1 && k2 == 1 {
        return outside("both block gcds are 1");
    }
    let all = enumerate_factor_bases(phi, limits)?;
    let mut report = UniquenessReport::new(Verdict::Unknown);
    report.truncated = all.truncated;
    let starts = |w: &Word, c: char| w.first() == Some(&c);
    let ends = |w: &Word, c: char| w.last() == Some(&c);
    let shape_a = |v: &FactorBasis| {
        v.len() == 2
            && v.elements().iter().permutations(2).any(|p| {
                let (u1, u2) = (p[0], p[1]);
                u1.len() >= 3 && starts(u1, a) && ends(u1, a) && u2.len() >= 2 && starts(u2, a)
            })
    };
    let shape_b = |v: &FactorBasis| {
        v.len() == 2
            && v.elements().iter().permutations(2).any(|p| {
                let (u1, u2) = (p[0], p[1]);
                u1.len() >= 3 && starts(u1, a) && ends(u1, b) && u2.len() >= 3 && starts(u2, b) && ends(u2, a)
            })
    };
    let detail = format!("block gcds k1={k1}, k2={k2}");
    let verdict = if is_prime_power(k1) && k2 == 1 {
        match all.nontrivial().find(|v| shape_a(v)) {
            None => {
                report.reasons.push(reason("blockform-a-power", detail));
                Verdict::Unique
            }
            Some(v) => {
                report.reasons.push(reason("blockform-a-boundary-basis", format!("{detail}; basis {v}")));
                Verdict::NonUnique
            }
        }
    } else if k1 == 1 && is_prime_power(k2) {
        match all.nontrivial().find(|v| shape_b(v)) {
            None => {
                report.reasons.push(reason("blockform-b-power", detail));
                Verdict::Unique
            }
            Some(v) => {
                report.reasons.push(reason("blockform-ab-boundary-basis", format!("{detail}; basis {v}")));
                Verdict::NonUnique
            }
        }
    } else {
        report.reasons.push(reason("blockform-gcd", format!("{detail}: no single maximal power basis")));
        Verdict::NonUnique
    };
    if verdict == Verdict::Unknown || (all.truncated && verdict == Verdict::Unique) {
        report.verdict = Verdict::Unknown;
        return Ok(report);
    }
    report.verdict = verdict;
    let graph = factorbasis::DerivationGraph::from_bases(all.nontrivial().cloned().collect(), all.truncated);
    let sinks = graph.sinks();
    report.leftmost_factor_unique = Some(sinks.len() == 1);
    for s in sinks.iter().take(if verdict == Verdict::NonUnique { 2 } else { 1 }) {
        let split = factorbasis::split_from_basis(s, phi)?;
        report.chains.push(FactorizationChain::new(vec![split.psi2, split.psi1]));
    }
    Ok(report)
}

fn same_class(a: &FactorizationChain, b: &FactorizationChain) -> bool {
    if chains_equivalent(&a.factors, &b.factors) {
        return true;
    }
    if a.len() != b.len() {
        return false;
    }
    let all_commute =
        |c: &FactorizationChain| c.factors.iter().tuple_combinations().all(|(x, y)| commute(x, y).unwrap_or(false));
    if !all_commute(a) || !all_commute(b) {
        return false;
    }
    // same multiset of equivalence classes
    let mut used = vec![false; b.len()];
    a.factors.iter().all(|x| {
        match (0..b.len()).find(|&j| !used[j] && matches!(is_equivalent(x, &b.factors[j]), Ok(Some(_)))) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// Combines the sufficient non-uniqueness criteria with chain enumeration.
pub fn uniqueness_report(phi: &Morphism, caps: Caps) -> Result<UniquenessReport> {
    phi.require_parikh_positive_endo()?;
    if phi.is_unit() {
        let mut r = UniquenessReport::new(Verdict::Unique);
        r.reasons.push(reason("unit", "automorphisms have the empty factorisation"));
        r.leftmost_factor_unique = Some(true);
        return Ok(r);
    }
    let facts = complete_factorizations(phi, caps)?;
    let mut report = UniquenessReport::new(Verdict::Unknown);
    report.truncated = facts.truncated;
    if phi.n() == 1 {
        let primes = unary_factorization(phi)?;
        report.verdict = Verdict::Unique;
        report.reasons.push(reason("unary", format!("prime exponents {primes:?}, unique up to reordering")));
        report.leftmost_factor_unique = Some(primes.iter().all_equal());
        report.unary_exponents = Some(primes);
        report.chains = facts.chains.into_iter().take(1).collect();
        return Ok(report);
    }

    let mut certified = false;
    for chain in &facts.chains {
        if let Some(j) = detect_aba_ambiguity(chain)? {
            report.reasons.push(reason("aba-subword", format!("prefix composite {j} of {chain}")));
            certified = true;
            break;
        }
    }
    let mut factors: BTreeSet<Morphism> = BTreeSet::from([phi.clone()]);
    for chain in &facts.chains {
        factors.extend(chain.factors.iter().cloned());
    }
    for mu in &factors {
        if let Some((x, y)) = detect_unit_image_nonuniqueness(mu)? {
            report
                .reasons
                .push(reason("unit-image", format!("factor [{mu}] admits unrelated {} and {}", show(&x), show(&y))));
            certified = true;
            break;
        }
    }
    for chain in &facts.chains {
        if let Some(j) = detect_noninjective_factor(chain) {
            report.reasons.push(reason("non-injective-factor", format!("factor {j} of {chain}")));
            certified = true;
            break;
        }
    }

    let mut classes: Vec<FactorizationChain> = Vec::new();
    for chain in facts.chains.iter().filter(|c| c.complete) {
        if !classes.iter().any(|c| same_class(c, chain)) {
            classes.push(chain.clone());
        }
    }
    let (max, _) = factorbasis::maximally_derived_bases(phi, caps.limits)?;
    report.leftmost_factor_unique = Some(max.len() <= 1);
    let open = facts.truncated || facts.incomplete;
    report.verdict = if certified || classes.len() >= 2 {
        if classes.len() >= 2 {
            report.reasons.push(reason("distinct-chains", format!("{} inequivalent factorisations", classes.len())));
        }
        Verdict::NonUnique
    } else if open {
        report.reasons.push(reason(
            if facts.truncated { "truncated" } else { "incomplete-chain" },
            "chain enumeration could not be completed",
        ));
        Verdict::Unknown
    } else {
        report.reasons.push(reason("single-chain", "one factorisation up to equivalence"));
        Verdict::Unique
    };
    report.chains = if classes.is_empty() { facts.chains } else { classes };
    Ok(report)
}
