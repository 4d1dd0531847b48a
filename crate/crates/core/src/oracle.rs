//! Brute-force ground truth for small instances. Deliberately naive and
//! independent of the trie-based parser used elsewhere.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::factorbasis::FactorBasis;
use crate::morphisms::{compose, Morphism};
use crate::words::{factors, shortlex, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Longest image any candidate factor may use.
    pub max_image_len: usize,
    /// Most candidate tuples tried before refusing.
    pub max_candidates: usize,
}

impl SearchBounds {
    /// Bounds that just cover `φ`.
    pub fn covering(phi: &Morphism) -> Self {
        SearchBounds { max_image_len: phi.max_image_len(), max_candidates: 50_000_000 }
    }
}

fn check_bounds(phi: &Morphism, bounds: &SearchBounds) -> Result<()> {
    if bounds.max_image_len == 0 || bounds.max_candidates == 0 {
        return Err(Error::BoundsInsufficient("bounds must be positive".into()));
    }
    if bounds.max_image_len < phi.max_image_len() {
        return Err(Error::BoundsInsufficient(format!(
            "image length bound {} is below the longest image ({})",
            bounds.max_image_len,
            phi.max_image_len()
        )));
    }
    Ok(())
}

/// All `u` over the domain of `chi` with `|u| ≤ |target|` and `chi(u) = target`.
fn preimages(chi: &Morphism, target: &[char]) -> Vec<Word> {
    fn go(chi: &Morphism, target: &[char], u: &mut Word, len: usize, out: &mut Vec<Word>) {
        if len == target.len() {
            if chi.apply(u).expect("domain letters") == target {
                out.push(u.clone());
            }
            return;
        }
        if u.len() == target.len() {
            return;
        }
        for (i, &c) in chi.domain().symbols().iter().enumerate() {
            let l = chi.image(i).len();
            if len + l <= target.len() {
                u.push(c);
                go(chi, target, u, len + l, out);
                u.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(chi, target, &mut Vec::new(), 0, &mut out);
    out
}

fn psi2_candidates(phi: &Morphism) -> Vec<Word> {
    let mut set: BTreeSet<Word> = BTreeSet::new();
    for w in phi.images() {
        set.extend(factors(w));
    }
    set.into_iter().collect()
}

/// Some `(ψ1, ψ2)`, neither an automorphism, with `ψ2 ∘ ψ1 = φ`.
pub fn oracle_reducible_witness(phi: &Morphism, bounds: SearchBounds) -> Result<Option<(Morphism, Morphism)>> {
    phi.require_parikh_positive_endo()?;
    check_bounds(phi, &bounds)?;
    let alpha = phi.domain();
    let n = phi.n();
    let mut cands = psi2_candidates(phi);
    // a letter ψ1 never uses can carry any image; one long word covers that case
    let free = vec![alpha.symbol(0); 2];
    if !cands.contains(&free) {
        cands.push(free);
    }
    let mut tried = 0usize;
    for tuple in (0..n).map(|_| cands.iter()).multi_cartesian_product() {
        tried += 1;
        if tried > bounds.max_candidates {
            return Err(Error::BoundsInsufficient("candidate limit reached".into()));
        }
        let psi2 = Morphism::endo(alpha.clone(), tuple.into_iter().cloned().collect())?;
        let per_letter: Vec<Vec<Word>> = phi.images().iter().map(|w| preimages(&psi2, w)).collect();
        if per_letter.iter().any(Vec::is_empty) {
            continue;
        }
        for choice in per_letter.iter().map(|c| c.iter()).multi_cartesian_product() {
            let psi1 = Morphism::endo(alpha.clone(), choice.into_iter().cloned().collect())?;
            if !psi1.is_automorphism() && !psi2.is_automorphism() {
                return Ok(Some((psi1, psi2)));
            }
        }
    }
    Ok(None)
}

pub fn oracle_is_reducible(phi: &Morphism, bounds: SearchBounds) -> Result<bool> {
    Ok(oracle_reducible_witness(phi, bounds)?.is_some())
}

/// All ordered parses of `w` over `v` by plain prefix matching.
fn naive_parses(w: &[char], v: &[Word]) -> Vec<Vec<usize>> {
    if w.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, e) in v.iter().enumerate() {
        if w.starts_with(e) {
            for mut rest in naive_parses(&w[e.len()..], v) {
                rest.insert(0, i);
                out.push(rest);
            }
        }
    }
    out
}

fn generates(v: &[Word], w: &[char]) -> bool {
    !naive_parses(w, v).is_empty()
}

/// Irredundant sets of at most `n` factors generating every image, in which
/// one parse per image can be picked so that every element is used.
pub fn oracle_factor_bases(phi: &Morphism, bounds: SearchBounds) -> Result<Vec<FactorBasis>> {
    phi.require_parikh_positive_endo()?;
    check_bounds(phi, &bounds)?;
    let images: Vec<Word> = phi.images().iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let cands = psi2_candidates(phi);
    let mut out = Vec::new();
    let mut tried = 0usize;
    for size in 1..=phi.n() {
        for subset in cands.iter().combinations(size) {
            tried += 1;
            if tried > bounds.max_candidates {
                return Err(Error::BoundsInsufficient("candidate limit reached".into()));
            }
            let v: Vec<Word> = subset.into_iter().cloned().collect();
            if !images.iter().all(|w| generates(&v, w)) {
                continue;
            }
            let irredundant = (0..v.len()).all(|i| {
                let rest: Vec<Word> = v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, e)| e.clone()).collect();
                rest.is_empty() || !generates(&rest, &v[i])
            });
            if !irredundant {
                continue;
            }
            let full: u64 = (1u64 << v.len()) - 1;
            let mut reach: BTreeSet<u64> = BTreeSet::from([0]);
            for w in &images {
                let masks: BTreeSet<u64> =
                    naive_parses(w, &v).iter().map(|p| p.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
                reach = reach.iter().flat_map(|r| masks.iter().map(move |m| r | m)).collect();
            }
            if reach.contains(&full) {
                let mut v = v;
                v.sort_by(|a, b| shortlex(a, b));
                out.push(FactorBasis::new(v)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Parikh-positive `ψ1, ψ2` with `ψ2 ∘ μ ∘ ψ1 = φ`, by exhaustion.
pub fn oracle_is_factor(mu: &Morphism, phi: &Morphism, bounds: SearchBounds) -> Result<bool> {
    phi.require_parikh_positive_endo()?;
    mu.require_parikh_positive_endo()?;
    if mu.domain() != phi.domain() {
        return Err(Error::AlphabetMismatch("μ and φ must share an alphabet".into()));
    }
    check_bounds(phi, &bounds)?;
    let alpha = phi.domain();
    let n = phi.n();
    let cands = psi2_candidates(phi);
    let mut tried = 0usize;
    for tuple in (0..n).map(|_| cands.iter()).multi_cartesian_product() {
        tried += 1;
        if tried > bounds.max_candidates {
            return Err(Error::BoundsInsufficient("candidate limit reached".into()));
        }
        let psi2 = Morphism::endo(alpha.clone(), tuple.into_iter().cloned().collect())?;
        if !psi2.is_parikh_positive() {
            continue;
        }
        let chi = compose(&psi2, mu)?;
        let per_letter: Vec<Vec<Word>> = phi.images().iter().map(|w| preimages(&chi, w)).collect();
        if per_letter.iter().any(Vec::is_empty) {
            continue;
        }
        let found = per_letter
            .iter()
            .map(|c| c.iter())
            .multi_cartesian_product()
            .any(|choice| alpha.symbols().iter().all(|c| choice.iter().any(|u| u.contains(c))));
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(images: &[&str]) -> Morphism {
        Morphism::from_images(images).unwrap()
    }

    #[test]
    fn first_pair_witnesses() {
        let phi2 = m(&["a", "babb"]);
        assert!(!oracle_is_reducible(&phi2, SearchBounds::covering(&phi2)).unwrap());
        let phi1 = m(&["a", "aabb"]);
        let (p1, p2) = oracle_reducible_witness(&phi1, SearchBounds::covering(&phi1)).unwrap().unwrap();
        assert_eq!(compose(&p2, &p1).unwrap(), phi1);
        assert!(!oracle_is_reducible(&m(&["b", "a"]), SearchBounds::covering(&m(&["b", "a"]))).unwrap());
    }

    #[test]
    fn refuses_short_bounds() {
        let phi = m(&["a", "aabb"]);
        let short = SearchBounds { max_image_len: 2, max_candidates: 10 };
        assert!(matches!(oracle_is_reducible(&phi, short), Err(Error::BoundsInsufficient(_))));
    }

    #[test]
    fn factor_examples() {
        let phi = m(&["aaaab", "baaaa"]);
        assert!(oracle_is_factor(&m(&["bb", "a"]), &phi, SearchBounds::covering(&phi)).unwrap());
        let phi = m(&["ababbababbabb", "abbabbababb"]);
        assert!(!oracle_is_factor(&m(&["aab", "aba"]), &phi, SearchBounds::covering(&phi)).unwrap());
        let phi = m(&["abb", "ba"]);
        assert!(oracle_is_factor(&m(&["b", "a"]), &phi, SearchBounds::covering(&phi)).unwrap());
    }

    #[test]
    fn unary_bases() {
        let phi = m(&["aaaa"]);
        let got: Vec<String> =
            oracle_factor_bases(&phi, SearchBounds::covering(&phi)).unwrap().iter().map(|b| b.to_string()).collect();
        assert_eq!(got, vec!["{a}", "{aa}", "{aaaa}"]);
    }
}
