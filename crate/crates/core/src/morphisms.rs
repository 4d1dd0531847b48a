//! Morphisms of free semigroups and their algebra.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::code;
use crate::error::{Error, Result};
use crate::words::{self, show, Alphabet, Word};

/// A total map from domain symbols to non-empty words over the codomain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} domain symbols",
                images.len(),
                domain.len()
            )));
        }
        for img in &images {
            if img.is_empty() {
                return Err(Error::EmptyWord);
            }
            codomain.check_word(img)?;
        }
        Ok(Morphism { domain, codomain, images })
    }

    pub fn endo(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        Morphism::new(alphabet.clone(), alphabet, images)
    }

    /// Endomorphism over the standard alphabet `a, b, ...` with one image per letter.
    pub fn from_images(images: &[&str]) -> Result<Self> {
        if images.is_empty() || images.len() > 26 {
            return Err(Error::EmptyAlphabet);
        }
        Morphism::endo(Alphabet::standard(images.len()), images.iter().map(|s| words::word(s)).collect())
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        let images = alphabet.symbols().iter().map(|&c| vec![c]).collect();
        Morphism { domain: alphabet.clone(), codomain: alphabet.clone(), images }
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &[char] {
        &self.images[i]
    }

    pub fn image_of(&self, c: char) -> Option<&[char]> {
        self.domain.index_of(c).map(|i| self.images[i].as_slice())
    }

    /// Number of domain symbols.
    pub fn n(&self) -> usize {
        self.domain.len()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn total_length(&self) -> usize {
        self.images.iter().map(Vec::len).sum()
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn apply(&self, w: &[char]) -> Result<Word> {
        let mut out = Vec::new();
        for &c in w {
            let i = self.domain.index_of(c).ok_or(Error::UnknownSymbol(c))?;
            out.extend_from_slice(&self.images[i]);
        }
        Ok(out)
    }

    /// Apply to a word given as domain indices.
    pub fn apply_indices(&self, idx: &[usize]) -> Word {
        idx.iter().flat_map(|&i| self.images[i].iter().copied()).collect()
    }

    pub fn is_renaming(&self) -> bool {
        self.images.iter().all(|w| w.len() == 1) && self.images.iter().map(|w| w[0]).all_unique()
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_renaming() && self.domain.same_set(&self.codomain)
    }

    /// Same notion as [`Morphism::is_automorphism`]; units never count as factors.
    pub fn is_unit(&self) -> bool {
        self.is_automorphism()
    }

    pub fn is_parikh_positive(&self) -> bool {
        let all: Word = self.images.concat();
        words::is_parikh_positive_word(&all, &self.codomain)
    }

    pub fn is_parikh_positive_endo(&self) -> bool {
        self.is_endomorphism() && self.is_parikh_positive()
    }

    pub fn require_parikh_positive_endo(&self) -> Result<()> {
        if self.is_parikh_positive_endo() {
            Ok(())
        } else {
            Err(Error::NotParikhPositive)
        }
    }

    /// Injective iff the images are pairwise distinct and form a code.
    pub fn is_injective(&self) -> bool {
        code::is_uniquely_decipherable(&self.images)
    }

    pub fn reversed(&self) -> Morphism {
        Morphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            images: self.images.iter().map(|w| words::reverse(w)).collect(),
        }
    }

    /// Copy with another codomain that still contains every image symbol.
    pub fn with_codomain(&self, codomain: Alphabet) -> Result<Morphism> {
        Morphism::new(self.domain.clone(), codomain, self.images.clone())
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules = self.domain.symbols().iter().zip(&self.images).map(|(c, w)| format!("{c}->{}", show(w))).join("; ");
        f.write_str(&rules)
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    alphabet: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    codomain: Option<String>,
    images: BTreeMap<String, String>,
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismJson {
            alphabet: self.domain.to_string(),
            codomain: (!self.is_endomorphism()).then(|| self.codomain.to_string()),
            images: self.domain.symbols().iter().zip(&self.images).map(|(c, w)| (c.to_string(), show(w))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MorphismJson::deserialize(d)?;
        let domain: Alphabet = raw.alphabet.parse().map_err(D::Error::custom)?;
        let codomain = match raw.codomain {
            Some(c) => c.parse().map_err(D::Error::custom)?,
            None => domain.clone(),
        };
        if raw.images.len() != domain.len() {
            return Err(D::Error::custom("every alphabet symbol needs exactly one image"));
        }
        let mut images = Vec::with_capacity(domain.len());
        for &c in domain.symbols() {
            let img = raw.images.get(&c.to_string()).ok_or_else(|| D::Error::custom(format!("no image for '{c}'")))?;
            images.push(words::word(img));
        }
        Morphism::new(domain, codomain, images).map_err(D::Error::custom)
    }
}

/// `φ2 ∘ φ1`: apply `φ1` first.
pub fn compose(phi2: &Morphism, phi1: &Morphism) -> Result<Morphism> {
    if !phi1.codomain.same_set(&phi2.domain) {
        return Err(Error::AlphabetMismatch(format!(
            "codomain {} does not match domain {}",
            phi1.codomain, phi2.domain
        )));
    }
    let images = phi1.images.iter().map(|w| phi2.apply(w)).collect::<Result<Vec<_>>>()?;
    Morphism::new(phi1.domain.clone(), phi2.codomain.clone(), images)
}

/// Compose a chain given outermost first: `[ψk, ..., ψ1]`.
pub fn compose_chain(factors: &[Morphism]) -> Result<Morphism> {
    let (last, rest) = factors.split_last().ok_or_else(|| Error::Contract("empty chain".into()))?;
    rest.iter().rev().try_fold(last.clone(), |acc, f| compose(f, &acc))
}

pub fn reverse_morphism(phi: &Morphism) -> Morphism {
    phi.reversed()
}

/// Automorphism of `alphabet` sending letter `i` to letter `perm[i]`.
pub fn permutation(alphabet: &Alphabet, perm: &[usize]) -> Morphism {
    let images = perm.iter().map(|&j| vec![alphabet.symbol(j)]).collect();
    Morphism { domain: alphabet.clone(), codomain: alphabet.clone(), images }
}

/// Automorphisms `(ψ1, ψ2)` with `φ = ψ2 ∘ φ̃ ∘ ψ1`, if any.
pub fn is_equivalent(phi: &Morphism, other: &Morphism) -> Result<Option<(Morphism, Morphism)>> {
    if !phi.is_endomorphism() || !other.is_endomorphism() || phi.domain != other.domain {
        return Err(Error::AlphabetMismatch("equivalence needs endomorphisms on one alphabet".into()));
    }
    let alpha = &phi.domain;
    let n = alpha.len();
    for sigma in (0..n).permutations(n) {
        let psi2 = permutation(alpha, &sigma);
        let dressed: Vec<Word> = other.images.iter().map(|w| psi2.apply(w).expect("letters in alphabet")).collect();
        // any matching works, since equal images are interchangeable
        let mut used = vec![false; n];
        let mut pi = Vec::with_capacity(n);
        for target in &phi.images {
            match (0..n).find(|&j| !used[j] && &dressed[j] == target) {
                Some(j) => {
                    used[j] = true;
                    pi.push(j);
                }
                None => break,
            }
        }
        if pi.len() == n {
            return Ok(Some((permutation(alpha, &pi), psi2)));
        }
    }
    Ok(None)
}

pub fn commute(phi1: &Morphism, phi2: &Morphism) -> Result<bool> {
    Ok(compose(phi1, phi2)? == compose(phi2, phi1)?)
}

/// Searches a proper non-empty `S ⊂ Σ` such that one map sends `S` into `S⁺`
/// and fixes the rest, while the other fixes `S` and sends the rest into
/// `(Σ∖S)⁺`. Both role assignments are tried; returns `S` sorted by alphabet order.
/// A `None` says nothing about commutation; use [`commute`] for that.
pub fn find_commuting_split(phi1: &Morphism, phi2: &Morphism) -> Option<Vec<char>> {
    if !phi1.is_endomorphism() || phi1.domain != phi2.domain {
        return None;
    }
    let alpha = phi1.domain.symbols();
    let n = alpha.len();
    let holds = |f: &Morphism, g: &Morphism, inside: &[bool]| {
        (0..n).all(|i| {
            let fi = &f.images[i];
            let gi = &g.images[i];
            let own = |w: &Word, side: bool| w.iter().all(|&c| inside[f.domain.index_of(c).unwrap()] == side);
            if inside[i] {
                own(fi, true) && gi.as_slice() == [alpha[i]]
            } else {
                fi.as_slice() == [alpha[i]] && own(gi, false)
            }
        })
    };
    for mask in 1..(1u64 << n) - 1 {
        let inside: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if holds(phi1, phi2, &inside) || holds(phi2, phi1, &inside) {
            return Some((0..n).filter(|&i| inside[i]).map(|i| alpha[i]).collect());
        }
    }
    None
}

/// Non-trivial `φ = ψ2 ∘ ψ1` for a morphism whose codomain is strictly
/// contained in, or strictly contains, its domain.
///
/// * Codomain inside domain: `ψ1` is `φ` with the domain as codomain, and
///   `ψ2` fixes the codomain letters and sends every other letter to `x²`,
///   `x` the first codomain letter.
/// * Domain inside codomain: the split of the longest-first image across a
///   fresh letter; `None` for the single-image-of-length-two exception.
pub fn cross_alphabet_decompose(phi: &Morphism) -> Result<Option<(Morphism, Morphism)>> {
    let s1 = &phi.domain;
    let s2 = &phi.codomain;
    let pad = vec![s2.symbol(0); 2];
    if s2.is_subset_of(s1) && s2.len() < s1.len() {
        let psi1 = phi.with_codomain(s1.clone())?;
        let images = s1.symbols().iter().map(|&c| if s2.contains(c) { vec![c] } else { pad.clone() }).collect();
        let psi2 = Morphism::new(s1.clone(), s2.clone(), images)?;
        return Ok(Some((psi1, psi2)));
    }
    if s1.is_subset_of(s2) && s1.len() < s2.len() {
        let long: Vec<usize> = (0..phi.n()).filter(|&i| phi.images[i].len() >= 2).collect();
        let exceptional = long.len() == 1 && phi.images[long[0]].len() == 2;
        if exceptional {
            return Ok(None);
        }
        let fresh = *s2.symbols().iter().find(|&&c| !s1.contains(c)).expect("strict superset");
        if let Some(&j) = long.first() {
            let mut s3 = s1.symbols().to_vec();
            s3.push(fresh);
            let s3 = Alphabet::new(s3)?;
            let mut psi1_images: Vec<Word> = s1.symbols().iter().map(|&c| vec![c]).collect();
            psi1_images[j].push(fresh);
            let psi1 = Morphism::new(s1.clone(), s3.clone(), psi1_images)?;
            let img = &phi.images[j];
            let m = img.len() / 2;
            let mut psi2_images = phi.images.clone();
            psi2_images[j] = img[..m].to_vec();
            psi2_images.push(img[m..].to_vec());
            let psi2 = Morphism::new(s3, s2.clone(), psi2_images)?;
            return Ok(Some((psi1, psi2)));
        }
        // all images are single letters: route through Σ2 and pad an unused letter
        let psi1 = phi.clone();
        let images = s2
            .symbols()
            .iter()
            .map(|&c| if phi.images.iter().any(|w| w[0] == c) { vec![c] } else { pad.clone() })
            .collect();
        let psi2 = Morphism::new(s2.clone(), s2.clone(), images)?;
        return Ok(Some((psi1, psi2)));
    }
    Err(Error::AlphabetMismatch(format!("domain {} and codomain {} are not strictly nested", s1, s2)))
}

/// Extend an endomorphism of `Σ1` to `Σ2 ⊇ Σ1`, fixing the new letters.
pub fn embed(phi: &Morphism, target: &Alphabet) -> Result<Morphism> {
    if !phi.is_endomorphism() || !phi.domain.is_subset_of(target) {
        return Err(Error::AlphabetMismatch(format!("{} is not contained in {}", phi.domain, target)));
    }
    let images =
        target.symbols().iter().map(|&c| phi.image_of(c).map(<[char]>::to_vec).unwrap_or_else(|| vec![c])).collect();
    Morphism::endo(target.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::word;

    fn m(images: &[&str]) -> Morphism {
        Morphism::from_images(images).unwrap()
    }

    #[test]
    fn apply_and_compose() {
        let phi = m(&["a", "ab"]);
        assert_eq!(phi.apply(&word("ab")).unwrap(), word("aab"));
        let psi2 = m(&["a", "abb"]);
        assert_eq!(psi2.apply(&word("ab")).unwrap(), word("aabb"));
        assert_eq!(compose(&psi2, &phi).unwrap(), m(&["a", "aabb"]));
        let f = compose(&m(&["ab", "bba"]), &m(&["abb", "ba"])).unwrap();
        assert_eq!(f, m(&["abbbabba", "bbaab"]));
        let id = Morphism::identity(&Alphabet::standard(2));
        assert_eq!(compose(&id, &phi).unwrap(), phi);
        assert_eq!(id.apply(&word("abba")).unwrap(), word("abba"));
    }

    #[test]
    fn renamings() {
        assert!(m(&["b", "a"]).is_automorphism());
        assert!(!m(&["a", "a"]).is_renaming());
        assert!(!m(&["a", "ab"]).is_renaming());
    }

    #[test]
    fn positivity() {
        assert!(m(&["a", "aabb"]).is_parikh_positive());
        assert!(!m(&["a", "aa"]).is_parikh_positive());
        assert!(Morphism::identity(&Alphabet::standard(3)).is_parikh_positive());
    }

    #[test]
    fn reversal() {
        let phi = m(&["abbbabba", "bba"]);
        let r = reverse_morphism(&phi);
        assert_eq!(r.image(1), word("abb").as_slice());
        assert_eq!(r.image(0), word("abbabbba").as_slice());
        assert_eq!(reverse_morphism(&r), phi);
    }

    #[test]
    fn equivalence() {
        let phi = m(&["ab", "ba"]);
        let (p1, p2) = is_equivalent(&phi, &phi).unwrap().unwrap();
        assert!(p1.is_automorphism() && p2.is_automorphism());
        let other = m(&["ba", "ab"]);
        let (p1, p2) = is_equivalent(&phi, &other).unwrap().unwrap();
        assert_eq!(compose(&p2, &compose(&other, &p1).unwrap()).unwrap(), phi);
        assert!(is_equivalent(&m(&["a", "aabb"]), &m(&["a", "babb"])).unwrap().is_none());
    }

    #[test]
    fn commuting() {
        let a2 = Morphism::from_images(&["aa"]).unwrap();
        let a3 = Morphism::from_images(&["aaa"]).unwrap();
        assert!(commute(&a2, &a3).unwrap());
        let f = m(&["aa", "b"]);
        let g = m(&["a", "bb"]);
        assert_eq!(find_commuting_split(&f, &g), Some(vec!['a']));
        assert!(commute(&f, &g).unwrap());
        // satisfies the two listed conditions but not the fixed-point one
        let g2 = m(&["ab", "bb"]);
        assert_eq!(find_commuting_split(&f, &g2), None);
        assert!(!commute(&f, &g2).unwrap());
    }

    #[test]
    fn cross_alphabet() {
        let ab = Alphabet::standard(2);
        let a = Alphabet::standard(1);
        let phi = Morphism::new(ab.clone(), a.clone(), vec![word("a"), word("aa")]).unwrap();
        let (p1, p2) = cross_alphabet_decompose(&phi).unwrap().unwrap();
        assert_eq!(compose(&p2, &p1).unwrap(), phi);
        assert!(!p2.is_renaming());

        let up = Morphism::new(a.clone(), ab.clone(), vec![word("ab")]).unwrap();
        assert_eq!(cross_alphabet_decompose(&up).unwrap(), None);

        let up = Morphism::new(a.clone(), ab.clone(), vec![word("aab")]).unwrap();
        let (p1, p2) = cross_alphabet_decompose(&up).unwrap().unwrap();
        assert_eq!(p1.image(0), word("ab").as_slice());
        assert_eq!(p2.images(), &[word("a"), word("ab")]);
        assert_eq!(compose(&p2, &p1).unwrap(), up);
        assert!(!p2.is_renaming());

        let abc = Alphabet::standard(3);
        let flat = Morphism::new(ab.clone(), abc, vec![word("b"), word("a")]).unwrap();
        let (p1, p2) = cross_alphabet_decompose(&flat).unwrap().unwrap();
        assert_eq!(compose(&p2, &p1).unwrap(), flat);
        assert!(!p2.is_renaming());

        assert!(cross_alphabet_decompose(&m(&["ab", "b"])).is_err());
    }

    #[test]
    fn embedding() {
        let abc = Alphabet::standard(3);
        let e = embed(&m(&["a", "aabb"]), &abc).unwrap();
        assert_eq!(e, m(&["a", "aabb", "c"]));
        let ab = Alphabet::standard(2);
        assert_eq!(embed(&Morphism::identity(&ab), &abc).unwrap(), Morphism::identity(&abc));
    }

    #[test]
    fn json_round_trip() {
        let phi = m(&["ab", "ba"]);
        let s = serde_json::to_string(&phi).unwrap();
        assert_eq!(s, r#"{"alphabet":"ab","images":{"a":"ab","b":"ba"}}"#);
        assert_eq!(serde_json::from_str::<Morphism>(&s).unwrap(), phi);
        assert!(serde_json::from_str::<Morphism>(r#"{"alphabet":"ab","images":{"a":"ab"}}"#).is_err());
    }
}
