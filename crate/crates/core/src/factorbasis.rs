//! Factor bases, their decodings, the irreducibility decision and derivation graphs.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::code::{self, Parses, Trie};
use crate::error::{Error, Result};
use crate::morphisms::Morphism;
use crate::words::{shortlex, show, word, Word};

/// Indexed set of distinct non-empty words `v_1..v_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct FactorBasis {
    elements: Vec<Word>,
}

impl FactorBasis {
    pub fn new(elements: Vec<Word>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Contract("a factor basis needs at least one element".into()));
        }
        if elements.iter().any(Vec::is_empty) {
            return Err(Error::EmptyWord);
        }
        if !elements.iter().all_unique() {
            return Err(Error::Contract("factor basis elements must be distinct".into()));
        }
        Ok(FactorBasis { elements })
    }

    pub fn from_strs(elements: &[&str]) -> Result<Self> {
        FactorBasis::new(elements.iter().map(|s| word(s)).collect())
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.elements.iter().map(Vec::len).sum()
    }

    /// Elements sorted by length, then lexicographically.
    pub fn canonical(&self) -> FactorBasis {
        let mut elements = self.elements.clone();
        elements.sort_by(|a, b| shortlex(a, b));
        FactorBasis { elements }
    }

    pub fn same_set(&self, other: &FactorBasis) -> bool {
        self.len() == other.len() && self.elements.iter().all(|e| other.elements.contains(e))
    }

    pub fn generates(&self, w: &[char]) -> bool {
        code::is_member(&self.elements, w)
    }

    /// No element is a product of the others.
    pub fn is_irredundant(&self) -> bool {
        (0..self.len()).all(|i| {
            let rest: Vec<Word> =
                self.elements.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, e)| e.clone()).collect();
            rest.is_empty() || !code::is_member(&rest, &self.elements[i])
        })
    }

    pub fn reversed(&self) -> FactorBasis {
        FactorBasis { elements: self.elements.iter().map(|e| crate::words::reverse(e)).collect() }
    }
}

impl fmt::Display for FactorBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.iter().map(|e| show(e)).join(", "))
    }
}

impl From<FactorBasis> for Vec<String> {
    fn from(b: FactorBasis) -> Self {
        b.elements.iter().map(|e| show(e)).collect()
    }
}

impl TryFrom<Vec<String>> for FactorBasis {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        FactorBasis::new(v.iter().map(|s| word(s)).collect())
    }
}

/// Search caps. Exceeding any of them is reported, never hidden.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Longest basis element considered; `None` means the longest image.
    pub max_element_len: Option<usize>,
    pub max_bases: usize,
    /// Distinct search states visited before giving up.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_element_len: None, max_bases: 1_000_000, max_states: 5_000_000 }
    }
}

/// All parses of `w` over `V` (index sequences, 0-based) up to `cap`, plus the exact total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decodings {
    pub count: BigUint,
    pub decodings: Vec<Vec<usize>>,
}

impl Decodings {
    pub fn is_complete(&self) -> bool {
        BigUint::from(self.decodings.len()) == self.count
    }
}

pub fn decode_all(w: &[char], basis: &FactorBasis, cap: usize) -> Decodings {
    let parses = Parses::new(&Trie::new(&basis.elements), w);
    Decodings { count: parses.count(), decodings: parses.enumerate(cap) }
}

/// Every image of `φ` lies in `V⁺` and `|V| ≤ n`.
pub fn is_factor_basis(basis: &FactorBasis, phi: &Morphism) -> bool {
    basis.len() <= phi.n() && phi.images().iter().all(|w| basis.generates(w))
}

pub fn image_set(phi: &Morphism) -> BTreeSet<Word> {
    phi.images().iter().cloned().collect()
}

/// `V = W` as sets, or `V` is the whole alphabet as single letters.
pub fn is_trivial(basis: &FactorBasis, phi: &Morphism) -> bool {
    let as_set: BTreeSet<Word> = basis.elements.iter().cloned().collect();
    if as_set == image_set(phi) {
        return true;
    }
    basis.len() == phi.n() && basis.elements.iter().all(|e| e.len() == 1 && phi.codomain().contains(e[0]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisEntry {
    pub basis: FactorBasis,
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisEnumeration {
    pub bases: Vec<BasisEntry>,
    pub truncated: bool,
}

impl BasisEnumeration {
    pub fn nontrivial(&self) -> impl Iterator<Item = &FactorBasis> {
        self.bases.iter().filter(|e| !e.trivial).map(|e| &e.basis)
    }
}

struct Search<'a> {
    phi: &'a Morphism,
    images: Vec<Word>,
    max_len: usize,
    limits: Limits,
    irredundant_only: bool,
    stop_on_nontrivial: bool,
    seen: HashSet<(Vec<Word>, usize, usize)>,
    found: BTreeSet<Vec<Word>>,
    truncated: bool,
    stop: bool,
}

impl<'a> Search<'a> {
    fn new(phi: &'a Morphism, limits: Limits, irredundant_only: bool, stop_on_nontrivial: bool) -> Self {
        let mut images: Vec<Word> = image_set(phi).into_iter().collect();
        // least structure first: fewest distinct symbols, then shortest
        images.sort_by_key(|w| (w.iter().unique().count(), w.len()));
        let max_len = limits.max_element_len.unwrap_or_else(|| phi.max_image_len());
        Search {
            phi,
            images,
            max_len,
            limits,
            irredundant_only,
            stop_on_nontrivial,
            seen: HashSet::new(),
            found: BTreeSet::new(),
            truncated: false,
            stop: false,
        }
    }

    fn run(mut self) -> (BTreeSet<Vec<Word>>, bool) {
        let mut v = Vec::new();
        self.dfs(&mut v, 0, 0);
        (self.found, self.truncated)
    }

    fn dfs(&mut self, v: &mut Vec<Word>, img: usize, pos: usize) {
        if self.stop || self.truncated {
            return;
        }
        if img == self.images.len() {
            self.leaf(v);
            return;
        }
        let w = self.images[img].clone();
        if pos == w.len() {
            self.dfs(v, img + 1, 0);
            return;
        }
        let mut key = v.clone();
        key.sort();
        if !self.seen.insert((key, img, pos)) {
            return;
        }
        if self.seen.len() > self.limits.max_states {
            self.truncated = true;
            return;
        }
        if v.len() == self.phi.n() {
            let trie = Trie::new(v);
            let ok = Parses::new(&trie, &w[pos..]).is_member()
                && self.images[img + 1..].iter().all(|x| Parses::new(&trie, x).is_member());
            if ok {
                self.leaf(v);
            }
            return;
        }
        let reuse: Vec<usize> = v.iter().filter(|e| w[pos..].starts_with(e)).map(Vec::len).collect();
        for l in reuse {
            self.dfs(v, img, pos + l);
        }
        for l in 1..=self.max_len.min(w.len() - pos) {
            let p = w[pos..pos + l].to_vec();
            if !v.contains(&p) {
                v.push(p);
                self.dfs(v, img, pos + l);
                v.pop();
            }
        }
    }

    fn leaf(&mut self, v: &[Word]) {
        let mut s = v.to_vec();
        s.sort_by(|a, b| shortlex(a, b));
        if self.found.contains(&s) {
            return;
        }
        let basis = FactorBasis { elements: s.clone() };
        if self.irredundant_only && !basis.is_irredundant() {
            return;
        }
        if self.found.len() >= self.limits.max_bases {
            self.truncated = true;
            return;
        }
        self.found.insert(s);
        if self.stop_on_nontrivial && !is_trivial(&basis, self.phi) {
            self.stop = true;
        }
    }
}

fn sort_bases(found: BTreeSet<Vec<Word>>) -> Vec<FactorBasis> {
    let mut out: Vec<FactorBasis> = found.into_iter().map(|elements| FactorBasis { elements }).collect();
    out.sort_by(|a, b| {
        a.total_length().cmp(&b.total_length()).then_with(|| {
            a.elements
                .iter()
                .zip(&b.elements)
                .map(|(x, y)| shortlex(x, y))
                .find(|o| o.is_ne())
                .unwrap_or(a.len().cmp(&b.len()))
        })
    });
    out
}

/// Irredundant factor bases with at most `n` elements in which every element
/// takes part in parsing the images, trivial ones included and flagged.
pub fn enumerate_factor_bases(phi: &Morphism, limits: Limits) -> Result<BasisEnumeration> {
    phi.require_parikh_positive_endo()?;
    let (found, truncated) = Search::new(phi, limits, true, false).run();
    let bases =
        sort_bases(found).into_iter().map(|basis| BasisEntry { trivial: is_trivial(&basis, phi), basis }).collect();
    Ok(BasisEnumeration { bases, truncated })
}

/// Like [`enumerate_factor_bases`] but keeps redundant sets too.
pub(crate) fn enumerate_used_sets(phi: &Morphism, limits: Limits) -> (Vec<FactorBasis>, bool) {
    let (found, truncated) = Search::new(phi, limits, false, false).run();
    (sort_bases(found), truncated)
}

/// `ψ1, ψ2` with `ψ2 ∘ ψ1 = φ` read off an indexed basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split {
    pub psi1: Morphism,
    pub psi2: Morphism,
    pub psi1_parikh_positive: bool,
    pub psi2_parikh_positive: bool,
}

/// `ψ2(a_i) = v_i` (letters past `m` get the first letter squared) and
/// `ψ1(a_i)` is the lexicographically least decoding of `φ(a_i)`.
pub fn split_from_basis(basis: &FactorBasis, phi: &Morphism) -> Result<Split> {
    if !phi.is_endomorphism() {
        return Err(Error::Contract("splitting needs an endomorphism".into()));
    }
    let n = phi.n();
    if basis.len() > n {
        return Err(Error::Contract(format!("basis has {} elements for {} letters", basis.len(), n)));
    }
    let alpha = phi.domain();
    let trie = Trie::new(&basis.elements);
    let mut psi1_images = Vec::with_capacity(n);
    for w in phi.images() {
        let d = Parses::new(&trie, w)
            .least()
            .ok_or_else(|| Error::Contract(format!("{} does not generate {}", basis, show(w))))?;
        psi1_images.push(d.iter().map(|&i| alpha.symbol(i)).collect());
    }
    let pad = vec![alpha.symbol(0); 2];
    let psi2_images = (0..n).map(|i| basis.elements.get(i).cloned().unwrap_or_else(|| pad.clone())).collect();
    let psi1 = Morphism::endo(alpha.clone(), psi1_images)?;
    let psi2 = Morphism::endo(alpha.clone(), psi2_images)?;
    Ok(Split {
        psi1_parikh_positive: psi1.is_parikh_positive(),
        psi2_parikh_positive: psi2.is_parikh_positive(),
        psi1,
        psi2,
    })
}

/// `V1 ≠ V2` and every element of `V2` lies in `V1⁺`.
pub fn more_derived(v1: &FactorBasis, v2: &FactorBasis) -> bool {
    if v1.same_set(v2) {
        return false;
    }
    let trie = Trie::new(&v1.elements);
    v2.elements.iter().all(|e| Parses::new(&trie, e).is_member())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionRule {
    Unit,
    UnaryPrime,
    UnaryComposite,
    RepeatedImage,
    NontrivialBasis,
    OnlyTrivialBases,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub basis: FactorBasis,
    pub psi1: Morphism,
    pub psi2: Morphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reducibility {
    pub reducible: bool,
    pub unit: bool,
    pub rule: ReductionRule,
    pub witness: Option<Witness>,
}

pub(crate) fn smallest_prime_factor(k: usize) -> usize {
    (2..).take_while(|p| p * p <= k).find(|p| k.is_multiple_of(*p)).unwrap_or(k)
}

pub fn is_reducible(phi: &Morphism) -> Result<Reducibility> {
    is_reducible_with(phi, Limits::default())
}

pub fn is_reducible_with(phi: &Morphism, limits: Limits) -> Result<Reducibility> {
    phi.require_parikh_positive_endo()?;
    let n = phi.n();
    let alpha = phi.domain();
    if phi.is_automorphism() {
        return Ok(Reducibility { reducible: false, unit: true, rule: ReductionRule::Unit, witness: None });
    }
    if n == 1 {
        let k = phi.image(0).len();
        let p = smallest_prime_factor(k);
        if p == k {
            return Ok(Reducibility { reducible: false, unit: false, rule: ReductionRule::UnaryPrime, witness: None });
        }
        let a = alpha.symbol(0);
        let witness = Witness {
            basis: FactorBasis { elements: vec![vec![a; p]] },
            psi1: Morphism::endo(alpha.clone(), vec![vec![a; k / p]])?,
            psi2: Morphism::endo(alpha.clone(), vec![vec![a; p]])?,
        };
        return Ok(Reducibility {
            reducible: true,
            unit: false,
            rule: ReductionRule::UnaryComposite,
            witness: Some(witness),
        });
    }
    if image_set(phi).len() < n {
        let imgs = phi.images();
        let (j, i) = (0..n).tuple_combinations().find(|&(j, i)| imgs[i] == imgs[j]).expect("a repeated image exists");
        let mut psi1 = alpha.symbols().iter().map(|&c| vec![c]).collect::<Vec<_>>();
        psi1[i] = vec![alpha.symbol(j)];
        let mut psi2 = imgs.to_vec();
        psi2[i] = vec![alpha.symbol(0); 2];
        let basis = FactorBasis { elements: image_set(phi).into_iter().collect() };
        let witness =
            Witness { basis, psi1: Morphism::endo(alpha.clone(), psi1)?, psi2: Morphism::endo(alpha.clone(), psi2)? };
        return Ok(Reducibility {
            reducible: true,
            unit: false,
            rule: ReductionRule::RepeatedImage,
            witness: Some(witness),
        });
    }
    let (found, truncated) = Search::new(phi, limits, true, true).run();
    let hit = found.into_iter().map(|elements| FactorBasis { elements }).find(|b| !is_trivial(b, phi));
    match hit {
        Some(basis) => {
            let split = split_from_basis(&basis, phi)?;
            Ok(Reducibility {
                reducible: true,
                unit: false,
                rule: ReductionRule::NontrivialBasis,
                witness: Some(Witness { basis, psi1: split.psi1, psi2: split.psi2 }),
            })
        }
        None if truncated => Err(Error::Truncated("factor basis search hit its limits".into())),
        None => {
            Ok(Reducibility { reducible: false, unit: false, rule: ReductionRule::OnlyTrivialBases, witness: None })
        }
    }
}

/// Non-trivial bases ordered from less to more derived; an edge `(i, j)`
/// points from basis `i` to the more derived basis `j` with nothing in between.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationGraph {
    pub vertices: Vec<FactorBasis>,
    pub edges: Vec<(usize, usize)>,
    pub truncated: bool,
}

impl DerivationGraph {
    pub fn sinks(&self) -> Vec<&FactorBasis> {
        (0..self.vertices.len())
            .filter(|&i| !self.edges.iter().any(|&(from, _)| from == i))
            .map(|i| &self.vertices[i])
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph derivation {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", i, v));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  v{} -> v{};\n", a, b));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices,
            "edges": self.edges,
            "truncated": self.truncated,
        })
    }

    /// Covering pairs of the "more derived" order on the given bases.
    pub fn from_bases(vertices: Vec<FactorBasis>, truncated: bool) -> Self {
        let k = vertices.len();
        let mut above = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                above[i][j] = i != j && more_derived(&vertices[j], &vertices[i]);
            }
        }
        let mut edges = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if above[i][j] && !(0..k).any(|m| above[i][m] && above[m][j]) {
                    edges.push((i, j));
                }
            }
        }
        DerivationGraph { vertices, edges, truncated }
    }
}

pub fn derivation_graph(phi: &Morphism, limits: Limits) -> Result<DerivationGraph> {
    let all = enumerate_factor_bases(phi, limits)?;
    let vertices = all.nontrivial().cloned().collect();
    Ok(DerivationGraph::from_bases(vertices, all.truncated))
}

pub fn maximally_derived_bases(phi: &Morphism, limits: Limits) -> Result<(Vec<FactorBasis>, bool)> {
    let g = derivation_graph(phi, limits)?;
    Ok((g.sinks().into_iter().cloned().collect(), g.truncated))
}
