//! Incidence matrices and their classification by the reducibility of the
//! morphisms they represent.
//!
//! Row `i` counts the letters of `φ(a_i)`, so entry `(i, j)` is the number of
//! `a_j` in `φ(a_i)`. With this orientation
//! `P(ψ2 ∘ ψ1) = P(ψ1) · P(ψ2)`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorbasis::{is_reducible_with, Limits};
use crate::morphisms::{compose, Morphism};
use crate::words::{parikh, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct IncidenceMatrix {
    rows: Vec<Vec<usize>>,
}

impl IncidenceMatrix {
    /// Square, at most 26 letters, no zero row and no zero column.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = IncidenceMatrix::unchecked(rows)?;
        let n = m.n();
        if let Some(i) = (0..n).find(|&i| m.rows[i].iter().all(|&x| x == 0)) {
            return Err(Error::InvalidMatrix(format!("row {} is zero", i + 1)));
        }
        if let Some(j) = (0..n).find(|&j| m.rows.iter().all(|r| r[j] == 0)) {
            return Err(Error::InvalidMatrix(format!("column {} is zero", j + 1)));
        }
        Ok(m)
    }

    /// Square shape only. Used for factor matrices, whose columns may vanish.
    fn unchecked(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > 26 {
            return Err(Error::InvalidMatrix(format!("dimension {n} outside 1..=26")));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("row of length {} in a {n}x{n} matrix", r.len())));
        }
        Ok(IncidenceMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| usize::from(i == j)).collect()).collect();
        IncidenceMatrix { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n();
        IncidenceMatrix { rows: (0..n).map(|j| (0..n).map(|i| self.rows[i][j]).collect()).collect() }
    }

    pub fn is_permutation(&self) -> bool {
        self.is_monomial() && self.rows.iter().flatten().all(|&x| x <= 1)
    }

    /// Exactly one non-zero entry in every row and every column.
    pub fn is_monomial(&self) -> bool {
        let n = self.n();
        let one_per_row = self.rows.iter().all(|r| r.iter().filter(|&&x| x > 0).count() == 1);
        let one_per_col = (0..n).all(|j| self.rows.iter().filter(|r| r[j] > 0).count() == 1);
        one_per_row && one_per_col
    }

    /// `P'[i][j] = P[rows[i]][cols[j]]`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Self {
        IncidenceMatrix { rows: rows.iter().map(|&i| cols.iter().map(|&j| self.rows[i][j]).collect()).collect() }
    }

    fn row_sum(&self, i: usize) -> usize {
        self.rows[i].iter().sum()
    }
}

impl TryFrom<Vec<Vec<usize>>> for IncidenceMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        IncidenceMatrix::new(rows)
    }
}

impl From<IncidenceMatrix> for Vec<Vec<usize>> {
    fn from(m: IncidenceMatrix) -> Self {
        m.rows
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.rows.iter().map(|r| r.iter().join(" ")).join("; ");
        f.write_str(&text)
    }
}

/// Parses `8 4; 10 6`. Offsets in errors are byte positions in the input.
impl FromStr for IncidenceMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut start = 0;
        for part in s.split(';') {
            let mut row = Vec::new();
            let mut pos = start;
            for tok in part.split_whitespace() {
                let at = start + part[pos - start..].find(tok).unwrap_or(0) + (pos - start);
                let value = tok.parse::<usize>().map_err(|_| Error::Parse {
                    pos: at,
                    msg: format!("expected a non-negative integer, found '{tok}'"),
                })?;
                row.push(value);
                pos = at + tok.len();
            }
            if row.is_empty() {
                return Err(Error::Parse { pos: start, msg: "empty row".into() });
            }
            rows.push(row);
            start += part.len() + 1;
        }
        if let Some(r) = rows.iter().position(|r| r.len() != rows.len()) {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("row {} has {} entries, expected {}", r + 1, rows[r].len(), rows.len()),
            });
        }
        IncidenceMatrix::new(rows)
    }
}

pub fn incidence(phi: &Morphism) -> Result<IncidenceMatrix> {
    phi.require_parikh_positive_endo()?;
    let rows = phi.images().iter().map(|w| parikh(w, phi.domain())).collect::<Result<Vec<_>>>()?;
    IncidenceMatrix::new(rows)
}

/// Incidence of any endomorphism. Zero columns are kept, so the result may
/// fall outside the invariant checked by [`IncidenceMatrix::new`]; this is
/// meant for factors, which need not be Parikh-positive.
pub fn incidence_unchecked(phi: &Morphism) -> Result<IncidenceMatrix> {
    let rows = phi.images().iter().map(|w| parikh(w, phi.codomain())).collect::<Result<Vec<_>>>()?;
    IncidenceMatrix::unchecked(rows)
}

pub fn matrix_multiply(a: &IncidenceMatrix, b: &IncidenceMatrix) -> Result<IncidenceMatrix> {
    if a.n() != b.n() {
        return Err(Error::InvalidMatrix(format!("cannot multiply {0}x{0} by {1}x{1}", a.n(), b.n())));
    }
    let n = a.n();
    let rows = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a.rows[i][k] * b.rows[k][j]).sum()).collect()).collect();
    Ok(IncidenceMatrix { rows })
}

/// `incidence(ψ2 ∘ ψ1) == incidence(ψ1) · incidence(ψ2)`.
pub fn composition_law_holds(psi2: &Morphism, psi1: &Morphism) -> Result<bool> {
    let lhs = incidence_unchecked(&compose(psi2, psi1)?)?;
    let rhs = matrix_multiply(&incidence_unchecked(psi1)?, &incidence_unchecked(psi2)?)?;
    Ok(lhs == rhs)
}

fn next_permutation(w: &mut [char]) -> bool {
    let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
        return false;
    };
    let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).expect("a larger element follows");
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

fn least_word(row: &[usize], alphabet: &Alphabet) -> Word {
    row.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(alphabet.symbol(j), k)).collect()
}

/// Lazily yields every morphism with a given incidence matrix, ordered
/// lexicographically on the tuple of images.
pub struct Realizations {
    alphabet: Alphabet,
    current: Option<Vec<Word>>,
}

impl Realizations {
    pub fn new(p: &IncidenceMatrix) -> Self {
        let alphabet = Alphabet::standard(p.n());
        let current = p.rows.iter().map(|r| least_word(r, &alphabet)).collect::<Vec<_>>();
        let current = current.iter().all(|w| !w.is_empty()).then_some(current);
        Realizations { alphabet, current }
    }
}

impl Iterator for Realizations {
    type Item = Morphism;
    fn next(&mut self) -> Option<Morphism> {
        let images = self.current.as_mut()?;
        let out = images.clone();
        let mut advanced = false;
        for w in images.iter_mut().rev() {
            if next_permutation(w) {
                advanced = true;
                break;
            }
            w.sort_unstable();
        }
        if !advanced {
            self.current = None;
        }
        Some(Morphism::endo(self.alphabet.clone(), out).expect("realisations use the standard alphabet"))
    }
}

/// Product over rows of the multinomial coefficient of the row.
pub fn realization_count(p: &IncidenceMatrix) -> BigUint {
    let mut total = BigUint::one();
    for row in &p.rows {
        let mut placed = 0u64;
        for &k in row {
            for t in 1..=k as u64 {
                placed += 1;
                total *= placed;
                total /= t;
            }
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismEnumeration {
    pub morphisms: Vec<Morphism>,
    pub truncated: bool,
}

pub fn enumerate_morphisms(p: &IncidenceMatrix, cap: usize) -> MorphismEnumeration {
    let mut it = Realizations::new(p);
    let morphisms = it.by_ref().take(cap).collect();
    MorphismEnumeration { morphisms, truncated: it.next().is_some() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    ExclusivelyReducible,
    ExclusivelyIrreducible,
    NotExclusivelyIrreducible,
    Mixed,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixRule {
    /// One non-zero entry per row and column, at least two of them above 1.
    Monomial,
    /// Some letter occurs in a single image, which has length at least 2, and
    /// another image has length at least 2.
    SoleOccurrence,
    /// Shape `(α β; γ 0)` with `γ > 1` (and `φ(a)` not a single letter), or
    /// `β = 1` and `α ≥ 2`.
    AntiTriangular,
    /// `(2 2; 2 2)`.
    AllTwos,
    /// `(1 α; 1 β)` with `α, β > 1` sharing a divisor.
    SharedDivisorColumn,
    /// `(1 y; z 1)` with `{y, z} = {0, 1}` or `y, z > 1`.
    UnitDiagonal,
    /// Every entry divisible by some `k > 1`.
    ScalarMultiple,
    /// A row or column has a common divisor above 1.
    Gcd,
    /// One row (or column) dominates another entrywise.
    Dominance,
    Empirical,
    None,
}

impl fmt::Display for MatrixRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// A morphism realising the matrix; reducible ones carry their split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixWitness {
    pub morphism: Morphism,
    pub reducible: bool,
    pub psi1: Option<Morphism>,
    pub psi2: Option<Morphism>,
}

impl MatrixWitness {
    /// Checks the split recomposes to the morphism and the morphism realises `p`.
    pub fn verify(&self, p: &IncidenceMatrix) -> bool {
        let realises = incidence(&self.morphism).map(|m| &m == p).unwrap_or(false);
        let split_ok = match (&self.psi1, &self.psi2) {
            (Some(p1), Some(p2)) => {
                !p1.is_automorphism() && !p2.is_automorphism() && compose(p2, p1).ok().as_ref() == Some(&self.morphism)
            }
            (None, None) => !self.reducible,
            _ => false,
        };
        realises && split_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixVerdict {
    pub kind: VerdictKind,
    pub rule: MatrixRule,
    pub witnesses: Vec<MatrixWitness>,
    /// Realisations tested by the empirical classifier.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tested: Option<usize>,
}

impl MatrixVerdict {
    fn symbolic(kind: VerdictKind, rule: MatrixRule) -> Self {
        MatrixVerdict { kind, rule, witnesses: Vec::new(), tested: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmpiricalCaps {
    pub max_morphisms: usize,
    pub limits: Limits,
}

impl Default for EmpiricalCaps {
    fn default() -> Self {
        EmpiricalCaps { max_morphisms: 100_000, limits: Limits::default() }
    }
}

/// Tests every realisation, stopping as soon as both kinds have been seen.
pub fn classify_empirical(p: &IncidenceMatrix, caps: EmpiricalCaps) -> Result<MatrixVerdict> {
    let mut reducible: Option<MatrixWitness> = None;
    let mut irreducible: Option<MatrixWitness> = None;
    let mut tested = 0;
    let mut truncated = false;
    for phi in Realizations::new(p) {
        if tested == caps.max_morphisms {
            truncated = true;
            break;
        }
        tested += 1;
        let r = match is_reducible_with(&phi, caps.limits) {
            Ok(r) => r,
            Err(Error::Truncated(_)) => {
                truncated = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        if r.reducible && reducible.is_none() {
            let w = r.witness.expect("reducible verdicts carry a witness");
            reducible = Some(MatrixWitness { morphism: phi, reducible: true, psi1: Some(w.psi1), psi2: Some(w.psi2) });
        } else if !r.reducible && irreducible.is_none() {
            irreducible = Some(MatrixWitness { morphism: phi, reducible: false, psi1: None, psi2: None });
        }
        if reducible.is_some() && irreducible.is_some() {
            break;
        }
    }
    let kind = match (&reducible, &irreducible) {
        (Some(_), Some(_)) => VerdictKind::Mixed,
        _ if truncated => VerdictKind::Unknown,
        (Some(_), None) => VerdictKind::ExclusivelyReducible,
        (None, Some(_)) => VerdictKind::ExclusivelyIrreducible,
        (None, None) => VerdictKind::Unknown,
    };
    let witnesses = reducible.into_iter().chain(irreducible).collect();
    Ok(MatrixVerdict { kind, rule: MatrixRule::Empirical, witnesses, tested: Some(tested) })
}

/// Lexicographically least matrix under independent row and column
/// permutations, with the permutations used (`P'[i][j] = P[rows[i]][cols[j]]`).
pub fn swap_normalize(p: &IncidenceMatrix) -> (IncidenceMatrix, Vec<usize>, Vec<usize>) {
    let n = p.n();
    let mut best: Option<(IncidenceMatrix, Vec<usize>, Vec<usize>)> = None;
    for cols in (0..n).permutations(n) {
        // For fixed columns the least row order is the sorted list of rows.
        let mut rows: Vec<usize> = (0..n).collect();
        rows.sort_by(|&x, &y| {
            let rx = cols.iter().map(|&j| p.rows[x][j]);
            let ry = cols.iter().map(|&j| p.rows[y][j]);
            rx.cmp(ry).then(x.cmp(&y))
        });
        let q = p.permuted(&rows, &cols);
        if best.as_ref().is_none_or(|(b, _, _)| q < *b) {
            best = Some((q, rows, cols));
        }
    }
    best.expect("at least one permutation")
}

fn orbit(p: &IncidenceMatrix) -> impl Iterator<Item = IncidenceMatrix> + '_ {
    let n = p.n();
    (0..n)
        .permutations(n)
        .cartesian_product((0..n).permutations(n).collect::<Vec<_>>())
        .map(move |(r, c)| p.permuted(&r, &c))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn exclusively_reducible_rule(p: &IncidenceMatrix) -> Option<MatrixRule> {
    let n = p.n();
    if p.is_monomial() && p.rows.iter().flatten().filter(|&&x| x > 1).count() >= 2 {
        return Some(MatrixRule::Monomial);
    }
    if n >= 3 {
        // Letter a_j occurring only in φ(a_i): {φ(a_i)} ∪ Σ∖{a_j} is a basis,
        // non-trivial as soon as another image is longer than a letter.
        let sole = (0..n).any(|j| {
            let holders: Vec<usize> = (0..n).filter(|&i| p.rows[i][j] > 0).collect();
            holders.len() == 1 && p.row_sum(holders[0]) >= 2 && (0..n).any(|i| i != holders[0] && p.row_sum(i) >= 2)
        });
        return sole.then_some(MatrixRule::SoleOccurrence);
    }
    if n != 2 {
        return None;
    }
    for q in orbit(p) {
        let (al, be, ga, de) = (q.rows[0][0], q.rows[0][1], q.rows[1][0], q.rows[1][1]);
        if de == 0 && ((ga > 1 && al + be >= 2) || (be == 1 && al >= 2)) {
            return Some(MatrixRule::AntiTriangular);
        }
    }
    if p.rows.iter().flatten().all(|&x| x == 2) {
        return Some(MatrixRule::AllTwos);
    }
    for q in orbit(p) {
        let (al, be, ga, de) = (q.rows[0][0], q.rows[0][1], q.rows[1][0], q.rows[1][1]);
        if al == 1 && ga == 1 && be > 1 && de > 1 && gcd(be, de) > 1 {
            return Some(MatrixRule::SharedDivisorColumn);
        }
    }
    None
}

fn exclusively_irreducible_rule(p: &IncidenceMatrix) -> Option<MatrixRule> {
    if p.n() != 2 {
        return None;
    }
    orbit(p)
        .any(|q| {
            let (y, z) = (q.rows[0][1], q.rows[1][0]);
            q.rows[0][0] == 1 && q.rows[1][1] == 1 && ((y == 1 && z == 0) || (y == 0 && z == 1) || (y > 1 && z > 1))
        })
        .then_some(MatrixRule::UnitDiagonal)
}

/// Candidate factorisations `P = A · B`, each tagged with the rule it serves.
fn factor_candidates(p: &IncidenceMatrix) -> Vec<(MatrixRule, IncidenceMatrix, IncidenceMatrix)> {
    let n = p.n();
    let mut out = Vec::new();
    let diag = |i: usize, k: usize| {
        let mut d = IncidenceMatrix::identity(n);
        d.rows[i][i] = k;
        d
    };
    let all = p.rows.iter().flatten().fold(0, |g, &x| gcd(g, x));
    if all > 1 {
        let k = crate::factorbasis::smallest_prime_factor(all);
        let mut scalar = IncidenceMatrix::identity(n);
        scalar.rows.iter_mut().enumerate().for_each(|(i, r)| r[i] = k);
        let rest = IncidenceMatrix { rows: p.rows.iter().map(|r| r.iter().map(|x| x / k).collect()).collect() };
        out.push((MatrixRule::ScalarMultiple, rest, scalar));
    }
    if n == 2 {
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                // Row i dominates row j: subtract it and add it back through ψ1.
                if (0..n).all(|c| p.rows[i][c] >= p.rows[j][c]) {
                    let mut e = IncidenceMatrix::identity(n);
                    e.rows[i][j] = 1;
                    let mut b = p.clone();
                    for c in 0..n {
                        b.rows[i][c] -= p.rows[j][c];
                    }
                    out.push((MatrixRule::Dominance, e, b));
                }
                // Column i dominates column j.
                if (0..n).all(|r| p.rows[r][i] >= p.rows[r][j]) {
                    let mut e = IncidenceMatrix::identity(n);
                    e.rows[j][i] = 1;
                    let mut a = p.clone();
                    for r in 0..n {
                        a.rows[r][i] -= p.rows[r][j];
                    }
                    out.push((MatrixRule::Dominance, a, e));
                }
            }
        }
        for i in 0..n {
            let g = p.rows[i].iter().fold(0, |g, &x| gcd(g, x));
            if g > 1 {
                let mut b = p.clone();
                b.rows[i].iter_mut().for_each(|x| *x /= g);
                out.push((MatrixRule::Gcd, diag(i, g), b));
            }
            let g = p.rows.iter().fold(0, |g, r| gcd(g, r[i]));
            if g > 1 {
                let mut a = p.clone();
                a.rows.iter_mut().for_each(|r| r[i] /= g);
                out.push((MatrixRule::Gcd, a, diag(i, g)));
            }
        }
    }
    out
}

/// Builds `φ = ψ2 ∘ ψ1` with `ψ1`, `ψ2` the least realisations of `a`, `b`.
fn witness_from_factors(p: &IncidenceMatrix, a: &IncidenceMatrix, b: &IncidenceMatrix) -> Option<MatrixWitness> {
    if a.is_permutation() || b.is_permutation() {
        return None;
    }
    let alphabet = Alphabet::standard(p.n());
    let build = |m: &IncidenceMatrix| -> Option<Morphism> {
        let images: Vec<Word> = m.rows.iter().map(|r| least_word(r, &alphabet)).collect();
        Morphism::endo(alphabet.clone(), images).ok()
    };
    let (psi1, psi2) = (build(a)?, build(b)?);
    let morphism = compose(&psi2, &psi1).ok()?;
    let w = MatrixWitness { morphism, reducible: true, psi1: Some(psi1), psi2: Some(psi2) };
    w.verify(p).then_some(w)
}

/// Applies the sufficient conditions in a fixed order; the first that fires
/// decides. Rules yielding `NotExclusivelyIrreducible` fire only with a
/// reducible witness whose split has been recomposed.
pub fn classify_symbolic(p: &IncidenceMatrix) -> MatrixVerdict {
    let (q, _, _) = swap_normalize(p);
    if let Some(rule) = exclusively_reducible_rule(&q) {
        return MatrixVerdict::symbolic(VerdictKind::ExclusivelyReducible, rule);
    }
    if let Some(rule) = exclusively_irreducible_rule(&q) {
        return MatrixVerdict::symbolic(VerdictKind::ExclusivelyIrreducible, rule);
    }
    for (rule, a, b) in factor_candidates(p) {
        if let Some(w) = witness_from_factors(p, &a, &b) {
            return MatrixVerdict {
                kind: VerdictKind::NotExclusivelyIrreducible,
                rule,
                witnesses: vec![w],
                tested: None,
            };
        }
    }
    MatrixVerdict::symbolic(VerdictKind::Unknown, MatrixRule::None)
}

/// Symbolic and empirical verdicts agree, or the symbolic one is silent.
pub fn consistent(symbolic: VerdictKind, empirical: VerdictKind) -> bool {
    use VerdictKind::*;
    match (symbolic, empirical) {
        (Unknown, _) | (_, Unknown) => true,
        (NotExclusivelyIrreducible, e) => matches!(e, Mixed | ExclusivelyReducible),
        (s, e) => s == e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> IncidenceMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn incidence_of_examples() {
        let phi = Morphism::from_images(&["abcaab", "babbbba", "caabccca"]).unwrap();
        assert_eq!(incidence(&phi).unwrap(), m("3 2 1; 2 5 0; 3 1 4"));
        let phi = Morphism::from_images(&["aabbaaaabbaa", "aaaaaabbaabbbbaa"]).unwrap();
        assert_eq!(incidence(&phi).unwrap(), m("8 4; 10 6"));
        assert_eq!(incidence(&Morphism::identity(&Alphabet::standard(3))).unwrap(), IncidenceMatrix::identity(3));
    }

    #[test]
    fn product_example() {
        assert_eq!(matrix_multiply(&m("1 0; 1 1"), &m("2 1; 2 6")).unwrap(), m("2 1; 4 7"));
        let a = m("3 1; 0 2");
        assert_eq!(matrix_multiply(&a, &IncidenceMatrix::identity(2)).unwrap(), a);
        assert!(matrix_multiply(&a, &IncidenceMatrix::identity(3)).is_err());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(m(" 8 4 ;10  6").to_string(), "8 4; 10 6");
        assert!(matches!("1 x; 0 1".parse::<IncidenceMatrix>(), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!("1 0; 0".parse::<IncidenceMatrix>(), Err(Error::Parse { .. })));
        assert!(matches!("1 0; 1 0".parse::<IncidenceMatrix>(), Err(Error::InvalidMatrix(_))));
        let json = serde_json::to_string(&m("8 4; 10 6")).unwrap();
        assert_eq!(json, "[[8,4],[10,6]]");
        assert_eq!(serde_json::from_str::<IncidenceMatrix>(&json).unwrap(), m("8 4; 10 6"));
    }

    #[test]
    fn enumeration() {
        let id = enumerate_morphisms(&m("1 0; 0 1"), 10);
        assert_eq!(id.morphisms, vec![Morphism::from_images(&["a", "b"]).unwrap()]);
        let all = enumerate_morphisms(&m("1 1; 1 1"), 10);
        let shown: Vec<String> = all.morphisms.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["a->ab; b->ab", "a->ab; b->ba", "a->ba; b->ab", "a->ba; b->ba"]);
        assert!(!all.truncated);
        assert!(enumerate_morphisms(&m("1 1; 1 1"), 3).truncated);
        let p = m("8 4; 10 6");
        assert_eq!(realization_count(&p), BigUint::from(495u32 * 8008));
        let phi1 = Morphism::from_images(&["aabbaaaabbaa", "aaaaaabbaabbbbaa"]).unwrap();
        // The second morphism quoted alongside this matrix realises 7 4; 9 6.
        let phi2 = Morphism::from_images(&["abaaabbabaa", "aaaaabbbabaaabb"]).unwrap();
        assert_eq!(incidence(&phi2).unwrap(), m("7 4; 9 6"));
        assert!(!crate::factorbasis::is_reducible(&phi2).unwrap().reducible);
        assert!(crate::factorbasis::is_reducible(&phi1).unwrap().reducible);
        assert_eq!(Realizations::new(&p).filter(|f| *f == phi1).count(), 1);
    }

    #[test]
    fn symbolic_examples() {
        assert_eq!(classify_symbolic(&m("2 0; 0 3")).kind, VerdictKind::ExclusivelyReducible);
        assert_eq!(classify_symbolic(&m("2 2; 2 2")).kind, VerdictKind::ExclusivelyReducible);
        assert_eq!(classify_symbolic(&m("1 2; 3 1")).kind, VerdictKind::ExclusivelyIrreducible);
        let v = classify_symbolic(&m("8 4; 10 6"));
        assert_eq!((v.kind, v.rule), (VerdictKind::NotExclusivelyIrreducible, MatrixRule::ScalarMultiple));
        let v = classify_symbolic(&m("2 1; 4 7"));
        assert_eq!((v.kind, v.rule), (VerdictKind::NotExclusivelyIrreducible, MatrixRule::Dominance));
        let w = &v.witnesses[0];
        assert_eq!(w.psi1.as_ref().unwrap().to_string(), "a->a; b->ab");
        assert_eq!(w.psi2.as_ref().unwrap().to_string(), "a->aab; b->aabbbbbb");
        assert_eq!(w.morphism.to_string(), "a->aab; b->aabaabbbbbb");
        assert!(w.verify(&m("2 1; 4 7")));
    }

    #[test]
    fn empirical_examples() {
        let caps = EmpiricalCaps::default();
        assert_eq!(classify_empirical(&m("8 4; 10 6"), caps).unwrap().kind, VerdictKind::Mixed);
        assert_eq!(classify_empirical(&m("2 2; 2 2"), caps).unwrap().kind, VerdictKind::ExclusivelyReducible);
        assert_eq!(classify_empirical(&m("1 2; 3 1"), caps).unwrap().kind, VerdictKind::ExclusivelyIrreducible);
        let capped = EmpiricalCaps { max_morphisms: 1, ..caps };
        assert_eq!(classify_empirical(&m("1 2; 3 1"), capped).unwrap().kind, VerdictKind::Unknown);
    }

    #[test]
    fn normal_form() {
        let p = m("0 1; 2 3");
        let (q, r, c) = swap_normalize(&p);
        assert_eq!(p.permuted(&r, &c), q);
        assert_eq!(swap_normalize(&m("2 3; 0 1")).0, q);
        let (canon, _, _) = swap_normalize(&q);
        assert_eq!(swap_normalize(&canon), (q.clone(), vec![0, 1], vec![0, 1]));
    }
}
