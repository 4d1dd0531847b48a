//! Alphabets, words and Parikh vectors.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word is a sequence of single-character symbols. The empty vector only
/// shows up as a bookkeeping value; no public operation accepts it as an image.
pub type Word = Vec<char>;

pub type ParikhVector = Vec<usize>;

pub fn word(s: &str) -> Word {
    s.chars().collect()
}

pub fn show(w: &[char]) -> String {
    w.iter().collect()
}

/// Ordered set of distinct symbols. The order fixes Parikh and matrix indexing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `a`, `b`, `c`, ... up to `n` letters.
    pub fn standard(n: usize) -> Self {
        assert!((1..=26).contains(&n), "standard alphabets have 1..=26 letters");
        Alphabet { symbols: (0..n).map(|i| (b'a' + i as u8) as char).collect() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> char {
        self.symbols[i]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.symbols.iter().all(|&c| other.contains(c))
    }

    /// Same symbols, order ignored.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.is_subset_of(other)
    }

    pub fn check_word(&self, w: &[char]) -> Result<()> {
        match w.iter().find(|&&c| !self.contains(c)) {
            Some(&c) => Err(Error::UnknownSymbol(c)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", show(&self.symbols))
    }
}

impl TryFrom<String> for Alphabet {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Alphabet::new(s.chars().collect())
    }
}

impl From<Alphabet> for String {
    fn from(a: Alphabet) -> String {
        a.to_string()
    }
}

impl std::str::FromStr for Alphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Alphabet::new(s.chars().filter(|c| !c.is_whitespace()).collect())
    }
}

pub fn parikh(w: &[char], alphabet: &Alphabet) -> Result<ParikhVector> {
    let mut counts = vec![0; alphabet.len()];
    for &c in w {
        let i = alphabet.index_of(c).ok_or(Error::UnknownSymbol(c))?;
        counts[i] += 1;
    }
    Ok(counts)
}

pub fn reverse(w: &[char]) -> Word {
    w.iter().rev().copied().collect()
}

/// Overlapping occurrences of `v` in `w`.
pub fn count_occurrences(w: &[char], v: &[char]) -> usize {
    if v.is_empty() || v.len() > w.len() {
        return 0;
    }
    w.windows(v.len()).filter(|win| *win == v).count()
}

pub fn is_parikh_positive_word(w: &[char], alphabet: &Alphabet) -> bool {
    alphabet.symbols().iter().all(|c| w.contains(c))
}

pub fn symbol_set(w: &[char]) -> BTreeSet<char> {
    w.iter().copied().collect()
}

/// All distinct non-empty factors (substrings) of `w`.
pub fn factors(w: &[char]) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for i in 0..w.len() {
        for j in i + 1..=w.len() {
            out.insert(w[i..j].to_vec());
        }
    }
    out
}

/// Length-then-lexicographic order used for canonical listings.
pub fn shortlex(a: &[char], b: &[char]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Maximal runs as (symbol, exponent) pairs: `aabbb` gives `[(a,2),(b,3)]`.
pub fn runs(w: &[char]) -> Vec<(char, usize)> {
    let mut out: Vec<(char, usize)> = Vec::new();
    for &c in w {
        match out.last_mut() {
            Some((d, k)) if *d == c => *k += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parikh_counts() {
        let abc = Alphabet::standard(3);
        assert_eq!(parikh(&word("abcaab"), &abc).unwrap(), vec![3, 2, 1]);
        let ab = Alphabet::standard(2);
        assert_eq!(parikh(&word("a"), &ab).unwrap(), vec![1, 0]);
        assert_eq!(parikh(&word("bba"), &ab).unwrap(), vec![1, 2]);
        assert_eq!(parikh(&word("abd"), &ab), Err(Error::UnknownSymbol('d')));
    }

    #[test]
    fn reversal() {
        assert_eq!(reverse(&word("abb")), word("bba"));
        assert_eq!(reverse(&word("a")), word("a"));
        assert_eq!(reverse(&word("abab")), word("baba"));
    }

    #[test]
    fn occurrences_overlap() {
        assert_eq!(count_occurrences(&word("aaa"), &word("aa")), 2);
        assert_eq!(count_occurrences(&word("abab"), &word("ab")), 2);
        assert_eq!(count_occurrences(&word("abc"), &word("d")), 0);
    }

    #[test]
    fn positivity() {
        assert!(is_parikh_positive_word(&word("ab"), &Alphabet::standard(2)));
        assert!(!is_parikh_positive_word(&word("aa"), &Alphabet::standard(2)));
        assert!(is_parikh_positive_word(&word("cba"), &Alphabet::standard(3)));
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert_eq!(Alphabet::new(vec!['a', 'a']), Err(Error::DuplicateSymbol('a')));
        assert_eq!(Alphabet::new(vec![]), Err(Error::EmptyAlphabet));
    }

    #[test]
    fn run_lengths() {
        assert_eq!(runs(&word("aabbba")), vec![('a', 2), ('b', 3), ('a', 1)]);
    }
}
