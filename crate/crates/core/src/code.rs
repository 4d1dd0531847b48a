//! Parsing words over a finite set of codewords: membership in `V⁺`, exact
//! parse counts, lexicographically ordered parses, and the Sardinas-Patterson
//! unique decipherability test.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::words::Word;

#[derive(Debug, Default, Clone)]
struct Node {
    next: HashMap<char, usize>,
    /// Indices of the codewords ending here, ascending.
    ends: Vec<usize>,
}

/// Prefix tree over an indexed list of codewords. Repeated codewords are
/// allowed; each keeps its own index.
#[derive(Debug, Clone)]
pub struct Trie {
    nodes: Vec<Node>,
    lens: Vec<usize>,
}

impl Trie {
    pub fn new(words: &[Word]) -> Self {
        let mut nodes = vec![Node::default()];
        for (idx, w) in words.iter().enumerate() {
            let mut cur = 0;
            for &c in w {
                cur = match nodes[cur].next.get(&c) {
                    Some(&n) => n,
                    None => {
                        nodes.push(Node::default());
                        let n = nodes.len() - 1;
                        nodes[cur].next.insert(c, n);
                        n
                    }
                };
            }
            nodes[cur].ends.push(idx);
        }
        Trie { nodes, lens: words.iter().map(|w| w.len()).collect() }
    }

    /// Codewords occurring at position `p` of `w`, as (index, length), ordered by index.
    pub fn matches_at(&self, w: &[char], p: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut cur = 0;
        for &c in &w[p..] {
            match self.nodes[cur].next.get(&c) {
                Some(&n) => cur = n,
                None => break,
            }
            for &i in &self.nodes[cur].ends {
                out.push((i, self.lens[i]));
            }
        }
        out.sort_unstable();
        out
    }

    /// True when no codeword is a prefix of another and none repeats.
    pub fn is_prefix_code(&self) -> bool {
        self.nodes.iter().all(|n| n.ends.len() <= 1 && (n.ends.is_empty() || n.next.is_empty()))
    }

    /// Left-to-right parse for prefix codes; linear in `|w|`.
    pub fn parse_prefix_code(&self, w: &[char]) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = 0;
        for &c in w {
            cur = *self.nodes[cur].next.get(&c)?;
            if let Some(&i) = self.nodes[cur].ends.first() {
                out.push(i);
                cur = 0;
            }
        }
        (cur == 0 && !w.is_empty()).then_some(out)
    }
}

/// Parse tables for one word against one codeword list.
pub struct Parses {
    /// `edges[p]`: codewords matching at `p` whose remainder is parseable.
    edges: Vec<Vec<(usize, usize)>>,
    reach: Vec<bool>,
}

impl Parses {
    pub fn new(trie: &Trie, w: &[char]) -> Self {
        let n = w.len();
        let mut reach = vec![false; n + 1];
        reach[n] = true;
        let mut edges = vec![Vec::new(); n + 1];
        for p in (0..n).rev() {
            let live: Vec<_> = trie.matches_at(w, p).into_iter().filter(|&(_, l)| reach[p + l]).collect();
            reach[p] = !live.is_empty();
            edges[p] = live;
        }
        Parses { edges, reach }
    }

    pub fn is_member(&self) -> bool {
        self.reach.len() > 1 && self.reach[0]
    }

    pub fn count(&self) -> BigUint {
        let n = self.reach.len() - 1;
        if n == 0 {
            return BigUint::zero();
        }
        let mut cnt = vec![BigUint::zero(); n + 1];
        cnt[n] = BigUint::one();
        for p in (0..n).rev() {
            let mut acc = BigUint::zero();
            for &(_, l) in &self.edges[p] {
                acc += &cnt[p + l];
            }
            cnt[p] = acc;
        }
        cnt.swap_remove(0)
    }

    /// Lexicographically least index sequence.
    pub fn least(&self) -> Option<Vec<usize>> {
        if !self.is_member() {
            return None;
        }
        let n = self.reach.len() - 1;
        let mut p = 0;
        let mut out = Vec::new();
        while p < n {
            let (i, l) = self.edges[p][0];
            out.push(i);
            p += l;
        }
        Some(out)
    }

    /// Up to `cap` index sequences in lexicographic order.
    pub fn enumerate(&self, cap: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.is_member() && cap > 0 {
            let mut stack = Vec::new();
            self.walk(0, &mut stack, &mut out, cap);
        }
        out
    }

    fn walk(&self, p: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) {
        if p + 1 == self.reach.len() {
            out.push(stack.clone());
            return;
        }
        for &(i, l) in &self.edges[p] {
            if out.len() >= cap {
                return;
            }
            stack.push(i);
            self.walk(p + l, stack, out, cap);
            stack.pop();
        }
    }
}

pub fn is_member(words: &[Word], w: &[char]) -> bool {
    Parses::new(&Trie::new(words), w).is_member()
}

/// Sardinas-Patterson. Repeated or empty codewords make the set non-decipherable.
pub fn is_uniquely_decipherable(words: &[Word]) -> bool {
    let code: BTreeSet<&[char]> = words.iter().map(|w| w.as_slice()).collect();
    if code.len() != words.len() || code.contains(&[][..]) {
        return false;
    }
    let quotients = |xs: &BTreeSet<Word>, ys: &BTreeSet<&[char]>| -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for x in xs {
            for y in ys {
                if y.len() > x.len() && y.starts_with(x) {
                    out.insert(y[x.len()..].to_vec());
                }
                if x.len() > y.len() && x.starts_with(y) {
                    out.insert(x[y.len()..].to_vec());
                }
            }
        }
        out
    };
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut frontier: BTreeSet<Word> = BTreeSet::new();
    for x in &code {
        for y in &code {
            if y.len() > x.len() && y.starts_with(x) {
                frontier.insert(y[x.len()..].to_vec());
            }
        }
    }
    while !frontier.is_empty() {
        if frontier.iter().any(|d| code.contains(d.as_slice())) {
            return false;
        }
        seen.extend(frontier.iter().cloned());
        frontier = quotients(&frontier, &code).into_iter().filter(|d| !seen.contains(d)).collect();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::word;

    fn ws(xs: &[&str]) -> Vec<Word> {
        xs.iter().map(|s| word(s)).collect()
    }

    #[test]
    fn decodings_listed_in_order() {
        let t = Trie::new(&ws(&["a", "ab", "b"]));
        let p = Parses::new(&t, &word("abab"));
        assert_eq!(p.count(), BigUint::from(4u32));
        assert_eq!(p.enumerate(10), vec![vec![0, 2, 0, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 1]]);
        assert_eq!(p.least(), Some(vec![0, 2, 0, 2]));
        assert_eq!(p.enumerate(2).len(), 2);
    }

    #[test]
    fn prefix_code_parse() {
        let t = Trie::new(&ws(&["b", "aa"]));
        assert!(t.is_prefix_code());
        assert_eq!(t.parse_prefix_code(&word("aaaab")), Some(vec![1, 1, 0]));
        assert_eq!(t.parse_prefix_code(&word("aaa")), None);
        assert!(!Trie::new(&ws(&["a", "ab"])).is_prefix_code());
    }

    #[test]
    fn unique_decipherability() {
        assert!(is_uniquely_decipherable(&ws(&["a", "ab"])));
        assert!(is_uniquely_decipherable(&ws(&["ab", "bba"])));
        assert!(!is_uniquely_decipherable(&ws(&["a", "ab", "b"])));
        assert!(!is_uniquely_decipherable(&ws(&["ab", "ab"])));
        assert!(!is_uniquely_decipherable(&ws(&["aba", "a", "ba"])));
        assert!(is_uniquely_decipherable(&ws(&["aba", "a"])));
    }
}
