//! Exact LCS oracles: the quadratic table and the sparse matching-pair route.
//!
//! The sparse route enumerates matching pairs `(a, b)` row by row and finds the
//! longest chain strictly increasing in both coordinates. Inside one row the
//! pairs are fed with `b` descending, so a prefix-maximum query at `b - 1`
//! never chains two pairs that share `a`.

use crate::error::{LcsError, Result};
use crate::strings::{count_matching_pairs, MatchChain, OccurrenceIndex, Symbol, SymbolString};
use std::borrow::Cow;

/// `lcs_sparse` hands dense instances below this many table cells to the
/// quadratic oracle.
const QUADRATIC_FALLBACK_CELLS: usize = 1 << 22;

/// Matching pairs `(a, b)` sorted lexicographically, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairSequence {
    pairs: Vec<(usize, usize)>,
}

impl PairSequence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(index) = pairs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(LcsError::UnsortedPairs { index: index + 1 });
        }
        Ok(Self { pairs })
    }

    /// Sorts and deduplicates arbitrary pairs.
    pub fn from_unsorted(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Self { pairs }
    }

    pub(crate) fn from_sorted(pairs: Vec<(usize, usize)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Textbook O(|s|·|t|) table with traceback.
pub fn lcs_quadratic(s: &SymbolString, t: &SymbolString) -> MatchChain {
    let (a, b) = (s.symbols(), t.symbols());
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return MatchChain::empty();
    }
    let width = m + 1;
    let mut table = vec![0u32; (n + 1) * width];
    for i in 1..=n {
        for j in 1..=m {
            table[i * width + j] = if a[i - 1] == b[j - 1] {
                table[(i - 1) * width + j - 1] + 1
            } else {
                table[(i - 1) * width + j].max(table[i * width + j - 1])
            };
        }
    }
    let (mut i, mut j) = (n, m);
    let mut pairs = Vec::with_capacity(table[n * width + m] as usize);
    while i > 0 && j > 0 {
        if a[i - 1] == b[j - 1] {
            pairs.push((i, j));
            i -= 1;
            j -= 1;
        } else if table[(i - 1) * width + j] >= table[i * width + j - 1] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    pairs.reverse();
    MatchChain::new(pairs)
}

#[derive(Clone, Copy, Default)]
struct Best {
    len: u32,
    node: u32,
}

struct Node {
    a: u32,
    b: u32,
    parent: u32,
}

/// Longest strictly-increasing chain over pairs fed one row at a time.
struct ChainBuilder {
    tree: Vec<Best>,
    // 1-based node ids; 0 is "no parent".
    nodes: Vec<Node>,
    best: Best,
}

impl ChainBuilder {
    fn new(max_b: usize) -> Self {
        Self {
            tree: vec![Best::default(); max_b + 1],
            nodes: Vec::new(),
            best: Best::default(),
        }
    }

    fn query(&self, mut b: usize) -> Best {
        let mut out = Best::default();
        while b > 0 {
            if self.tree[b].len > out.len {
                out = self.tree[b];
            }
            b &= b - 1;
        }
        out
    }

    fn update(&mut self, mut b: usize, value: Best) {
        while b < self.tree.len() {
            if value.len > self.tree[b].len {
                self.tree[b] = value;
            }
            b += b & b.wrapping_neg();
        }
    }

    /// `bs` ascending; all pairs share first coordinate `a`.
    fn push_row(&mut self, a: usize, bs: impl DoubleEndedIterator<Item = usize>) {
        for b in bs.rev() {
            let prev = self.query(b - 1);
            self.nodes.push(Node {
                a: a as u32,
                b: b as u32,
                parent: prev.node,
            });
            let node = u32::try_from(self.nodes.len()).expect("more than u32::MAX matching pairs");
            let here = Best {
                len: prev.len + 1,
                node,
            };
            self.update(b, here);
            if here.len > self.best.len {
                self.best = here;
            }
        }
    }

    fn finish(self) -> MatchChain {
        let mut pairs = Vec::with_capacity(self.best.len as usize);
        let mut cur = self.best.node;
        while cur != 0 {
            let node = &self.nodes[cur as usize - 1];
            pairs.push((node.a as usize, node.b as usize));
            cur = node.parent;
        }
        pairs.reverse();
        MatchChain::new(pairs)
    }
}

/// Longest subsequence of `m` strictly increasing in both coordinates.
pub fn lis_pairs(m: &PairSequence) -> MatchChain {
    let max_b = m.pairs().iter().map(|&(_, b)| b).max().unwrap_or(0);
    let mut builder = ChainBuilder::new(max_b);
    for group in m.pairs().chunk_by(|x, y| x.0 == y.0) {
        builder.push_row(group[0].0, group.iter().map(|&(_, b)| b));
    }
    builder.finish()
}

/// Renames symbols so the alphabet is no larger than the number of distinct
/// symbols of `t` plus one; symbols of `s` absent from `t` share the extra id.
fn compact<'a>(s: &'a SymbolString, t: &'a SymbolString) -> (Cow<'a, SymbolString>, Cow<'a, SymbolString>) {
    let alphabet = s.alphabet_size().max(t.alphabet_size());
    if alphabet <= 2 * (s.len() + t.len()) + 16 {
        return (Cow::Borrowed(s), Cow::Borrowed(t));
    }
    let mut distinct: Vec<Symbol> = t.symbols().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let absent = distinct.len() as Symbol;
    let rename = |c: Symbol| match distinct.binary_search(&c) {
        Ok(k) => k as Symbol,
        Err(_) => absent,
    };
    let size = distinct.len() + 1;
    let s2 = SymbolString::from_parts(s.symbols().iter().map(|&c| rename(c)).collect(), size);
    let t2 = SymbolString::from_parts(t.symbols().iter().map(|&c| rename(c)).collect(), size);
    (Cow::Owned(s2), Cow::Owned(t2))
}

/// Exact LCS with witness in O(n + R log n) time and O(n + R) memory.
pub fn lcs_sparse(s: &SymbolString, t: &SymbolString) -> MatchChain {
    if s.is_empty() || t.is_empty() {
        return MatchChain::empty();
    }
    let cells = s.len() * t.len();
    if cells <= QUADRATIC_FALLBACK_CELLS && count_matching_pairs(s, t) * 4 > cells as u64 {
        return lcs_quadratic(s, t);
    }
    let (s, t) = compact(s, t);
    let index = OccurrenceIndex::build(&t);
    let mut builder = ChainBuilder::new(t.len());
    for (a, &c) in s.symbols().iter().enumerate() {
        builder.push_row(a + 1, index.positions_of(c).iter().copied());
    }
    builder.finish()
}

/// Exact LCS length only, with O(n) working memory (threshold form of the
/// sparse route).
pub fn lcs_sparse_length(s: &SymbolString, t: &SymbolString) -> usize {
    if s.is_empty() || t.is_empty() {
        return 0;
    }
    let (s, t) = compact(s, t);
    let index = OccurrenceIndex::build(&t);
    let mut tails: Vec<usize> = Vec::new();
    for &c in s.symbols() {
        for &b in index.positions_of(c).iter().rev() {
            let k = tails.partition_point(|&x| x < b);
            if k == tails.len() {
                tails.push(b);
            } else if tails[k] > b {
                tails[k] = b;
            }
        }
    }
    tails.len()
}
