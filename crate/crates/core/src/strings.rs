//! Symbol strings, occurrence indexing, match chains and witness validation.
//!
//! Positions are 1-based everywhere. Position 0 means "before the first
//! character" when used as a lower bound for [`OccurrenceIndex::first_occurrence_after`].

use crate::error::{LcsError, Result};

/// Dense symbol id.
pub type Symbol = u32;

/// A sequence of dense symbol ids drawn from `0..alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolString {
    symbols: Vec<Symbol>,
    alphabet_size: usize,
}

impl SymbolString {
    pub fn new(symbols: Vec<Symbol>, alphabet_size: usize) -> Result<Self> {
        if let Some((idx, &sym)) = symbols
            .iter()
            .enumerate()
            .find(|(_, &sym)| sym as usize >= alphabet_size)
        {
            return Err(LcsError::SymbolOutOfRange {
                symbol: sym,
                position: idx + 1,
                alphabet_size,
            });
        }
        Ok(Self { symbols, alphabet_size })
    }

    /// Builds a string whose alphabet is `0..=max(symbols)`.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        let alphabet_size = symbols.iter().map(|&s| s as usize + 1).max().unwrap_or(0);
        Self { symbols, alphabet_size }
    }

    /// Caller guarantees every symbol is below `alphabet_size`.
    pub(crate) fn from_parts(symbols: Vec<Symbol>, alphabet_size: usize) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet_size));
        Self { symbols, alphabet_size }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Symbol at 1-based `position`.
    pub fn at(&self, position: usize) -> Symbol {
        self.symbols[position - 1]
    }

    pub fn get(&self, position: usize) -> Option<Symbol> {
        position.checked_sub(1).and_then(|p| self.symbols.get(p).copied())
    }

    /// Same symbols, alphabet widened to `alphabet_size` (never narrowed).
    pub fn with_alphabet(mut self, alphabet_size: usize) -> Self {
        self.alphabet_size = self.alphabet_size.max(alphabet_size);
        self
    }

    /// Number of distinct symbols that actually occur.
    pub fn distinct_symbols(&self) -> usize {
        let mut seen = vec![false; self.alphabet_size];
        let mut count = 0;
        for &s in &self.symbols {
            if !seen[s as usize] {
                seen[s as usize] = true;
                count += 1;
            }
        }
        count
    }
}

/// A subsequence of a parent string together with the parent positions of
/// its characters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Projection {
    pub string: SymbolString,
    /// `positions[k]` is the 1-based parent position of character `k + 1`.
    pub positions: Vec<usize>,
}

impl Projection {
    /// Keeps the parent positions selected by `keep`, in order.
    pub fn select(parent: &SymbolString, mut keep: impl FnMut(usize, Symbol) -> bool) -> Self {
        let mut symbols = Vec::new();
        let mut positions = Vec::new();
        for (idx, &sym) in parent.symbols().iter().enumerate() {
            if keep(idx + 1, sym) {
                symbols.push(sym);
                positions.push(idx + 1);
            }
        }
        Self {
            string: SymbolString::from_parts(symbols, parent.alphabet_size()),
            positions,
        }
    }

    pub fn identity(parent: &SymbolString) -> Self {
        Self {
            string: parent.clone(),
            positions: (1..=parent.len()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Parent position of local 1-based position `local`.
    pub fn parent_position(&self, local: usize) -> usize {
        self.positions[local - 1]
    }

    /// Composes with an outer projection: the result maps into `outer`'s parent.
    pub fn compose(&self, outer: &Projection) -> Projection {
        Projection {
            string: self.string.clone(),
            positions: self.positions.iter().map(|&p| outer.parent_position(p)).collect(),
        }
    }
}

/// Per-symbol counts over one string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<usize>,
}

impl FrequencyTable {
    pub fn build(s: &SymbolString) -> Self {
        Self::with_capacity(s, s.alphabet_size())
    }

    /// Table indexed over at least `alphabet_size` symbols.
    pub fn with_capacity(s: &SymbolString, alphabet_size: usize) -> Self {
        let mut counts = vec![0usize; alphabet_size.max(s.alphabet_size())];
        for &sym in s.symbols() {
            counts[sym as usize] += 1;
        }
        Self { counts }
    }

    pub fn count(&self, symbol: Symbol) -> usize {
        self.counts.get(symbol as usize).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

/// Sorted occurrence lists per symbol, stored contiguously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceIndex {
    offsets: Vec<usize>,
    positions: Vec<usize>,
}

impl OccurrenceIndex {
    pub fn build(s: &SymbolString) -> Self {
        let m = s.alphabet_size();
        let mut offsets = vec![0usize; m + 1];
        for &sym in s.symbols() {
            offsets[sym as usize + 1] += 1;
        }
        for c in 0..m {
            offsets[c + 1] += offsets[c];
        }
        let mut cursor = offsets.clone();
        let mut positions = vec![0usize; s.len()];
        for (idx, &sym) in s.symbols().iter().enumerate() {
            let slot = &mut cursor[sym as usize];
            positions[*slot] = idx + 1;
            *slot += 1;
        }
        Self { offsets, positions }
    }

    pub fn alphabet_size(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Strictly increasing 1-based positions of `symbol`.
    pub fn positions_of(&self, symbol: Symbol) -> &[usize] {
        let c = symbol as usize;
        if c + 1 >= self.offsets.len() {
            return &[];
        }
        &self.positions[self.offsets[c]..self.offsets[c + 1]]
    }

    pub fn frequency(&self, symbol: Symbol) -> usize {
        self.positions_of(symbol).len()
    }

    /// Smallest position `p > k` holding `symbol`.
    pub fn first_occurrence_after(&self, symbol: Symbol, k: usize) -> Option<usize> {
        let list = self.positions_of(symbol);
        let idx = list.partition_point(|&p| p <= k);
        list.get(idx).copied()
    }

    /// Number of occurrences of `symbol` inside the inclusive span `[start, end]`.
    pub fn count_in_span(&self, symbol: Symbol, start: usize, end: usize) -> usize {
        let list = self.positions_of(symbol);
        list.partition_point(|&p| p <= end) - list.partition_point(|&p| p < start)
    }

    /// Occurrences of `symbol` inside the inclusive span `[start, end]`.
    pub fn positions_in_span(&self, symbol: Symbol, start: usize, end: usize) -> &[usize] {
        let list = self.positions_of(symbol);
        &list[list.partition_point(|&p| p < start)..list.partition_point(|&p| p <= end)]
    }
}

/// A common-subsequence witness: `(i, j)` pairs, 1-based, strictly increasing
/// in both coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchChain {
    pub pairs: Vec<(usize, usize)>,
}

impl MatchChain {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Self { pairs }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Rewrites both coordinates through position maps.
    pub fn remap(&self, s_map: &Projection, t_map: &Projection) -> MatchChain {
        MatchChain {
            pairs: self
                .pairs
                .iter()
                .map(|&(i, j)| (s_map.parent_position(i), t_map.parent_position(j)))
                .collect(),
        }
    }

    pub fn remap_first(&self, s_map: &Projection) -> MatchChain {
        MatchChain {
            pairs: self.pairs.iter().map(|&(i, j)| (s_map.parent_position(i), j)).collect(),
        }
    }

    /// Appends another chain; caller guarantees it lies strictly after this one.
    pub fn extend(&mut self, other: &MatchChain) {
        self.pairs.extend_from_slice(&other.pairs);
    }

    /// The common subsequence spelled by the chain, read from `s`.
    pub fn symbols(&self, s: &SymbolString) -> Vec<Symbol> {
        self.pairs.iter().map(|&(i, _)| s.at(i)).collect()
    }
}

/// True iff `chain` is a valid common-subsequence witness of `s` and `t`.
pub fn validate_chain(s: &SymbolString, t: &SymbolString, chain: &MatchChain) -> bool {
    let mut prev: Option<(usize, usize)> = None;
    for &(i, j) in &chain.pairs {
        match (s.get(i), t.get(j)) {
            (Some(a), Some(b)) if a == b => {}
            _ => return false,
        }
        if let Some((pi, pj)) = prev {
            if i <= pi || j <= pj {
                return false;
            }
        }
        prev = Some((i, j));
    }
    true
}

/// Extends the shorter string with a fresh sentinel symbol so both have the
/// same length. The sentinel never matches, so the LCS is unchanged.
pub fn pad_pair(s: &SymbolString, t: &SymbolString) -> (SymbolString, SymbolString) {
    if s.len() == t.len() {
        return (s.clone(), t.clone());
    }
    let sentinel = s.alphabet_size().max(t.alphabet_size());
    let alphabet = sentinel + 1;
    let n = s.len().max(t.len());
    let pad = |x: &SymbolString| {
        let mut symbols = x.symbols().to_vec();
        symbols.resize(n, sentinel as Symbol);
        SymbolString::from_parts(symbols, alphabet)
    };
    (pad(s), pad(t))
}

/// `R = |{(i, j) : s_i = t_j}|`.
pub fn count_matching_pairs(s: &SymbolString, t: &SymbolString) -> u64 {
    let freq = FrequencyTable::with_capacity(t, s.alphabet_size());
    s.symbols().iter().map(|&c| freq.count(c) as u64).sum()
}
