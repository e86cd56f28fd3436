//! Block decomposition algorithms.
//!
//! Both strings are cut into blocks of `⌈√n⌉` characters (the last block may
//! be shorter).
//!
//! The block-to-block algorithm scores every block pair `(i, j)` by drawing a
//! random position of `b_i`, taking its symbol `c`, and setting
//! `T[i][j] = min(fr_c(b_i), fr_c(b̄_j))`. A block-level table
//! `D[i][j] = max(D[i][j-1], D[i-1][j], T[i][j] + D[i-1][j-1])` then picks a
//! monotone set of block pairs, each matched on its single chosen symbol.
//!
//! The random-shift algorithm first reduces every block to a semi-permutation
//! (one uniformly chosen occurrence per symbol), draws a shift `r` uniformly
//! from `1..=B`, solves each pair `(b_i, b̄_{i+r mod' B})` exactly, and returns
//! the longer of the two monotone runs of that cyclic matching.

use crate::exact::lcs_sparse;
use crate::rng::{cell_hash, derive_seed, scale_to, stage_rng};
use crate::strings::{pad_pair, MatchChain, OccurrenceIndex, Projection, Symbol, SymbolString};
use rand::Rng;

/// Sparse per-block symbol counts, sorted by symbol.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockFrequency {
    counts: Vec<(Symbol, u32)>,
}

impl BlockFrequency {
    fn build(symbols: &[Symbol]) -> Self {
        let mut sorted = symbols.to_vec();
        sorted.sort_unstable();
        let counts = sorted
            .chunk_by(|a, b| a == b)
            .map(|run| (run[0], run.len() as u32))
            .collect();
        Self { counts }
    }

    pub fn count(&self, symbol: Symbol) -> usize {
        match self.counts.binary_search_by_key(&symbol, |&(c, _)| c) {
            Ok(k) => self.counts[k].1 as usize,
            Err(_) => 0,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&(_, k)| k as usize).sum()
    }
}

/// `⌈√n⌉` using integer arithmetic.
pub fn ceil_sqrt(n: usize) -> usize {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    string: SymbolString,
    block_size: usize,
    /// Inclusive 1-based spans.
    spans: Vec<(usize, usize)>,
    freq: Vec<BlockFrequency>,
}

impl BlockDecomposition {
    pub fn new(s: &SymbolString) -> Self {
        let n = s.len();
        let block_size = ceil_sqrt(n).max(1);
        let spans: Vec<(usize, usize)> = (0..n.div_ceil(block_size))
            .map(|k| (k * block_size + 1, ((k + 1) * block_size).min(n)))
            .collect();
        let freq = spans
            .iter()
            .map(|&(a, b)| BlockFrequency::build(&s.symbols()[a - 1..b]))
            .collect();
        Self {
            string: s.clone(),
            block_size,
            spans,
            freq,
        }
    }

    pub fn string(&self) -> &SymbolString {
        &self.string
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block_count(&self) -> usize {
        self.spans.len()
    }

    pub fn spans(&self) -> &[(usize, usize)] {
        &self.spans
    }

    /// Span of 1-based block `i`.
    pub fn span(&self, i: usize) -> (usize, usize) {
        self.spans[i - 1]
    }

    pub fn frequency(&self, i: usize) -> &BlockFrequency {
        &self.freq[i - 1]
    }

    pub fn block(&self, i: usize) -> SymbolString {
        let (a, b) = self.span(i);
        SymbolString::from_parts(self.string.symbols()[a - 1..b].to_vec(), self.string.alphabet_size())
    }
}

/// `decompose_blocks` under its operation name.
pub fn decompose_blocks(s: &SymbolString) -> BlockDecomposition {
    BlockDecomposition::new(s)
}

/// Scores and chosen symbols for every block pair, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockScoreTable {
    rows: usize,
    cols: usize,
    scores: Vec<u32>,
    chosen: Vec<Symbol>,
}

impl BlockScoreTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn score(&self, i: usize, j: usize) -> usize {
        self.scores[(i - 1) * self.cols + (j - 1)] as usize
    }

    pub fn chosen(&self, i: usize, j: usize) -> Symbol {
        self.chosen[(i - 1) * self.cols + (j - 1)]
    }
}

pub fn build_score_table(s_blocks: &BlockDecomposition, t_blocks: &BlockDecomposition, seed: u64) -> BlockScoreTable {
    let rows = s_blocks.block_count();
    let cols = t_blocks.block_count();
    let mut scores = Vec::with_capacity(rows * cols);
    let mut chosen = Vec::with_capacity(rows * cols);
    for i in 1..=rows {
        let (start, end) = s_blocks.span(i);
        let len = end + 1 - start;
        let fs = s_blocks.frequency(i);
        for j in 1..=cols {
            let pos = start + scale_to(cell_hash(seed, i as u64, j as u64), len);
            let c = s_blocks.string().at(pos);
            let score = fs.count(c).min(t_blocks.frequency(j).count(c));
            scores.push(score as u32);
            chosen.push(c);
        }
    }
    BlockScoreTable {
        rows,
        cols,
        scores,
        chosen,
    }
}

/// Everything the block-to-block run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockToBlockOutcome {
    pub chain: MatchChain,
    pub table: BlockScoreTable,
    /// Block pairs taken on the diagonal with a positive score, increasing.
    pub matched: Vec<(usize, usize)>,
    /// `D[B][B']`.
    pub value: usize,
}

pub fn alg3_block_to_block_detailed(s: &SymbolString, t: &SymbolString, seed: u64) -> BlockToBlockOutcome {
    let sb = BlockDecomposition::new(s);
    let tb = BlockDecomposition::new(t);
    let table = build_score_table(&sb, &tb, seed);
    let (rows, cols) = (table.rows(), table.cols());
    let width = cols + 1;
    let mut dp = vec![0usize; (rows + 1) * width];
    for i in 1..=rows {
        for j in 1..=cols {
            let diag = dp[(i - 1) * width + j - 1] + table.score(i, j);
            dp[i * width + j] = diag.max(dp[(i - 1) * width + j]).max(dp[i * width + j - 1]);
        }
    }
    let value = dp[rows * width + cols];

    // Traceback, preferring the diagonal on ties.
    let mut matched = Vec::new();
    let (mut i, mut j) = (rows, cols);
    while i > 0 && j > 0 {
        let here = dp[i * width + j];
        let score = table.score(i, j);
        if score > 0 && here == dp[(i - 1) * width + j - 1] + score {
            matched.push((i, j));
            i -= 1;
            j -= 1;
        } else if here == dp[(i - 1) * width + j] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    matched.reverse();

    let s_index = OccurrenceIndex::build(s);
    let t_index = OccurrenceIndex::build(t);
    let mut pairs = Vec::with_capacity(value);
    for &(bi, bj) in &matched {
        let c = table.chosen(bi, bj);
        let k = table.score(bi, bj);
        let (sa, sb_) = sb.span(bi);
        let (ta, tb_) = tb.span(bj);
        let left = &s_index.positions_in_span(c, sa, sb_)[..k];
        let right = &t_index.positions_in_span(c, ta, tb_)[..k];
        pairs.extend(left.iter().copied().zip(right.iter().copied()));
    }
    BlockToBlockOutcome {
        chain: MatchChain::new(pairs),
        table,
        matched,
        value,
    }
}

pub fn alg3_block_to_block(s: &SymbolString, t: &SymbolString, seed: u64) -> MatchChain {
    alg3_block_to_block_detailed(s, t, seed).chain
}

/// A block reduced so that every symbol occurs at most once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SemiPermutation {
    /// Kept characters with their positions in the parent.
    pub kept: Projection,
}

impl SemiPermutation {
    pub fn symbols(&self) -> &[Symbol] {
        self.kept.string.symbols()
    }

    pub fn is_semi_permutation(&self) -> bool {
        let mut syms = self.symbols().to_vec();
        syms.sort_unstable();
        syms.windows(2).all(|w| w[0] != w[1])
    }
}

/// Dense per-symbol scratch reused across blocks; entries are reset after use.
struct ReduceScratch {
    count: Vec<u32>,
    target: Vec<u32>,
    touched: Vec<Symbol>,
}

impl ReduceScratch {
    fn new(alphabet: usize) -> Self {
        Self {
            count: vec![0; alphabet],
            target: vec![0; alphabet],
            touched: Vec::new(),
        }
    }

    fn reduce(&mut self, s: &SymbolString, (start, end): (usize, usize), seed: u64) -> SemiPermutation {
        let sym = s.symbols();
        let mut rng = stage_rng(seed);
        for &c in &sym[start - 1..end] {
            if self.count[c as usize] == 0 {
                self.touched.push(c);
            }
            self.count[c as usize] += 1;
        }
        for &c in &self.touched {
            self.target[c as usize] = rng.random_range(0..self.count[c as usize]);
            // Reused below as a running occurrence counter.
            self.count[c as usize] = 0;
        }
        let mut symbols = Vec::with_capacity(self.touched.len());
        let mut positions = Vec::with_capacity(self.touched.len());
        for p in start..=end {
            let c = sym[p - 1] as usize;
            if self.count[c] == self.target[c] {
                symbols.push(sym[p - 1]);
                positions.push(p);
            }
            self.count[c] += 1;
        }
        for &c in &self.touched {
            self.count[c as usize] = 0;
        }
        self.touched.clear();
        SemiPermutation {
            kept: Projection {
                string: SymbolString::from_parts(symbols, s.alphabet_size()),
                positions,
            },
        }
    }
}

/// Keeps one uniformly random occurrence of each symbol, independently per
/// symbol, preserving order.
pub fn reduce_to_semi_permutation(block: &SymbolString, seed: u64) -> SemiPermutation {
    if block.is_empty() {
        return SemiPermutation::default();
    }
    ReduceScratch::new(block.alphabet_size()).reduce(block, (1, block.len()), seed)
}

/// Reduces every block of a decomposition; positions refer to the full string.
pub fn reduce_blocks(blocks: &BlockDecomposition, seed: u64) -> Vec<SemiPermutation> {
    let mut scratch = ReduceScratch::new(blocks.string().alphabet_size());
    blocks
        .spans()
        .iter()
        .enumerate()
        .map(|(k, &span)| scratch.reduce(blocks.string(), span, derive_seed(seed, k as u64)))
        .collect()
}

/// `((i + r - 1) mod B) + 1`: the cyclic partner of block `i` under shift `r`.
pub fn shifted_block(i: usize, shift: usize, blocks: usize) -> usize {
    (i + shift - 1) % blocks + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomShiftOutcome {
    pub chain: MatchChain,
    pub shift: usize,
    pub blocks: usize,
    /// `|q_i|` for `i = 1..=B`.
    pub q_lengths: Vec<usize>,
    /// Lengths of the non-wrapping run `t₁` and the wrapping run `t₂`.
    pub run_lengths: (usize, usize),
}

/// The random-shift algorithm with an explicit shift `r ∈ 1..=B`.
/// Unequal lengths are padded first.
pub fn alg4_with_shift(s: &SymbolString, t: &SymbolString, shift: usize, seed: u64) -> RandomShiftOutcome {
    let (s, t) = pad_pair(s, t);
    if s.is_empty() {
        return RandomShiftOutcome {
            chain: MatchChain::empty(),
            shift,
            blocks: 0,
            q_lengths: Vec::new(),
            run_lengths: (0, 0),
        };
    }
    let sb = BlockDecomposition::new(&s);
    let tb = BlockDecomposition::new(&t);
    let blocks = sb.block_count();
    debug_assert_eq!(blocks, tb.block_count());
    assert!((1..=blocks).contains(&shift), "shift {shift} outside 1..={blocks}");
    let s_semi = reduce_blocks(&sb, derive_seed(seed, 0));
    let t_semi = reduce_blocks(&tb, derive_seed(seed, 1));

    let q: Vec<MatchChain> = (1..=blocks)
        .map(|i| {
            let a = &s_semi[i - 1].kept;
            let b = &t_semi[shifted_block(i, shift, blocks) - 1].kept;
            lcs_sparse(&a.string, &b.string).remap(a, b)
        })
        .collect();
    let split = blocks - shift;
    let concat = |range: &[MatchChain]| {
        let mut chain = MatchChain::empty();
        for part in range {
            chain.extend(part);
        }
        chain
    };
    let t1 = concat(&q[..split]);
    let t2 = concat(&q[split..]);
    let run_lengths = (t1.len(), t2.len());
    RandomShiftOutcome {
        chain: if t1.len() >= t2.len() { t1 } else { t2 },
        shift,
        blocks,
        q_lengths: q.iter().map(MatchChain::len).collect(),
        run_lengths,
    }
}

pub fn alg4_random_shift_detailed(s: &SymbolString, t: &SymbolString, seed: u64) -> RandomShiftOutcome {
    let blocks = BlockDecomposition::new(&pad_pair(s, t).0).block_count();
    if blocks == 0 {
        return alg4_with_shift(s, t, 1, seed);
    }
    let shift = stage_rng(derive_seed(seed, 2)).random_range(1..=blocks);
    alg4_with_shift(s, t, shift, seed)
}

pub fn alg4_random_shift(s: &SymbolString, t: &SymbolString, seed: u64) -> MatchChain {
    alg4_random_shift_detailed(s, t, seed).chain
}

/// Better of the block-to-block and random-shift chains (block-to-block on ties).
pub fn alg5_combine(s: &SymbolString, t: &SymbolString, seed: u64) -> MatchChain {
    let blockwise = alg3_block_to_block(s, t, derive_seed(seed, 3));
    let shifted = alg4_random_shift(s, t, derive_seed(seed, 4));
    if shifted.len() > blockwise.len() {
        shifted
    } else {
        blockwise
    }
}
