//! Character-sampling approximators and the matching-pair sampler.
//!
//! - [`alg0_sqrt_baseline`]: keep each character of `s` with probability
//!   `n^{-1/2}` and solve the sampled instance with the truncated table.
//! - [`alg1_bounded_solution`]: the same with rate `n^{-(1-δ)/2}` and the table
//!   truncated at `⌈n^{(1-δ)/2}⌉` columns.
//! - [`alg6_sampled_pairs`]: keep each matching pair with probability `p`,
//!   jumping between kept pairs with geometric gaps, then chain the survivors.

use crate::error::{LcsError, Result};
use crate::exact::{lis_pairs, PairSequence};
use crate::rng::{derive_seed, stage_rng};
use crate::strings::{count_matching_pairs, MatchChain, OccurrenceIndex, Projection, SymbolString};
use rand::Rng;
use rand_distr::{Distribution, Geometric};

const INF: usize = usize::MAX;

/// `⌈n^e⌉`, robust to `powf` landing a hair above an integer.
pub fn ceil_pow(n: usize, exponent: f64) -> usize {
    let x = (n as f64).powf(exponent);
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

/// Sampling rate, column bound and seed for the character samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleParams {
    pub rate: f64,
    pub cap: usize,
    pub seed: u64,
}

impl SampleParams {
    pub fn new(rate: f64, cap: usize, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(LcsError::InvalidParameter {
                name: "rate",
                value: rate,
                expected: "(0, 1]",
            });
        }
        if cap == 0 {
            return Err(LcsError::InvalidParameter {
                name: "cap",
                value: 0.0,
                expected: "a positive integer",
            });
        }
        Ok(Self { rate, cap, seed })
    }

    /// Rate `n^{-(1-δ)/2}` and cap `⌈n^{(1-δ)/2}⌉`.
    pub fn for_solution_bound(n: usize, delta: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(LcsError::InvalidParameter {
                name: "delta",
                value: delta,
                expected: "[0, 1]",
            });
        }
        let exponent = (1.0 - delta) / 2.0;
        let n = n.max(1);
        let rate = (n as f64).powf(-exponent).min(1.0);
        Self::new(rate, ceil_pow(n, exponent).max(1), seed)
    }
}

/// `T*[i][j]`: the smallest end position `k` in `t` such that the first `i`
/// characters of `s*` and `t[1..k]` share a subsequence of length `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedDpTable {
    rows: usize,
    cols: usize,
    cells: Vec<usize>,
}

impl TruncatedDpTable {
    pub fn fill(s_star: &SymbolString, t_index: &OccurrenceIndex, cap: usize) -> Self {
        let rows = s_star.len() + 1;
        let cols = cap + 1;
        let mut cells = vec![INF; rows * cols];
        for i in 0..rows {
            cells[i * cols] = 0;
        }
        for i in 1..rows {
            let c = s_star.at(i);
            let (above, here) = cells.split_at_mut(i * cols);
            let above = &above[(i - 1) * cols..];
            let here = &mut here[..cols];
            for j in 1..cols.min(i + 1) {
                let from_diag = match above[j - 1] {
                    INF => INF,
                    k => t_index.first_occurrence_after(c, k).unwrap_or(INF),
                };
                here[j] = above[j].min(from_diag);
            }
        }
        Self { rows, cols, cells }
    }

    /// `None` stands for infinity.
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        match self.cells[i * self.cols + j] {
            INF => None,
            k => Some(k),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Largest `j` with a finite entry in the last row.
    pub fn solution_length(&self) -> usize {
        let last = &self.cells[(self.rows - 1) * self.cols..];
        (0..self.cols).rev().find(|&j| last[j] != INF).unwrap_or(0)
    }

    /// Column-wise non-increasing, row-wise strictly increasing while finite,
    /// and the boundary row/column set.
    pub fn is_monotone(&self) -> bool {
        let at = |i: usize, j: usize| self.cells[i * self.cols + j];
        (0..self.rows).all(|i| at(i, 0) == 0)
            && (1..self.cols).all(|j| at(0, j) == INF)
            && (1..self.rows).all(|i| (0..self.cols).all(|j| at(i, j) <= at(i - 1, j)))
            && (0..self.rows).all(|i| (1..self.cols).all(|j| at(i, j) == INF || at(i, j - 1) < at(i, j)))
    }

    fn traceback(&self, s_star: &SymbolString) -> MatchChain {
        debug_assert_eq!(self.rows, s_star.len() + 1);
        let mut j = self.solution_length();
        let mut i = self.rows - 1;
        let mut pairs = Vec::with_capacity(j);
        while j > 0 {
            let here = self.cells[i * self.cols + j];
            if here == self.cells[(i - 1) * self.cols + j] {
                i -= 1;
            } else {
                pairs.push((i, here));
                i -= 1;
                j -= 1;
            }
        }
        pairs.reverse();
        MatchChain::new(pairs)
    }
}

/// Exact LCS of `(s_star, t)` when it is at most `cap`, otherwise a common
/// subsequence of length exactly `cap`. The chain is in `s_star` coordinates.
pub fn truncated_dp_lcs(s_star: &SymbolString, t: &SymbolString, cap: usize) -> MatchChain {
    let index = OccurrenceIndex::build(t);
    truncated_with_index(s_star, &index, cap)
}

fn truncated_with_index(s_star: &SymbolString, t_index: &OccurrenceIndex, cap: usize) -> MatchChain {
    let table = TruncatedDpTable::fill(s_star, t_index, cap.max(1));
    table.traceback(s_star)
}

/// Keeps each character independently with probability `rate`.
pub fn sample_characters(s: &SymbolString, rate: f64, seed: u64) -> Projection {
    let mut rng = stage_rng(seed);
    Projection::select(s, |_, _| rng.random_bool(rate))
}

fn sample_and_solve(s: &SymbolString, t: &SymbolString, params: SampleParams) -> MatchChain {
    let sampled = sample_characters(s, params.rate, params.seed);
    let index = OccurrenceIndex::build(t);
    truncated_with_index(&sampled.string, &index, params.cap).remap_first(&sampled)
}

/// Baseline √n sampler; identical in distribution (and bit-for-bit per seed)
/// to [`alg1_bounded_solution`] with `δ = 0`.
pub fn alg0_sqrt_baseline(s: &SymbolString, t: &SymbolString, seed: u64) -> MatchChain {
    alg1_bounded_solution(s, t, 0.0, seed).expect("delta = 0 is always in range")
}

/// Character sampler tuned for solutions of size at most `n^{1-δ}`.
pub fn alg1_bounded_solution(s: &SymbolString, t: &SymbolString, delta: f64, seed: u64) -> Result<MatchChain> {
    let n = s.len().max(t.len());
    let params = SampleParams::for_solution_bound(n, delta, seed)?;
    if n == 0 {
        return Ok(MatchChain::empty());
    }
    Ok(sample_and_solve(s, t, params))
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(LcsError::InvalidParameter {
            name: "p",
            value: p,
            expected: "(0, 1]",
        })
    }
}

/// Indices of `1..=total`, each kept independently with probability `p`,
/// generated by geometric gaps.
pub fn geometric_skip_indices(total: u64, p: f64, seed: u64) -> Result<Vec<u64>> {
    check_probability(p)?;
    let mut rng = stage_rng(seed);
    let gaps = Geometric::new(p).map_err(|_| LcsError::InvalidParameter {
        name: "p",
        value: p,
        expected: "(0, 1]",
    })?;
    let mut out = Vec::with_capacity(((total as f64) * p * 1.05) as usize + 16);
    let mut j: u64 = 0;
    loop {
        // Geometric counts failures before the first success.
        j = j.saturating_add(gaps.sample(&mut rng)).saturating_add(1);
        if j > total {
            break;
        }
        out.push(j);
    }
    Ok(out)
}

/// Random access to the `k`-th matching pair of `(s, t)` in lexicographic order,
/// without materializing the pairs.
pub struct MatchLocator<'a> {
    s: &'a SymbolString,
    t_index: &'a OccurrenceIndex,
    /// `prefix[i] = Σ_{l ≤ i} fr_{s_l}(t)`.
    prefix: Vec<u64>,
}

impl<'a> MatchLocator<'a> {
    pub fn new(s: &'a SymbolString, t_index: &'a OccurrenceIndex) -> Self {
        let mut prefix = Vec::with_capacity(s.len() + 1);
        prefix.push(0u64);
        let mut acc = 0u64;
        for &c in s.symbols() {
            acc += t_index.frequency(c) as u64;
            prefix.push(acc);
        }
        Self { s, t_index, prefix }
    }

    /// Total number of matching pairs `R`.
    pub fn total(&self) -> u64 {
        *self.prefix.last().unwrap_or(&0)
    }

    pub fn prefix_sums(&self) -> &[u64] {
        &self.prefix
    }

    pub fn locate(&self, k: u64) -> Result<(usize, usize)> {
        let total = self.total();
        if k == 0 || k > total {
            return Err(LcsError::RankOutOfRange { rank: k, total });
        }
        let i = self.prefix.partition_point(|&p| p < k);
        let offset = (k - self.prefix[i - 1]) as usize;
        let j = self.t_index.positions_of(self.s.at(i))[offset - 1];
        Ok((i, j))
    }
}

/// The `k`-th (1-based) matching pair of `(s, t)` in lexicographic order.
pub fn locate_kth_match(s: &SymbolString, t_index: &OccurrenceIndex, k: u64) -> Result<(usize, usize)> {
    MatchLocator::new(s, t_index).locate(k)
}

/// Keeps each matching pair with probability `p` and returns the longest
/// chain among the survivors.
pub fn alg6_sampled_pairs(s: &SymbolString, t: &SymbolString, p: f64, seed: u64) -> Result<MatchChain> {
    check_probability(p)?;
    let index = OccurrenceIndex::build(t);
    let locator = MatchLocator::new(s, &index);
    let ranks = geometric_skip_indices(locator.total(), p, seed)?;
    let pairs = ranks
        .into_iter()
        .map(|k| locator.locate(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(lis_pairs(&PairSequence::from_sorted(pairs)))
}

/// Sampling probability `min(1, n / R)` used by the frequency split.
pub fn pair_sampling_probability(n: usize, matching_pairs: u64) -> f64 {
    if matching_pairs == 0 {
        1.0
    } else {
        (n as f64 / matching_pairs as f64).min(1.0)
    }
}

/// [`alg6_sampled_pairs`] at `p = min(1, n / R)`.
pub fn alg6_auto(s: &SymbolString, t: &SymbolString, seed: u64) -> MatchChain {
    let n = s.len().max(t.len());
    let p = pair_sampling_probability(n, count_matching_pairs(s, t));
    alg6_sampled_pairs(s, t, p, derive_seed(seed, 0)).expect("probability in (0, 1]")
}
