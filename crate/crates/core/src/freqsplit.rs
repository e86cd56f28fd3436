//! Low/high frequency split.
//!
//! A symbol is low frequency in a string when it occurs at most `τ` times
//! there. The three mixed subinstances (L,L), (L,H), (H,L) have few matching
//! pairs and are solved with the pair sampler; (H,H) is handed on as the
//! residual instance, whose alphabet is small.

use crate::error::{LcsError, Result};
use crate::rng::derive_seed;
use crate::sampling::{alg6_sampled_pairs, ceil_pow, pair_sampling_probability};
use crate::strings::{count_matching_pairs, FrequencyTable, MatchChain, Projection, SymbolString};

/// Characters of one string split by symbol frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySplit {
    pub low: Projection,
    pub high: Projection,
    pub tau: usize,
}

pub fn split_by_frequency(t: &SymbolString, tau: usize) -> FrequencySplit {
    let freq = FrequencyTable::build(t);
    FrequencySplit {
        low: Projection::select(t, |_, c| freq.count(c) <= tau),
        high: Projection::select(t, |_, c| freq.count(c) > tau),
        tau,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subinstance {
    LowLow,
    LowHigh,
    HighLow,
}

impl Subinstance {
    pub const ALL: [Subinstance; 3] = [Subinstance::LowLow, Subinstance::LowHigh, Subinstance::HighLow];

    pub fn name(self) -> &'static str {
        match self {
            Subinstance::LowLow => "LL",
            Subinstance::LowHigh => "LH",
            Subinstance::HighLow => "HL",
        }
    }
}

/// What happened on one mixed subinstance.
#[derive(Debug, Clone, PartialEq)]
pub struct SubinstanceReport {
    pub kind: Subinstance,
    pub len_s: usize,
    pub len_t: usize,
    pub matching_pairs: u64,
    pub probability: f64,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySplitOutcome {
    /// Longest of the three subinstance chains, in parent coordinates.
    pub best: MatchChain,
    pub best_kind: Option<Subinstance>,
    pub tau: usize,
    pub subinstances: Vec<SubinstanceReport>,
    /// High part of `s`, restricted to symbols that are high in both strings.
    pub residual_s: Projection,
    pub residual_t: Projection,
}

impl FrequencySplitOutcome {
    /// Distinct symbols across both residual strings.
    pub fn residual_alphabet(&self) -> usize {
        let mut syms: Vec<u32> = self
            .residual_s
            .string
            .symbols()
            .iter()
            .chain(self.residual_t.string.symbols())
            .copied()
            .collect();
        syms.sort_unstable();
        syms.dedup();
        syms.len()
    }
}

/// Threshold `⌈n^{1/2-η}⌉`.
pub fn frequency_threshold(n: usize, eta: f64) -> usize {
    ceil_pow(n.max(1), 0.5 - eta).max(1)
}

pub fn alg2_frequency_split(s: &SymbolString, t: &SymbolString, eta: f64, seed: u64) -> Result<FrequencySplitOutcome> {
    if !(-0.5..=0.5).contains(&eta) {
        return Err(LcsError::InvalidParameter {
            name: "eta",
            value: eta,
            expected: "[-1/2, 1/2]",
        });
    }
    let n = s.len().max(t.len());
    let tau = frequency_threshold(n, eta);
    let split_s = split_by_frequency(s, tau);
    let split_t = split_by_frequency(t, tau);

    let mut best = MatchChain::empty();
    let mut best_kind = None;
    let mut subinstances = Vec::with_capacity(3);
    for (label, kind) in Subinstance::ALL.into_iter().enumerate() {
        let (a, b) = match kind {
            Subinstance::LowLow => (&split_s.low, &split_t.low),
            Subinstance::LowHigh => (&split_s.low, &split_t.high),
            Subinstance::HighLow => (&split_s.high, &split_t.low),
        };
        let r = count_matching_pairs(&a.string, &b.string);
        let p = pair_sampling_probability(n, r);
        let chain = if r == 0 {
            MatchChain::empty()
        } else {
            alg6_sampled_pairs(&a.string, &b.string, p, derive_seed(seed, label as u64))?.remap(a, b)
        };
        subinstances.push(SubinstanceReport {
            kind,
            len_s: a.len(),
            len_t: b.len(),
            matching_pairs: r,
            probability: p,
            length: chain.len(),
        });
        if chain.len() > best.len() {
            best = chain;
            best_kind = Some(kind);
        }
    }

    // Symbols high in only one string cannot match inside (H,H).
    let high_in_s = FrequencyTable::with_capacity(&split_s.high.string, t.alphabet_size());
    let high_in_t = FrequencyTable::with_capacity(&split_t.high.string, s.alphabet_size());
    let residual_s = Projection::select(&split_s.high.string, |_, c| high_in_t.count(c) > 0).compose(&split_s.high);
    let residual_t = Projection::select(&split_t.high.string, |_, c| high_in_s.count(c) > 0).compose(&split_t.high);

    Ok(FrequencySplitOutcome {
        best,
        best_kind,
        tau,
        subinstances,
        residual_s,
        residual_t,
    })
}
