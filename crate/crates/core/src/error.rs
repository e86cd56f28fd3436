use thiserror::Error;

/// Errors reported by the approximators, oracles and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LcsError {
    #[error("symbol {symbol} at position {position} is outside the alphabet of size {alphabet_size}")]
    SymbolOutOfRange {
        symbol: u32,
        position: usize,
        alphabet_size: usize,
    },
    #[error("parameter `{name}` = {value} is outside {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("match rank {rank} is outside 1..={total}")]
    RankOutOfRange { rank: u64, total: u64 },
    #[error("pair sequence is not sorted at index {index}")]
    UnsortedPairs { index: usize },
    #[error("not a permutation of 0..{size}: {reason}")]
    NotAPermutation { size: usize, reason: String },
    #[error("permutations are over different symbol counts ({left} vs {right})")]
    MismatchedPermutations { left: usize, right: usize },
    #[error("block {index} is not a semi-permutation over the working symbol set")]
    InvalidBlock { index: usize },
}

pub type Result<T> = std::result::Result<T, LcsError>;
