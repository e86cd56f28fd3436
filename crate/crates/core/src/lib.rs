//! Approximate longest common subsequence in near-linear time.
//!
//! Strings are sequences of integer symbol ids ([`SymbolString`]). The exact
//! solvers in [`exact`] serve as oracles; [`sampling`], [`freqsplit`] and
//! [`blockwise`] hold the randomized approximations, and [`pipeline`] wires
//! them into a single best-of run. [`verify`] has the permutation checkers.
//!
//! Every randomized function takes an explicit seed and is deterministic
//! given its inputs and that seed.

pub mod blockwise;
pub mod error;
pub mod exact;
pub mod freqsplit;
pub mod pipeline;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod strings;
pub mod verify;

pub use blockwise::{
    alg3_block_to_block, alg4_random_shift, alg4_with_shift, alg5_combine, decompose_blocks,
    reduce_to_semi_permutation, BlockDecomposition, SemiPermutation,
};
pub use error::{LcsError, Result};
pub use exact::{lcs_quadratic, lcs_sparse, lcs_sparse_length, lis_pairs, PairSequence};
pub use freqsplit::{alg2_frequency_split, split_by_frequency, FrequencySplit, FrequencySplitOutcome};
pub use pipeline::{
    approximate_lcs, approximate_lcs_with_exact, solve_exponent_lp, Exponents, PipelineParams, PipelineReport,
};
pub use sampling::{
    alg0_sqrt_baseline, alg1_bounded_solution, alg6_auto, alg6_sampled_pairs, geometric_skip_indices, locate_kth_match,
    truncated_dp_lcs, SampleParams,
};
pub use scalar::Scalar;
pub use strings::{
    count_matching_pairs, pad_pair, validate_chain, FrequencyTable, MatchChain, OccurrenceIndex, Projection, Symbol,
    SymbolString,
};
pub use verify::{
    check_triple_product, dilworth_decompose, mask_experiment, refine_to_complete, AntichainDecomposition, Permutation,
};

/// Exponents in exact rational arithmetic.
pub type ExactExponents = Exponents<num_rational::Rational64>;
/// Exponents in floating point.
pub type FloatExponents = Exponents<f64>;
