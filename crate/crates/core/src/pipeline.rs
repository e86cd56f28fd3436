//! End-to-end approximator and the exponent linear program.
//!
//! The approximation exponent is
//! `ν = min{1/2 − δ/2, 1/2 − η, 1/2 − 1/37 + (221/37)δ + (10/37)η}`
//! maximized over `0 ≤ δ ≤ 1`, `−1/2 ≤ η ≤ 1/2`. The maximum sits where all
//! three terms are equal, which is a 3×3 linear system solved here by
//! Cramer's rule over any [`Scalar`].

use crate::blockwise::alg5_combine;
use crate::error::{LcsError, Result};
use crate::exact::lcs_sparse_length;
use crate::freqsplit::alg2_frequency_split;
use crate::rng::derive_seed;
use crate::sampling::{alg0_sqrt_baseline, alg1_bounded_solution};
use crate::scalar::Scalar;
use crate::strings::{pad_pair, validate_chain, MatchChain, SymbolString};
use std::time::{Duration, Instant};

/// `(δ, η, ν)` over a scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponents<T> {
    pub delta: T,
    pub eta: T,
    pub nu: T,
}

impl<T: Scalar> Exponents<T> {
    /// The three upper bounds on `ν` at `(δ, η)`.
    pub fn nu_bounds(delta: &T, eta: &T) -> [T; 3] {
        let half = T::ratio(1, 2);
        [
            half.clone() - delta.clone() * half.clone(),
            half.clone() - eta.clone(),
            half - T::ratio(1, 37) + T::ratio(221, 37) * delta.clone() + T::ratio(10, 37) * eta.clone(),
        ]
    }

    /// Largest feasible `ν` at `(δ, η)`.
    pub fn objective(delta: &T, eta: &T) -> T {
        let [a, b, c] = Self::nu_bounds(delta, eta);
        let ab = if a < b { a } else { b };
        if ab < c {
            ab
        } else {
            c
        }
    }

    /// `bound − ν` for each of the three `ν` constraints.
    pub fn slacks(&self) -> [T; 3] {
        Self::nu_bounds(&self.delta, &self.eta).map(|b| b - self.nu.clone())
    }

    /// All five constraints, compared exactly in `T`.
    pub fn is_feasible(&self) -> bool {
        let zero = T::zero();
        let half = T::ratio(1, 2);
        let bounds =
            self.delta >= zero && self.delta <= T::one() && self.eta >= zero.clone() - half.clone() && self.eta <= half;
        bounds && self.slacks().iter().all(|s| *s >= zero)
    }

    pub fn to_f64(&self) -> Exponents<f64> {
        Exponents {
            delta: self.delta.to_f64_lossy(),
            eta: self.eta.to_f64_lossy(),
            nu: self.nu.to_f64_lossy(),
        }
    }
}

fn det3<T: Scalar>(m: &[[T; 3]; 3]) -> T {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone()
    };
    m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2) + m[0][2].clone() * minor(1, 2, 0, 1)
}

/// Maximizes `ν` by making the three `ν` constraints tight.
pub fn solve_exponent_lp<T: Scalar>() -> Exponents<T> {
    let r = T::ratio;
    // Unknowns (ν, δ, η); each row is `ν − (coefficients)·(δ, η) = constant`.
    let a = [
        [r(1, 1), r(1, 2), r(0, 1)],
        [r(1, 1), r(0, 1), r(1, 1)],
        [r(1, 1), r(-221, 37), r(-10, 37)],
    ];
    let b = [r(1, 2), r(1, 2), r(1, 2) - r(1, 37)];
    let d = det3(&a);
    let solve = |col: usize| {
        let mut m = a.clone();
        for row in 0..3 {
            m[row][col] = b[row].clone();
        }
        det3(&m) / d.clone()
    };
    Exponents {
        nu: solve(0),
        delta: solve(1),
        eta: solve(2),
    }
}

/// Exponents and the seed for one pipeline run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineParams {
    pub delta: f64,
    pub eta: f64,
    pub nu: f64,
    pub seed: u64,
}

impl PipelineParams {
    /// The LP optimum.
    pub fn optimal(seed: u64) -> Self {
        let e = solve_exponent_lp::<num_rational::Rational64>().to_f64();
        Self {
            delta: e.delta,
            eta: e.eta,
            nu: e.nu,
            seed,
        }
    }

    /// Custom `(δ, η)`; `ν` is set to the largest value the constraints allow.
    pub fn new(delta: f64, eta: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(LcsError::InvalidParameter {
                name: "delta",
                value: delta,
                expected: "[0, 1]",
            });
        }
        if !(-0.5..=0.5).contains(&eta) {
            return Err(LcsError::InvalidParameter {
                name: "eta",
                value: eta,
                expected: "[-1/2, 1/2]",
            });
        }
        Ok(Self {
            delta,
            eta,
            nu: Exponents::<f64>::objective(&delta, &eta),
            seed,
        })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self::optimal(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub name: &'static str,
    pub length: usize,
    pub runtime: Duration,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub candidates: Vec<Candidate>,
    pub chosen: MatchChain,
    pub chosen_name: &'static str,
    pub exact_length: Option<usize>,
}

impl PipelineReport {
    pub fn candidate(&self, name: &str) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.name == name)
    }

    pub fn total_runtime(&self) -> Duration {
        self.candidates.iter().map(|c| c.runtime).sum()
    }
}

/// Default length limit for the exact comparison.
pub const DEFAULT_EXACT_CAP: usize = 100_000;

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

/// Runs the baseline, the bounded-solution sampler, the frequency split and
/// the blockwise combination on the split's residual, and keeps the longest.
pub fn approximate_lcs(s: &SymbolString, t: &SymbolString, params: &PipelineParams) -> Result<PipelineReport> {
    let (s, t) = pad_pair(s, t);
    let seeds: [u64; 4] = std::array::from_fn(|k| derive_seed(params.seed, k as u64));
    let mut runs: Vec<(&'static str, MatchChain, Duration, u64)> = Vec::with_capacity(4);

    let (chain, time) = timed(|| alg0_sqrt_baseline(&s, &t, seeds[0]));
    runs.push(("alg0", chain, time, seeds[0]));

    let (chain, time) = timed(|| alg1_bounded_solution(&s, &t, params.delta, seeds[1]));
    runs.push(("alg1", chain?, time, seeds[1]));

    let (split, time) = timed(|| alg2_frequency_split(&s, &t, params.eta, seeds[2]));
    let split = split?;
    let (residual_s, residual_t) = (&split.residual_s, &split.residual_t);
    runs.push(("alg2", split.best.clone(), time, seeds[2]));

    let (chain, time) = timed(|| {
        // Blockwise algorithms assume equal lengths.
        let (rs, rt) = pad_pair(&residual_s.string, &residual_t.string);
        alg5_combine(&rs, &rt, seeds[3]).remap(residual_s, residual_t)
    });
    runs.push(("combine", chain, time, seeds[3]));

    debug_assert!(runs.iter().all(|(_, c, _, _)| validate_chain(&s, &t, c)));
    let candidates = runs
        .iter()
        .map(|(name, chain, runtime, seed)| Candidate {
            name,
            length: chain.len(),
            runtime: *runtime,
            seed: *seed,
        })
        .collect();
    // First longest wins, so ties go to the earlier (cheaper) candidate.
    let best = runs
        .iter()
        .enumerate()
        .max_by_key(|(k, r)| (r.1.len(), std::cmp::Reverse(*k)))
        .map(|(k, _)| k)
        .expect("four candidates");
    let (chosen_name, chosen, _, _) = runs.swap_remove(best);
    Ok(PipelineReport {
        candidates,
        chosen,
        chosen_name,
        exact_length: None,
    })
}

/// [`approximate_lcs`] plus the exact length when `max(|s|, |t|) ≤ exact_cap`.
pub fn approximate_lcs_with_exact(
    s: &SymbolString,
    t: &SymbolString,
    params: &PipelineParams,
    exact_cap: usize,
) -> Result<PipelineReport> {
    let mut report = approximate_lcs(s, t, params)?;
    if s.len().max(t.len()) <= exact_cap {
        report.exact_length = Some(lcs_sparse_length(s, t));
    }
    Ok(report)
}
