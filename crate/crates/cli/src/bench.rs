//! Benchmark harness: runs algorithms over generated instances and collects
//! one CSV row per `(instance, algorithm, trial)`.

use crate::instance::{generate, InstanceError, InstanceSpec};
use lcs_approx::rng::derive_seed;
use lcs_approx::{
    alg0_sqrt_baseline, alg1_bounded_solution, alg2_frequency_split, alg3_block_to_block, alg4_random_shift,
    alg5_combine, alg6_sampled_pairs, approximate_lcs, lcs_sparse, lcs_sparse_length, pad_pair, validate_chain,
    LcsError, MatchChain, PipelineParams, SymbolString,
};
use serde::Serialize;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Algorithm(#[from] LcsError),
    #[error("{algorithm} returned an invalid chain on {instance} (algorithm seed {seed})")]
    Validation {
        algorithm: String,
        instance: String,
        seed: u64,
    },
    #[error("cannot write results: {0}")]
    Output(String),
}

impl From<csv::Error> for BenchError {
    fn from(e: csv::Error) -> Self {
        BenchError::Output(e.to_string())
    }
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        BenchError::Output(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Exact,
    Alg0,
    Alg1,
    Alg2,
    Alg3,
    Alg4,
    Combine,
    Pipeline,
    Alg6,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Exact,
        Algorithm::Alg0,
        Algorithm::Alg1,
        Algorithm::Alg2,
        Algorithm::Alg3,
        Algorithm::Alg4,
        Algorithm::Combine,
        Algorithm::Pipeline,
        Algorithm::Alg6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Alg0 => "alg0",
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg3 => "alg3",
            Algorithm::Alg4 => "alg4",
            Algorithm::Combine => "combine",
            Algorithm::Pipeline => "pipeline",
            Algorithm::Alg6 => "alg6",
        }
    }

    fn label(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub length: usize,
    pub exact_length: Option<usize>,
    pub ratio: Option<f64>,
    /// Seconds.
    pub wall_time: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    /// Exact lengths are computed for `n ≤ exact_cap`.
    pub exact_cap: usize,
    pub params: PipelineParams,
    /// Pair-sampling probability for `alg6`.
    pub alg6_p: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Pipeline],
            trials: 1,
            exact_cap: lcs_approx::pipeline::DEFAULT_EXACT_CAP,
            params: PipelineParams::optimal(0),
            alg6_p: 1.0,
        }
    }
}

/// Runs one algorithm and times only the call itself.
pub fn run_algorithm(
    algorithm: Algorithm,
    s: &SymbolString,
    t: &SymbolString,
    config: &BenchConfig,
    seed: u64,
) -> Result<(MatchChain, Duration), LcsError> {
    let start = Instant::now();
    let chain = match algorithm {
        Algorithm::Exact => lcs_sparse(s, t),
        Algorithm::Alg0 => alg0_sqrt_baseline(s, t, seed),
        Algorithm::Alg1 => alg1_bounded_solution(s, t, config.params.delta, seed)?,
        Algorithm::Alg2 => alg2_frequency_split(s, t, config.params.eta, seed)?.best,
        Algorithm::Alg3 => alg3_block_to_block(s, t, seed),
        Algorithm::Alg4 => alg4_random_shift(s, t, seed),
        Algorithm::Combine => {
            let (s, t) = pad_pair(s, t);
            alg5_combine(&s, &t, seed)
        }
        Algorithm::Pipeline => approximate_lcs(s, t, &config.params.with_seed(seed))?.chosen,
        Algorithm::Alg6 => alg6_sampled_pairs(s, t, config.alg6_p, seed)?,
    };
    Ok((chain, start.elapsed()))
}

/// Instance seed for trial `trial` of `spec`.
pub fn trial_spec(spec: &InstanceSpec, trial: usize) -> InstanceSpec {
    InstanceSpec {
        seed: derive_seed(spec.seed, trial as u64),
        ..spec.clone()
    }
}

/// Where an instance came from, for the CSV row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceInfo {
    pub id: String,
    pub family: String,
    pub m: usize,
    /// Algorithm seeds are derived from this.
    pub seed: u64,
}

impl InstanceInfo {
    pub fn from_spec(id: String, spec: &InstanceSpec) -> Self {
        Self {
            id,
            family: spec.family.to_string(),
            m: spec.m,
            seed: spec.seed,
        }
    }
}

/// Rows for the given instance pair, in algorithm order.
pub fn bench_instance(
    info: &InstanceInfo,
    s: &SymbolString,
    t: &SymbolString,
    config: &BenchConfig,
) -> Result<Vec<BenchRow>, BenchError> {
    let n = s.len().max(t.len());
    let exact = (n <= config.exact_cap).then(|| lcs_sparse_length(s, t));
    let mut rows = Vec::with_capacity(config.algorithms.len());
    for &algorithm in &config.algorithms {
        let seed = derive_seed(info.seed, algorithm.label());
        let (chain, time) = run_algorithm(algorithm, s, t, config, seed)?;
        if !validate_chain(s, t, &chain) {
            return Err(BenchError::Validation {
                algorithm: algorithm.to_string(),
                instance: info.id.clone(),
                seed,
            });
        }
        rows.push(BenchRow {
            instance_id: info.id.clone(),
            family: info.family.clone(),
            n,
            m: info.m,
            algorithm: algorithm.to_string(),
            length: chain.len(),
            exact_length: exact,
            ratio: exact.map(|e| e as f64 / chain.len().max(1) as f64),
            wall_time: time.as_secs_f64(),
            seed,
        });
    }
    Ok(rows)
}

/// Every `(spec, algorithm, trial)`, sorted in that order.
pub fn run_bench(specs: &[InstanceSpec], config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if config.trials == 0 {
        return Err(BenchError::Instance(InstanceError::InvalidSpec(
            "trials must be at least 1".into(),
        )));
    }
    let mut rows = Vec::new();
    for spec in specs {
        let mut per_trial = Vec::with_capacity(config.trials);
        for trial in 0..config.trials {
            let tspec = trial_spec(spec, trial);
            let (s, t) = generate(&tspec)?;
            let info = InstanceInfo::from_spec(format!("{}-t{trial}", spec.label()), &tspec);
            per_trial.push(bench_instance(&info, &s, &t, config)?);
        }
        for k in 0..config.algorithms.len() {
            rows.extend(per_trial.iter().map(|r| r[k].clone()));
        }
    }
    Ok(rows)
}

pub fn write_csv(out: impl Write, rows: &[BenchRow]) -> Result<(), BenchError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    if rows.is_empty() {
        writer.write_record([
            "instance_id",
            "family",
            "n",
            "m",
            "algorithm",
            "length",
            "exact_length",
            "ratio",
            "wall_time",
            "seed",
        ])?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[BenchRow]) -> Result<(), BenchError> {
    let file = std::fs::File::create(path).map_err(|e| BenchError::Output(format!("{}: {e}", path.display())))?;
    write_csv(std::io::BufWriter::new(file), rows)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Mean `wall_time` per `n` for one algorithm, sorted by `n`.
pub fn mean_time_by_n(rows: &[BenchRow], algorithm: Algorithm) -> Vec<(f64, f64)> {
    let mut by_n: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for row in rows.iter().filter(|r| r.algorithm == algorithm.name()) {
        let e = by_n.entry(row.n).or_default();
        e.0 += row.wall_time;
        e.1 += 1;
    }
    by_n.into_iter()
        .map(|(n, (sum, k))| (n as f64, sum / k as f64))
        .collect()
}
