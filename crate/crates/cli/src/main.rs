use anyhow::Context;
use clap::Parser;
use lcs_approx::blockwise::ceil_sqrt;
use lcs_approx::rng::derive_seed;
use lcs_approx::PipelineParams;
use lcs_bench::bench::{bench_instance, loglog_slope, mean_time_by_n, write_csv, write_csv_file, InstanceInfo};
use lcs_bench::{generate, read_instance, run_bench, verify_suite, write_instance};
use lcs_bench::{Algorithm, BenchConfig, BenchError, Family, InstanceSpec};
use std::path::PathBuf;
use std::process::ExitCode;

/// Generate LCS instances, run the approximators and write one CSV row per
/// (instance, algorithm, trial).
#[derive(Debug, Parser)]
#[command(name = "lcs-bench", version)]
struct Args {
    /// uniform | planted | block_constant | block_permutation
    #[arg(long, default_value = "uniform")]
    family: Family,
    /// String length; repeat for a scaling run.
    #[arg(long = "n", default_value = "1000", num_args = 1..)]
    n: Vec<usize>,
    /// Alphabet size (default ⌈√n⌉).
    #[arg(long)]
    m: Option<usize>,
    /// Length of the shared subsequence for the planted family.
    #[arg(long)]
    planted_len: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// exact | alg0 | alg1 | alg2 | alg3 | alg4 | combine | pipeline | alg6
    #[arg(long = "algo", value_parser = parse_algorithm, default_value = "pipeline", num_args = 1..)]
    algo: Vec<Algorithm>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Compute exact lengths up to this n.
    #[arg(long, default_value_t = lcs_approx::pipeline::DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    /// CSV output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// δ for alg1 and the pipeline (default: LP optimum).
    #[arg(long)]
    params_delta: Option<f64>,
    /// η for alg2 and the pipeline (default: LP optimum).
    #[arg(long, allow_hyphen_values = true)]
    params_eta: Option<f64>,
    /// Pair-sampling probability for alg6.
    #[arg(long, default_value_t = 1.0)]
    alg6_p: f64,
    /// Read the instance from a file instead of generating it.
    #[arg(long, conflicts_with_all = ["planted_len", "m"])]
    input: Option<PathBuf>,
    /// Write the generated instance (first trial) to this file.
    #[arg(long)]
    write_instance: Option<PathBuf>,
    /// Run the permutation checkers and exit.
    #[arg(long)]
    verify: bool,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

enum Failure {
    Validation(anyhow::Error),
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<BenchError>() {
            Some(BenchError::Validation { .. }) => Failure::Validation(e),
            _ => Failure::Usage(e),
        }
    }
}

fn params(args: &Args) -> anyhow::Result<PipelineParams> {
    let opt = PipelineParams::optimal(args.seed);
    if args.params_delta.is_none() && args.params_eta.is_none() {
        return Ok(opt);
    }
    Ok(PipelineParams::new(
        args.params_delta.unwrap_or(opt.delta),
        args.params_eta.unwrap_or(opt.eta),
        args.seed,
    )?)
}

fn run_verify(seed: u64) -> Result<(), Failure> {
    let results = verify_suite::run_all(seed);
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({} cases, {} failures)", r.name, r.cases, r.failures);
    }
    if results.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Validation(anyhow::anyhow!("verification failed")))
    }
}

fn run(args: Args) -> Result<(), Failure> {
    if args.verify {
        return run_verify(args.seed);
    }
    let config = BenchConfig {
        algorithms: args.algo.clone(),
        trials: args.trials as usize,
        exact_cap: args.exact_cap,
        params: params(&args)?,
        alg6_p: args.alg6_p,
    };

    let rows = if let Some(path) = &args.input {
        let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let (s, t) = read_instance(std::io::BufReader::new(file)).map_err(anyhow::Error::from)?;
        let name = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut rows = Vec::new();
        let mut per_trial = Vec::new();
        for trial in 0..config.trials {
            let info = InstanceInfo {
                id: format!("{name}-t{trial}"),
                family: "file".into(),
                m: s.alphabet_size().max(t.alphabet_size()),
                seed: derive_seed(args.seed, trial as u64),
            };
            per_trial.push(bench_instance(&info, &s, &t, &config).map_err(anyhow::Error::from)?);
        }
        for k in 0..config.algorithms.len() {
            rows.extend(per_trial.iter().map(|r| r[k].clone()));
        }
        rows
    } else {
        let specs: Vec<InstanceSpec> = args
            .n
            .iter()
            .map(|&n| InstanceSpec {
                family: args.family,
                n,
                m: args.m.unwrap_or_else(|| ceil_sqrt(n).max(1)),
                planted_len: args.planted_len,
                seed: args.seed,
            })
            .collect();
        for spec in &specs {
            spec.validate().map_err(anyhow::Error::from)?;
        }
        if let Some(path) = &args.write_instance {
            if specs.len() != 1 {
                return Err(Failure::Usage(anyhow::anyhow!("--write-instance needs a single --n")));
            }
            let (s, t) = generate(&lcs_bench::bench::trial_spec(&specs[0], 0)).map_err(anyhow::Error::from)?;
            let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_instance(std::io::BufWriter::new(file), &s, &t).map_err(anyhow::Error::from)?;
        }
        run_bench(&specs, &config).map_err(anyhow::Error::from)?
    };

    match &args.out {
        Some(path) => write_csv_file(path, &rows).map_err(anyhow::Error::from)?,
        None => write_csv(std::io::stdout().lock(), &rows).map_err(anyhow::Error::from)?,
    }

    if config.algorithms.contains(&Algorithm::Pipeline) {
        let points = mean_time_by_n(&rows, Algorithm::Pipeline);
        if let Some(slope) = loglog_slope(&points) {
            eprintln!("pipeline wall-time log-log slope: {slope:.3}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
