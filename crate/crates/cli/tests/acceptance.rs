//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use lcs_approx::blockwise::alg4_with_shift;
use lcs_approx::exact::lcs_quadratic;
use lcs_approx::freqsplit::{frequency_threshold, split_by_frequency, Subinstance};
use lcs_approx::rng::{derive_seed, stage_rng};
use lcs_approx::sampling::ceil_pow;
use lcs_approx::{
    alg0_sqrt_baseline, alg1_bounded_solution, alg2_frequency_split, alg3_block_to_block, alg6_sampled_pairs,
    check_triple_product, dilworth_decompose, lcs_sparse, solve_exponent_lp, truncated_dp_lcs, validate_chain,
    ExactExponents, MatchChain, Permutation, PipelineParams, SymbolString,
};
use lcs_bench::bench::{loglog_slope, write_csv_file};
use lcs_bench::{generate, run_bench, Algorithm, BenchConfig, Family, InstanceSpec};
use num_rational::Rational64;
use rand::Rng;
use std::cell::Cell;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

thread_local! {
    static CHAINS_CHECKED: Cell<u64> = const { Cell::new(0) };
    static CHAINS_INVALID: Cell<u64> = const { Cell::new(0) };
}

/// Every chain produced outside the bench harness goes through here.
fn checked(s: &SymbolString, t: &SymbolString, chain: MatchChain) -> MatchChain {
    CHAINS_CHECKED.with(|c| c.set(c.get() + 1));
    if !validate_chain(s, t, &chain) {
        CHAINS_INVALID.with(|c| c.set(c.get() + 1));
    }
    chain
}

fn random_string(rng: &mut impl Rng, n: usize, m: u32) -> SymbolString {
    SymbolString::new((0..n).map(|_| rng.random_range(0..m)).collect(), m as usize).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = stage_rng(1);
    let mut mismatches = 0;
    for k in 0..1000 {
        let n = rng.random_range(1..=200);
        let m = [2, 4, 16, n as u32][k % 4];
        let s = random_string(&mut rng, n, m);
        let t = random_string(&mut rng, n, m);
        let sparse = checked(&s, &t, lcs_sparse(&s, &t));
        let quad = checked(&s, &t, lcs_quadratic(&s, &t));
        mismatches += usize::from(sparse.len() != quad.len());
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && within(Duration::from_secs(10), elapsed),
        format!("1000 instances, {mismatches} mismatches, {elapsed:.2?}"),
    )
}

fn exactness_degenerations() -> Outcome {
    let mut rng = stage_rng(2);
    let mut bad = 0;
    for seed in 0..300 {
        let n = rng.random_range(1..=120);
        let m = rng.random_range(1..=8);
        let s = random_string(&mut rng, n, m);
        let t = random_string(&mut rng, n, m);
        let exact = lcs_quadratic(&s, &t).len();
        let sampled = checked(&s, &t, alg6_sampled_pairs(&s, &t, 1.0, seed).unwrap());
        let truncated = checked(&s, &t, truncated_dp_lcs(&s, &t, n));
        bad += usize::from(sampled.len() != exact) + usize::from(truncated.len() != exact);
    }
    outcome(bad == 0, format!("300 instances, {bad} disagreements"))
}

fn validity() -> Outcome {
    let specs: Vec<InstanceSpec> = [200usize, 1000, 3000]
        .iter()
        .flat_map(|&n| {
            let m = ceil_pow(n, 0.5);
            [
                InstanceSpec::new(Family::Uniform, n, m, 5),
                InstanceSpec::new(Family::Uniform, n, 2, 6),
                InstanceSpec::planted(n, m, n / 3, 7),
                InstanceSpec::new(Family::BlockConstant, n, m, 8),
                InstanceSpec::new(Family::BlockPermutation, n, m, 9),
            ]
        })
        .collect();
    let config = BenchConfig {
        algorithms: Algorithm::ALL.to_vec(),
        trials: 3,
        alg6_p: 0.3,
        ..Default::default()
    };
    let bench = run_bench(&specs, &config);
    let checked = CHAINS_CHECKED.with(Cell::get);
    let invalid = CHAINS_INVALID.with(Cell::get);
    match bench {
        Ok(rows) => outcome(
            invalid == 0,
            format!(
                "{} bench chains validated in harness, {checked} suite chains with {invalid} invalid",
                rows.len()
            ),
        ),
        Err(e) => outcome(false, format!("bench aborted: {e}")),
    }
}

fn baseline_factor() -> Outcome {
    let start = Instant::now();
    let n = 10_000;
    let root = (n as f64).sqrt();
    let lengths: Vec<usize> = (0..200u64)
        .map(|seed| {
            let (s, t) = generate(&InstanceSpec::planted(n, ceil_pow(n, 0.5), n, seed)).unwrap();
            checked(&s, &t, alg0_sqrt_baseline(&s, &t, derive_seed(seed, 99))).len()
        })
        .collect();
    let mean = lengths.iter().sum::<usize>() as f64 / lengths.len() as f64;
    let min = *lengths.iter().min().unwrap();
    let elapsed = start.elapsed();
    outcome(
        mean >= 0.5 * root && min as f64 >= 0.2 * root && within(Duration::from_secs(60), elapsed),
        format!(
            "mean {mean:.1} (need ≥ {:.0}), min {min} (need ≥ {:.0}), {elapsed:.2?}",
            0.5 * root,
            0.2 * root
        ),
    )
}

fn alg1_bound() -> Outcome {
    let start = Instant::now();
    let n = 10_000;
    let planted = ceil_pow(n, 0.9);
    let lengths: Vec<usize> = (0..100u64)
        .map(|seed| {
            let (s, t) = generate(&InstanceSpec::planted(n, ceil_pow(n, 0.5), planted, seed)).unwrap();
            checked(
                &s,
                &t,
                alg1_bounded_solution(&s, &t, 0.1, derive_seed(seed, 98)).unwrap(),
            )
            .len()
        })
        .collect();
    let mean = lengths.iter().sum::<usize>() as f64 / lengths.len() as f64;
    let need = 0.25 * planted as f64 * (n as f64).powf(-0.45);
    let elapsed = start.elapsed();
    outcome(
        mean >= need && within(Duration::from_secs(60), elapsed),
        format!("planted {planted}, mean {mean:.1} (need ≥ {need:.1}), {elapsed:.2?}"),
    )
}

/// Shared instances for the frequency-split criteria.
fn split_instances() -> Vec<(SymbolString, SymbolString, u64)> {
    let mut rng = stage_rng(6);
    (0..100u64)
        .map(|seed| {
            let n = rng.random_range(50..3000);
            // Mix skewed and flat alphabets so both halves of the split are populated.
            let m = [2, 10, ceil_pow(n, 0.5) as u32, ceil_pow(n, 0.8) as u32, n as u32][seed as usize % 5];
            let mut s = random_string(&mut rng, n, m);
            if seed % 2 == 0 {
                let heavy: Vec<u32> = (0..n).map(|p| if p % 3 == 0 { 0 } else { s.symbols()[p] }).collect();
                s = SymbolString::new(heavy, m as usize).unwrap();
            }
            let t = random_string(&mut rng, n, m);
            (s, t, seed)
        })
        .collect()
}

fn frequency_split_structure() -> Outcome {
    let eta = PipelineParams::optimal(0).eta;
    let mut violations = 0;
    for (s, t, seed) in split_instances() {
        let out = alg2_frequency_split(&s, &t, eta, seed).unwrap();
        checked(&s, &t, out.best.clone());
        let n = s.len();
        if out.residual_alphabet() > ceil_pow(n, 0.5 + eta) + 1 {
            violations += 1;
        }
    }
    // a=0, b=1, c=2, d=3
    let t = SymbolString::from_symbols(vec![0, 0, 1, 2, 2, 3]);
    let split = split_by_frequency(&t, 1);
    let worked = split.low.string.symbols() == [1, 3] && split.high.string.symbols() == [0, 0, 2, 2];
    outcome(
        violations == 0 && worked,
        format!("100 instances, {violations} residual-alphabet violations; aabccd → (bd, aacc): {worked}"),
    )
}

fn matching_pair_bound() -> Outcome {
    let eta = PipelineParams::optimal(0).eta;
    let mut checked_subs = 0;
    let mut violations = 0;
    for (s, t, seed) in split_instances() {
        let n = s.len();
        let out = alg2_frequency_split(&s, &t, eta, seed).unwrap();
        assert_eq!(out.tau, frequency_threshold(n, eta));
        for r in out
            .subinstances
            .iter()
            .filter(|r| matches!(r.kind, Subinstance::LowLow | Subinstance::LowHigh))
        {
            checked_subs += 1;
            violations += usize::from(r.matching_pairs > (out.tau * n) as u64);
        }
    }
    outcome(
        violations == 0,
        format!("{checked_subs} (L,·) subinstances, {violations} with R > τn"),
    )
}

fn alg3_forced_exactness() -> Outcome {
    let mut wrong = Vec::new();
    for &n in &[1usize, 2, 10, 99, 1000, 12_345, 100_000] {
        for seed in 0..3u64 {
            let (s, t) = generate(&InstanceSpec::new(Family::BlockConstant, n, ceil_pow(n, 0.5), seed)).unwrap();
            let chain = checked(&s, &t, alg3_block_to_block(&s, &t, derive_seed(seed, 3)));
            if chain.len() != n {
                wrong.push((n, seed, chain.len()));
            }
        }
    }
    outcome(
        wrong.is_empty(),
        format!("n up to 100000, 3 seeds each, mismatches {wrong:?}"),
    )
}

fn alg4_shift_arithmetic() -> Outcome {
    let s = SymbolString::from_symbols(vec![0, 1, 2, 3]);
    let r1 = alg4_with_shift(&s, &s, 1, 0);
    let r2 = alg4_with_shift(&s, &s, 2, 0);
    checked(&s, &s, r1.chain.clone());
    checked(&s, &s, r2.chain.clone());
    outcome(
        r1.chain.is_empty() && r2.chain.len() == 4,
        format!("r=1 → {}, r=2 → {}", r1.chain.len(), r2.chain.len()),
    )
}

fn lp_optimum() -> Outcome {
    let e: ExactExponents = solve_exponent_lp();
    let exact = e.delta == Rational64::new(2, 489)
        && e.eta == Rational64::new(1, 489)
        && e.nu == Rational64::new(1, 2) - Rational64::new(1, 489);
    let zero = Rational64::from_integer(0);
    let tight = e.slacks().iter().all(|s| *s == zero) && e.is_feasible();
    let f = e.to_f64();
    let decimals = format!("{:.6}", f.delta) == "0.004090" && format!("{:.6}", f.eta) == "0.002045" && f.nu <= 0.497956;
    outcome(
        exact && tight && decimals,
        format!("δ = {}, η = {}, ν = {} ≈ {:.6}", e.delta, e.eta, e.nu, f.nu),
    )
}

fn triple_product() -> Outcome {
    let start = Instant::now();
    let mut rng = stage_rng(11);
    let mut violations = 0;
    for k in 0..10_000u64 {
        let m = rng.random_range(3..=256);
        let p: Vec<Permutation> = (0..3).map(|j| Permutation::random(m, derive_seed(k, j))).collect();
        violations += usize::from(!check_triple_product(&p[0], &p[1], &p[2]).unwrap().holds);
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && within(Duration::from_secs(120), elapsed),
        format!("10000 triples, {violations} violations, {elapsed:.2?}"),
    )
}

fn dilworth() -> Outcome {
    let mut rng = stage_rng(12);
    let (mut count_bad, mut level_bad) = (0, 0);
    for k in 0..2000u64 {
        let m = rng.random_range(1..=512);
        let p1 = Permutation::random(m, derive_seed(k, 100));
        let p2 = Permutation::random(m, derive_seed(k, 101));
        let d = dilworth_decompose(&p1, &p2).unwrap();
        count_bad += usize::from(d.level_count() != lcs_quadratic(p1.order(), p2.order()).len());
        level_bad += usize::from(!d.is_valid_for(&p1, &p2));
    }
    outcome(
        count_bad == 0 && level_bad == 0,
        format!("2000 pairs, {count_bad} level-count mismatches, {level_bad} invalid levels"),
    )
}

fn output_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn scaling() -> Outcome {
    let ns = [10_000usize, 40_000, 160_000];
    let specs: Vec<InstanceSpec> = ns
        .iter()
        .map(|&n| InstanceSpec::new(Family::Uniform, n, ceil_pow(n, 0.5), 13))
        .collect();
    let config = BenchConfig {
        algorithms: vec![Algorithm::Pipeline],
        trials: 5,
        exact_cap: 0,
        ..Default::default()
    };
    let rows = match run_bench(&specs, &config) {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("bench failed: {e}")),
    };
    let path = output_dir().join("scaling.csv");
    write_csv_file(&path, &rows).unwrap();
    // Fastest trial per size, to keep scheduler noise out of the fit.
    let points: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            let best = rows
                .iter()
                .filter(|r| r.n == n)
                .map(|r| r.wall_time)
                .fold(f64::INFINITY, f64::min);
            (n as f64, best)
        })
        .collect();
    match loglog_slope(&points) {
        Some(slope) => outcome(
            slope <= 1.35,
            format!("slope {slope:.3} (≤ 1.35), CSV at {}", path.display()),
        ),
        None => outcome(false, "no slope"),
    }
}

fn length_columns(csv: &str) -> Vec<String> {
    // Everything except wall_time, which is the one field allowed to vary.
    csv.lines()
        .map(|line| {
            let mut f: Vec<&str> = line.split(',').collect();
            f.remove(8);
            f.join(",")
        })
        .collect()
}

fn determinism() -> Outcome {
    let dir = output_dir();
    let runs: [&[&str]; 3] = [
        &["--family", "planted", "--n", "3000", "--planted-len", "900"],
        &["--family", "uniform", "--n", "2000", "5000", "--m", "12"],
        &["--family", "block_permutation", "--n", "4000"],
    ];
    let mut differing = Vec::new();
    for (k, extra) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.join(format!("determinism-{k}-{rep}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_lcs-bench"))
                .args(*extra)
                .args(["--seed", "424242", "--trials", "3", "--out"])
                .arg(&path)
                .args([
                    "--algo", "exact", "alg0", "alg1", "alg2", "alg3", "alg4", "combine", "pipeline",
                ])
                .stderr(Stdio::null())
                .status()
                .expect("binary runs");
            if !status.success() {
                return outcome(false, format!("run {k} exited with {status}"));
            }
            outputs.push(length_columns(&std::fs::read_to_string(&path).unwrap()));
        }
        if outputs[0] != outputs[1] {
            differing.push(k);
        }
    }
    outcome(
        differing.is_empty(),
        format!("3 commands run twice, differing: {differing:?}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 14] = [
        ("oracle equivalence", oracle_equivalence),
        ("exactness degenerations", exactness_degenerations),
        ("baseline factor", baseline_factor),
        ("alg1 bound", alg1_bound),
        ("frequency-split structure", frequency_split_structure),
        ("matching-pair bound", matching_pair_bound),
        ("alg3 forced exactness", alg3_forced_exactness),
        ("alg4 shift arithmetic", alg4_shift_arithmetic),
        ("LP optimum", lp_optimum),
        ("triple product", triple_product),
        ("dilworth decomposition", dilworth),
        ("near-linear scaling", scaling),
        ("determinism", determinism),
        // Last, so it also covers every chain checked above.
        ("validity", validity),
    ];
    let numbers = [1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 3];
    let mut results: Vec<(usize, &str, Outcome)> = criteria
        .iter()
        .zip(numbers)
        .map(|(&(name, f), k)| (k, name, f()))
        .collect();
    results.sort_by_key(|r| r.0);
    for (k, name, o) in &results {
        println!(
            "{} criterion {k:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("{} of 14 criteria passed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
