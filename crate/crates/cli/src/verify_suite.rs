//! The combinatorial checks behind `--verify`.

use lcs_approx::blockwise::{decompose_blocks, reduce_blocks};
use lcs_approx::exact::lcs_quadratic;
use lcs_approx::rng::{derive_seed, stage_rng};
use lcs_approx::verify::default_sample_count;
use lcs_approx::{check_triple_product, dilworth_decompose, refine_to_complete, Permutation, SymbolString};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `lcs(π₁,π₂)·lcs(π₂,π₃)·lcs(π₃,π₁) ≥ m` over random triples with `m ∈ 3..=max_m`.
pub fn triple_product_suite(cases: usize, max_m: usize, seed: u64) -> SuiteResult {
    let mut rng = stage_rng(derive_seed(seed, 0));
    let failures = (0..cases)
        .filter(|&k| {
            let m = rng.random_range(3..=max_m);
            let base = derive_seed(seed, 1_000 + k as u64);
            let p: Vec<Permutation> = (0..3).map(|j| Permutation::random(m, derive_seed(base, j))).collect();
            !check_triple_product(&p[0], &p[1], &p[2]).expect("same size").holds
        })
        .count();
    SuiteResult {
        name: "triple-product",
        cases,
        failures,
    }
}

/// Level count equals the exact LCS and every level is reverse-ordered.
pub fn dilworth_suite(cases: usize, max_m: usize, seed: u64) -> SuiteResult {
    let mut rng = stage_rng(derive_seed(seed, 2));
    let failures = (0..cases)
        .filter(|&k| {
            let m = rng.random_range(1..=max_m);
            let base = derive_seed(seed, 2_000 + k as u64);
            let (p1, p2) = (
                Permutation::random(m, derive_seed(base, 0)),
                Permutation::random(m, derive_seed(base, 1)),
            );
            let d = dilworth_decompose(&p1, &p2).expect("same size");
            d.level_count() != lcs_quadratic(p1.order(), p2.order()).len() || !d.is_valid_for(&p1, &p2)
        })
        .count();
    SuiteResult {
        name: "dilworth",
        cases,
        failures,
    }
}

/// Completed blocks are permutations of the working alphabet that start with
/// the kept sequence.
pub fn refine_suite(cases: usize, seed: u64) -> SuiteResult {
    let mut rng = stage_rng(derive_seed(seed, 3));
    let failures = (0..cases)
        .filter(|&k| {
            let n = rng.random_range(1..400);
            let m = rng.random_range(1..40u32);
            let s = SymbolString::new((0..n).map(|_| rng.random_range(0..m)).collect(), m as usize).expect("below m");
            let blocks = reduce_blocks(&decompose_blocks(&s), derive_seed(seed, 3_000 + k as u64));
            let universe: Vec<u32> = (0..m).collect();
            let refined = refine_to_complete(
                &blocks,
                &universe,
                default_sample_count(m as usize),
                derive_seed(seed, k as u64),
            )
            .expect("blocks over the universe");
            !blocks.iter().enumerate().all(|(b, semi)| {
                let full = refined.completed_symbols(b);
                Permutation::new(full.clone()).is_ok() && full[..semi.kept.len()] == *semi.symbols()
            })
        })
        .count();
    SuiteResult {
        name: "refine",
        cases,
        failures,
    }
}

pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    vec![
        triple_product_suite(10_000, 256, seed),
        dilworth_suite(2_000, 512, seed),
        refine_suite(500, seed),
    ]
}
