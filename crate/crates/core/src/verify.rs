//! Checkers for the permutation combinatorics behind the blockwise analysis.
//!
//! * [`dilworth_decompose`] splits the positions of `π̄` into reverse-ordered
//!   levels; the number of levels equals `lcs(π, π̄)`.
//! * [`check_triple_product`] tests `lcs(π₁,π₂)·lcs(π₂,π₃)·lcs(π₃,π₁) ≥ m`.
//! * [`refine_to_complete`] and [`mask_experiment`] complete semi-permutations
//!   with a shared mask and measure pairwise block LCS.

use crate::blockwise::{decompose_blocks, reduce_blocks, SemiPermutation};
use crate::error::{LcsError, Result};
use crate::exact::lcs_sparse;
use crate::rng::{derive_seed, stage_rng};
use crate::strings::{Symbol, SymbolString};
use rand::seq::SliceRandom;

/// An ordering of the ids `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: SymbolString,
}

impl Permutation {
    pub fn new(ids: Vec<Symbol>) -> Result<Self> {
        let m = ids.len();
        let mut seen = vec![false; m];
        for &c in &ids {
            let slot = seen.get_mut(c as usize).ok_or_else(|| LcsError::NotAPermutation {
                size: m,
                reason: format!("id {c} is out of range"),
            })?;
            if *slot {
                return Err(LcsError::NotAPermutation {
                    size: m,
                    reason: format!("id {c} repeats"),
                });
            }
            *slot = true;
        }
        Ok(Self {
            order: SymbolString::from_parts(ids, m),
        })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            order: SymbolString::from_parts((0..m as Symbol).collect(), m),
        }
    }

    pub fn reverse(m: usize) -> Self {
        Self {
            order: SymbolString::from_parts((0..m as Symbol).rev().collect(), m),
        }
    }

    pub fn random(m: usize, seed: u64) -> Self {
        let mut ids: Vec<Symbol> = (0..m as Symbol).collect();
        ids.shuffle(&mut stage_rng(seed));
        Self {
            order: SymbolString::from_parts(ids, m),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &SymbolString {
        &self.order
    }

    pub fn ids(&self) -> &[Symbol] {
        self.order.symbols()
    }

    /// `inverse()[c]` is the 1-based position of id `c`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len()];
        for (p, &c) in self.ids().iter().enumerate() {
            inv[c as usize] = p + 1;
        }
        inv
    }
}

fn same_size(p1: &Permutation, p2: &Permutation) -> Result<()> {
    if p1.len() == p2.len() {
        Ok(())
    } else {
        Err(LcsError::MismatchedPermutations {
            left: p1.len(),
            right: p2.len(),
        })
    }
}

/// Levels of positions of `p2`; inside a level the `p1`-positions decrease.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntichainDecomposition {
    /// 1-based positions in `p2`, increasing within each level.
    pub levels: Vec<Vec<usize>>,
}

impl AntichainDecomposition {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Checks the partition and the reverse order of every level.
    pub fn is_valid_for(&self, p1: &Permutation, p2: &Permutation) -> bool {
        let m = p2.len();
        let mut covered = vec![false; m + 1];
        for level in &self.levels {
            for &q in level {
                if q == 0 || q > m || std::mem::replace(&mut covered[q], true) {
                    return false;
                }
            }
        }
        if !covered[1..].iter().all(|&c| c) {
            return false;
        }
        let pos1 = p1.inverse();
        self.levels.iter().all(|level| {
            level
                .windows(2)
                .all(|w| w[0] < w[1] && pos1[p2.order().at(w[0]) as usize] > pos1[p2.order().at(w[1]) as usize])
        })
    }
}

/// Patience levels: each position of `p2` goes to the level equal to the
/// longest common chain ending there.
pub fn dilworth_decompose(p1: &Permutation, p2: &Permutation) -> Result<AntichainDecomposition> {
    same_size(p1, p2)?;
    let pos1 = p1.inverse();
    let mut tails: Vec<usize> = Vec::new();
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for (q, &c) in p2.ids().iter().enumerate() {
        let x = pos1[c as usize];
        let k = tails.partition_point(|&v| v < x);
        if k == tails.len() {
            tails.push(x);
            levels.push(vec![q + 1]);
        } else {
            tails[k] = x;
            levels[k].push(q + 1);
        }
    }
    Ok(AntichainDecomposition { levels })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleProduct {
    /// `lcs(p1,p2)`, `lcs(p2,p3)`, `lcs(p3,p1)`.
    pub lengths: [usize; 3],
    pub product: u128,
    pub holds: bool,
}

pub fn check_triple_product(p1: &Permutation, p2: &Permutation, p3: &Permutation) -> Result<TripleProduct> {
    same_size(p1, p2)?;
    same_size(p2, p3)?;
    let lcs = |a: &Permutation, b: &Permutation| lcs_sparse(a.order(), b.order()).len();
    let lengths = [lcs(p1, p2), lcs(p2, p3), lcs(p3, p1)];
    let product = lengths.iter().map(|&x| x as u128).product();
    Ok(TripleProduct {
        lengths,
        product,
        holds: product >= p1.len() as u128,
    })
}

/// Completed blocks and the mask that ordered their missing symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    /// Sorted working alphabet; permutation id `k` stands for `symbol_set[k]`.
    pub symbol_set: Vec<Symbol>,
    pub mask: Vec<Symbol>,
    pub completed: Vec<Permutation>,
}

impl Refinement {
    /// Completed block `k` in original symbol ids.
    pub fn completed_symbols(&self, k: usize) -> Vec<Symbol> {
        self.completed[k]
            .ids()
            .iter()
            .map(|&r| self.symbol_set[r as usize])
            .collect()
    }
}

/// `⌈4·log₂ m⌉`, at least 1.
pub fn default_sample_count(m: usize) -> usize {
    if m <= 1 {
        1
    } else {
        ((m as f64).log2() * 4.0).ceil() as usize
    }
}

/// Builds a mask from `sample_count` randomly chosen blocks (unseen symbols in
/// in-block order, leftovers by ascending id) and appends every block's
/// missing symbols in mask order.
pub fn refine_to_complete(
    blocks: &[SemiPermutation],
    symbol_set: &[Symbol],
    sample_count: usize,
    seed: u64,
) -> Result<Refinement> {
    if sample_count == 0 {
        return Err(LcsError::InvalidParameter {
            name: "sample_count",
            value: 0.0,
            expected: "at least 1",
        });
    }
    if blocks.is_empty() {
        return Err(LcsError::InvalidBlock { index: 0 });
    }
    let mut set = symbol_set.to_vec();
    set.sort_unstable();
    set.dedup();
    let m = set.len();
    let rank = |c: Symbol| set.binary_search(&c).ok();

    let mut ranked: Vec<Vec<Symbol>> = Vec::with_capacity(blocks.len());
    for (k, block) in blocks.iter().enumerate() {
        let mut ids = Vec::with_capacity(block.kept.len());
        for &c in block.symbols() {
            ids.push(rank(c).ok_or(LcsError::InvalidBlock { index: k })? as Symbol);
        }
        ranked.push(ids);
    }

    let mut in_mask = vec![false; m];
    let mut mask: Vec<Symbol> = Vec::with_capacity(m);
    let mut rng = stage_rng(seed);
    let picks = rand::seq::index::sample(&mut rng, blocks.len(), sample_count.min(blocks.len()));
    for b in picks.iter() {
        for &r in &ranked[b] {
            if !std::mem::replace(&mut in_mask[r as usize], true) {
                mask.push(r);
            }
        }
    }
    mask.extend((0..m as Symbol).filter(|&r| !in_mask[r as usize]));

    let mut present = vec![false; m];
    let mut completed = Vec::with_capacity(blocks.len());
    for (k, ids) in ranked.into_iter().enumerate() {
        for &r in &ids {
            if std::mem::replace(&mut present[r as usize], true) {
                return Err(LcsError::InvalidBlock { index: k });
            }
        }
        let mut full = ids.clone();
        full.extend(mask.iter().copied().filter(|&r| !present[r as usize]));
        for &r in &ids {
            present[r as usize] = false;
        }
        completed.push(Permutation {
            order: SymbolString::from_parts(full, m),
        });
    }
    Ok(Refinement {
        mask: mask.iter().map(|&r| set[r as usize]).collect(),
        symbol_set: set,
        completed,
    })
}

/// Measurements from one mask run.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskReport {
    pub blocks: usize,
    /// Size of the working alphabet.
    pub m: usize,
    pub mask: Vec<Symbol>,
    /// `cross[i][j] = lcs(ŝ_i, t̂_j)` over completed blocks.
    pub cross: Vec<Vec<usize>>,
    /// `within[i][j] = lcs(ŝ_i, ŝ_j)`.
    pub within: Vec<Vec<usize>>,
    pub mean_cross: f64,
    pub mean_diagonal: f64,
    /// Smallest over block triples of the largest pairwise LCS in the triple.
    pub min_triple_max: Option<usize>,
}

fn lcs_matrix(a: &[Permutation], b: &[Permutation]) -> Vec<Vec<usize>> {
    a.iter()
        .map(|x| b.iter().map(|y| lcs_sparse(x.order(), y.order()).len()).collect())
        .collect()
}

fn min_triple_max(w: &[Vec<usize>]) -> Option<usize> {
    let b = w.len();
    let mut best: Option<usize> = None;
    for i in 0..b {
        for j in i + 1..b {
            for k in j + 1..b {
                let v = w[i][j].max(w[j][k]).max(w[k][i]);
                best = Some(best.map_or(v, |x| x.min(v)));
            }
        }
    }
    best
}

pub fn mask_experiment(s: &SymbolString, t: &SymbolString, seed: u64) -> Result<MaskReport> {
    if s.len() != t.len() {
        return Err(LcsError::InvalidParameter {
            name: "length",
            value: t.len() as f64,
            expected: "|s| = |t|",
        });
    }
    let (sb, tb) = (decompose_blocks(s), decompose_blocks(t));
    let mut semis = reduce_blocks(&sb, derive_seed(seed, 0));
    let blocks = semis.len();
    semis.extend(reduce_blocks(&tb, derive_seed(seed, 1)));

    let mut symbol_set: Vec<Symbol> = s.symbols().iter().chain(t.symbols()).copied().collect();
    symbol_set.sort_unstable();
    symbol_set.dedup();
    let m = symbol_set.len();

    if blocks == 0 {
        return Ok(MaskReport {
            blocks: 0,
            m,
            mask: Vec::new(),
            cross: Vec::new(),
            within: Vec::new(),
            mean_cross: 0.0,
            mean_diagonal: 0.0,
            min_triple_max: None,
        });
    }
    let refined = refine_to_complete(&semis, &symbol_set, default_sample_count(m), derive_seed(seed, 2))?;
    let (ours, theirs) = refined.completed.split_at(blocks);
    let cross = lcs_matrix(ours, theirs);
    let within = lcs_matrix(ours, ours);
    let total: usize = cross.iter().flatten().sum();
    let diagonal: usize = (0..blocks).map(|i| cross[i][i]).sum();
    Ok(MaskReport {
        blocks,
        m,
        mask: refined.mask,
        mean_cross: total as f64 / (blocks * blocks) as f64,
        mean_diagonal: diagonal as f64 / blocks as f64,
        min_triple_max: min_triple_max(&within),
        cross,
        within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::lcs_quadratic;
    use crate::strings::Projection;
    use proptest::prelude::*;
    use rand::Rng;

    fn perm(ids: &[u32]) -> Permutation {
        Permutation::new(ids.to_vec()).unwrap()
    }

    fn semi(ids: &[u32]) -> SemiPermutation {
        let s = SymbolString::from_symbols(ids.to_vec());
        SemiPermutation {
            kept: Projection::identity(&s),
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
        let p = Permutation::random(50, 3);
        assert!(Permutation::new(p.ids().to_vec()).is_ok());
        assert_eq!(perm(&[2, 0, 1]).inverse(), vec![2, 3, 1]);
    }

    #[test]
    fn dilworth_examples() {
        let d = dilworth_decompose(&Permutation::identity(4), &Permutation::reverse(4)).unwrap();
        assert_eq!(d.levels, vec![vec![1, 2, 3, 4]]);
        let d = dilworth_decompose(&Permutation::identity(4), &perm(&[1, 0, 3, 2])).unwrap();
        assert_eq!(d.levels, vec![vec![1, 2], vec![3, 4]]);
        let d = dilworth_decompose(&Permutation::identity(6), &Permutation::identity(6)).unwrap();
        assert_eq!(d.level_count(), 6);
        assert!(d.levels.iter().all(|l| l.len() == 1));
        assert!(dilworth_decompose(&Permutation::identity(3), &Permutation::identity(4)).is_err());
    }

    #[test]
    fn dilworth_matches_quadratic_oracle() {
        let mut rng = stage_rng(43);
        for seed in 0..300 {
            let m = rng.random_range(1..=200);
            let p1 = Permutation::random(m, 2 * seed);
            let p2 = Permutation::random(m, 2 * seed + 1);
            let d = dilworth_decompose(&p1, &p2).unwrap();
            assert_eq!(d.level_count(), lcs_quadratic(p1.order(), p2.order()).len());
            assert!(d.is_valid_for(&p1, &p2));
            // Pairwise reverse order, checked directly.
            let pos1 = p1.inverse();
            for level in &d.levels {
                for a in 0..level.len() {
                    for b in a + 1..level.len() {
                        let (qa, qb) = (level[a], level[b]);
                        let (ra, rb) = (pos1[p2.order().at(qa) as usize], pos1[p2.order().at(qb) as usize]);
                        assert!((qa < qb) != (ra < rb));
                    }
                }
            }
        }
    }

    #[test]
    fn triple_product_examples() {
        let id = Permutation::identity(8);
        let r = check_triple_product(&id, &id, &id).unwrap();
        assert_eq!(r.lengths, [8, 8, 8]);
        assert_eq!(r.product, 512);
        assert!(r.holds);
        let (i3, r3) = (Permutation::identity(3), Permutation::reverse(3));
        let r = check_triple_product(&i3, &r3, &i3).unwrap();
        assert_eq!(r.lengths, [1, 1, 3]);
        assert_eq!(r.product, 3);
        assert!(r.holds);
    }

    #[test]
    fn triple_product_sweep() {
        let mut rng = stage_rng(47);
        for seed in 0..500u64 {
            let m = rng.random_range(3..=256);
            let ps: Vec<_> = (0..3).map(|k| Permutation::random(m, derive_seed(seed, k))).collect();
            let r = check_triple_product(&ps[0], &ps[1], &ps[2]).unwrap();
            assert!(r.holds, "m={m} seed={seed} {:?}", r.lengths);
        }
    }

    #[test]
    fn refine_examples() {
        let full = vec![semi(&[2, 0, 1]), semi(&[1, 2, 0])];
        let out = refine_to_complete(&full, &[0, 1, 2], 1, 5).unwrap();
        assert_eq!(out.completed_symbols(0), vec![2, 0, 1]);
        assert_eq!(out.completed_symbols(1), vec![1, 2, 0]);
        assert!(out.mask == vec![2, 0, 1] || out.mask == vec![1, 2, 0]);

        let out = refine_to_complete(&[semi(&[0, 1])], &[0, 1, 2], 3, 0).unwrap();
        assert_eq!(out.completed_symbols(0), vec![0, 1, 2]);
        assert_eq!(out.mask, vec![0, 1, 2]);

        assert!(refine_to_complete(&[semi(&[0, 1])], &[0, 1], 0, 0).is_err());
        assert!(refine_to_complete(&[], &[0, 1], 1, 0).is_err());
        assert!(refine_to_complete(&[semi(&[0, 5])], &[0, 1], 1, 0).is_err());
    }

    #[test]
    fn refine_leftovers_ascending_and_mask_order() {
        // Only block 0 can be sampled; its symbols lead the mask, the rest follow by id.
        let out = refine_to_complete(&[semi(&[7, 3])], &[1, 3, 5, 7, 9], 1, 0).unwrap();
        assert_eq!(out.mask, vec![7, 3, 1, 5, 9]);
        assert_eq!(out.completed_symbols(0), vec![7, 3, 1, 5, 9]);
    }

    #[test]
    fn refine_prefix_and_bijectivity() {
        let mut rng = stage_rng(53);
        for seed in 0..500u64 {
            let m = rng.random_range(1..30u32);
            let count = rng.random_range(1..8);
            let blocks: Vec<SemiPermutation> = (0..count)
                .map(|k| {
                    let mut ids: Vec<u32> = (0..m).collect();
                    ids.shuffle(&mut stage_rng(derive_seed(seed, k)));
                    ids.truncate(rng.random_range(0..=m as usize));
                    semi(&ids)
                })
                .collect();
            let universe: Vec<u32> = (0..m).collect();
            let out = refine_to_complete(&blocks, &universe, rng.random_range(1..5), seed).unwrap();
            let mut sorted_mask = out.mask.clone();
            sorted_mask.sort_unstable();
            assert_eq!(sorted_mask, universe);
            for (k, b) in blocks.iter().enumerate() {
                let full = out.completed_symbols(k);
                assert!(Permutation::new(full.clone()).is_ok());
                assert_eq!(&full[..b.kept.len()], b.symbols());
                // The appended tail follows mask order.
                let tail = &full[b.kept.len()..];
                let rank: Vec<usize> = tail
                    .iter()
                    .map(|c| out.mask.iter().position(|x| x == c).unwrap())
                    .collect();
                assert!(rank.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn mask_experiment_identical_blocks() {
        // Every block is the same permutation of 0..8.
        let block: Vec<u32> = vec![3, 1, 4, 0, 5, 2, 7, 6];
        let s = SymbolString::from_symbols(block.iter().cycle().take(64).copied().collect());
        let r = mask_experiment(&s, &s, 1).unwrap();
        assert_eq!(r.blocks, 8);
        assert_eq!(r.m, 8);
        assert_eq!(r.mean_diagonal, 8.0);
        assert_eq!(r.mean_cross, 8.0);
    }

    #[test]
    fn mask_experiment_random_permutation_blocks() {
        let b = 12usize;
        let mut ids = Vec::new();
        for k in 0..2 * b as u64 {
            ids.extend_from_slice(Permutation::random(b, k).ids());
        }
        let s = SymbolString::from_symbols(ids[..b * b].to_vec());
        let t = SymbolString::new(ids[b * b..].to_vec(), b).unwrap();
        let r = mask_experiment(&s, &t, 2).unwrap();
        assert_eq!(r.blocks, b);
        assert!(r.mean_cross >= 1.0);
        // Recompute the triple minimum from the matrix and compare with the m^{1/3} bound.
        let w = &r.within;
        let mut lo = usize::MAX;
        for i in 0..b {
            for j in i + 1..b {
                for k in j + 1..b {
                    lo = lo.min(w[i][j].max(w[j][k]).max(w[k][i]));
                    assert!(w[i][j] * w[j][k] * w[k][i] >= r.m);
                }
            }
        }
        assert_eq!(r.min_triple_max, Some(lo));
        assert!((lo as f64).powi(3) >= r.m as f64);
        assert!(mask_experiment(&s, &SymbolString::from_symbols(vec![0]), 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn prop_levels_equal_lcs(m in 1usize..120, a in any::<u64>(), b in any::<u64>()) {
            let (p1, p2) = (Permutation::random(m, a), Permutation::random(m, b));
            let d = dilworth_decompose(&p1, &p2).unwrap();
            prop_assert!(d.is_valid_for(&p1, &p2));
            prop_assert_eq!(d.level_count(), lcs_quadratic(p1.order(), p2.order()).len());
        }

        #[test]
        fn prop_triple_product(m in 1usize..100, seed in any::<u64>()) {
            let ps: Vec<_> = (0..3).map(|k| Permutation::random(m, derive_seed(seed, k))).collect();
            prop_assert!(check_triple_product(&ps[0], &ps[1], &ps[2]).unwrap().holds);
        }
    }
}
