//! Instance families and the plain-text instance format.
//!
//! File layout: `n m` on the first line, then the `n` symbols of `s` and the
//! `n` symbols of `t`, space separated, one string per line.

use lcs_approx::blockwise::ceil_sqrt;
use lcs_approx::rng::{derive_seed, stage_rng};
use lcs_approx::{Symbol, SymbolString};
use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("malformed instance file: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Uniform,
    Planted,
    BlockConstant,
    BlockPermutation,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Uniform,
        Family::Planted,
        Family::BlockConstant,
        Family::BlockPermutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Planted => "planted",
            Family::BlockConstant => "block_constant",
            Family::BlockPermutation => "block_permutation",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| InstanceError::InvalidSpec(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub planted_len: Option<usize>,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family, n: usize, m: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            m,
            planted_len: None,
            seed,
        }
    }

    pub fn planted(n: usize, m: usize, planted_len: usize, seed: u64) -> Self {
        Self {
            planted_len: Some(planted_len),
            ..Self::new(Family::Planted, n, m, seed)
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.m == 0 {
            return Err(InstanceError::InvalidSpec("alphabet size m must be at least 1".into()));
        }
        match (self.family, self.planted_len) {
            (Family::Planted, None) => Err(InstanceError::InvalidSpec("planted family needs planted_len".into())),
            (_, Some(l)) if l > self.n => Err(InstanceError::InvalidSpec(format!(
                "planted_len {l} exceeds n = {}",
                self.n
            ))),
            _ => Ok(()),
        }
    }

    /// Short identifier used in CSV rows.
    pub fn label(&self) -> String {
        match self.planted_len {
            Some(l) => format!("{}-n{}-m{}-L{}-s{}", self.family, self.n, self.m, l, self.seed),
            None => format!("{}-n{}-m{}-s{}", self.family, self.n, self.m, self.seed),
        }
    }
}

fn uniform(rng: &mut impl Rng, n: usize, m: usize) -> SymbolString {
    let symbols = (0..n).map(|_| rng.random_range(0..m as Symbol)).collect();
    SymbolString::new(symbols, m).expect("symbols drawn below m")
}

/// A shared random sequence of length `L` over `0..m` placed at random
/// positions of each string; every other position gets an id used nowhere
/// else, so the exact LCS is `L`.
fn planted(rng: &mut impl Rng, n: usize, m: usize, len: usize) -> (SymbolString, SymbolString) {
    let core: Vec<Symbol> = (0..len).map(|_| rng.random_range(0..m as Symbol)).collect();
    let noise = n - len;
    let alphabet = m + 2 * noise;
    let place = |first_noise: usize, rng: &mut dyn rand::RngCore| {
        let mut slots = rand::seq::index::sample(rng, n, len).into_vec();
        slots.sort_unstable();
        let mut symbols = vec![0 as Symbol; n];
        let mut next_noise = first_noise as Symbol;
        let mut k = 0;
        for (p, slot) in symbols.iter_mut().enumerate() {
            if k < len && slots[k] == p {
                *slot = core[k];
                k += 1;
            } else {
                *slot = next_noise;
                next_noise += 1;
            }
        }
        SymbolString::new(symbols, alphabet).expect("ids below alphabet")
    };
    let s = place(m, rng);
    let t = place(m + noise, rng);
    (s, t)
}

/// Block `k` of both strings repeats one symbol drawn for that block.
fn block_constant(rng: &mut impl Rng, n: usize, m: usize) -> (SymbolString, SymbolString) {
    let bs = ceil_sqrt(n).max(1);
    let labels: Vec<Symbol> = (0..n.div_ceil(bs)).map(|_| rng.random_range(0..m as Symbol)).collect();
    let symbols = (0..n).map(|p| labels[p / bs]).collect();
    let s = SymbolString::new(symbols, m).expect("labels below m");
    (s.clone(), s)
}

/// Each block is a uniformly random arrangement of distinct symbols; when
/// `m` is smaller than the block, fresh permutations of `0..m` are
/// concatenated.
fn block_permutation(rng: &mut impl Rng, n: usize, m: usize) -> SymbolString {
    let bs = ceil_sqrt(n).max(1);
    let mut symbols = Vec::with_capacity(n);
    let mut perm: Vec<Symbol> = (0..m as Symbol).collect();
    for start in (0..n).step_by(bs) {
        let len = bs.min(n - start);
        let mut filled = 0;
        while filled < len {
            let take = (len - filled).min(m);
            if take == m {
                perm.shuffle(rng);
                symbols.extend_from_slice(&perm);
            } else {
                let picks = rand::seq::index::sample(rng, m, take);
                symbols.extend(picks.iter().map(|x| x as Symbol));
            }
            filled += take;
        }
    }
    SymbolString::new(symbols, m).expect("symbols below m")
}

pub fn generate(spec: &InstanceSpec) -> Result<(SymbolString, SymbolString), InstanceError> {
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);
    let mut rs = stage_rng(derive_seed(spec.seed, 0));
    Ok(match spec.family {
        Family::Uniform => {
            let mut rt = stage_rng(derive_seed(spec.seed, 1));
            (uniform(&mut rs, n, m), uniform(&mut rt, n, m))
        }
        Family::Planted => planted(&mut rs, n, m, spec.planted_len.expect("validated")),
        Family::BlockConstant => block_constant(&mut rs, n, m),
        Family::BlockPermutation => {
            let mut rt = stage_rng(derive_seed(spec.seed, 1));
            (block_permutation(&mut rs, n, m), block_permutation(&mut rt, n, m))
        }
    })
}

pub fn write_instance(mut out: impl Write, s: &SymbolString, t: &SymbolString) -> Result<(), InstanceError> {
    if s.len() != t.len() {
        return Err(InstanceError::InvalidSpec(format!(
            "instance strings differ in length ({} vs {})",
            s.len(),
            t.len()
        )));
    }
    let m = s.alphabet_size().max(t.alphabet_size());
    writeln!(out, "{} {}", s.len(), m)?;
    for x in [s, t] {
        let line: Vec<String> = x.symbols().iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn read_instance(input: impl BufRead) -> Result<(SymbolString, SymbolString), InstanceError> {
    let mut lines = input.lines();
    let mut next_line = |what: &str| -> Result<String, InstanceError> {
        lines
            .next()
            .transpose()?
            .ok_or_else(|| InstanceError::Parse(format!("missing {what} line")))
    };
    let header = next_line("header")?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields[..] else {
        return Err(InstanceError::Parse(format!("header `{header}` is not `n m`")));
    };
    let parse_usize = |x: &str| {
        x.parse::<usize>()
            .map_err(|e| InstanceError::Parse(format!("`{x}`: {e}")))
    };
    let (n, m) = (parse_usize(n)?, parse_usize(m)?);
    let mut read = |name: &str| -> Result<SymbolString, InstanceError> {
        let line = next_line(name)?;
        let symbols = line
            .split_whitespace()
            .map(|x| {
                x.parse::<Symbol>()
                    .map_err(|e| InstanceError::Parse(format!("`{x}`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if symbols.len() != n {
            return Err(InstanceError::Parse(format!(
                "{name} has {} symbols, expected {n}",
                symbols.len()
            )));
        }
        SymbolString::new(symbols, m).map_err(|e| InstanceError::Parse(format!("{name}: {e}")))
    };
    let s = read("s")?;
    let t = read("t")?;
    Ok((s, t))
}
