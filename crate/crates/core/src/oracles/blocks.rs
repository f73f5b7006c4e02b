//! Block words and their wall / spreading / empty classification.
//!
//! A block is spreading when strict majority dynamics activates all of its
//! cells while the `r` cells on each side are held passive forever. The
//! dynamics is monotone in the initial set and a block cell only sees cells
//! within distance `r`, so a permanently passive exterior is the worst case
//! over every exterior configuration.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::numeric::{check_open_probability, neumaier_sum};
use super::{CostPolicy, MAX_SPREADING_LEN};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockClass {
    Wall,
    Spreading,
    Empty,
}

impl fmt::Display for BlockClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockClass::Wall => "wall",
            BlockClass::Spreading => "spreading",
            BlockClass::Empty => "empty",
        })
    }
}

/// A 0/1 word classified relative to radius `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockWord {
    pub bits: Vec<u8>,
    pub r: usize,
}

impl BlockWord {
    pub fn new(bits: Vec<u8>, r: usize) -> Self {
        BlockWord { bits, r }
    }

    pub fn parse(s: &str, r: usize) -> Result<Self> {
        Ok(BlockWord::new(parse_bits(s)?, r))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

pub(crate) fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidParameter(format!(
                "word may only contain 0/1, found `{other}`"
            ))),
        })
        .collect()
}

impl FromStr for BlockClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wall" => Ok(BlockClass::Wall),
            "spreading" => Ok(BlockClass::Spreading),
            "empty" => Ok(BlockClass::Empty),
            other => Err(Error::InvalidParameter(format!("unknown block class `{other}`"))),
        }
    }
}

/// True when `bits` contains `run` consecutive zeros.
pub fn has_zero_run(bits: &[u8], run: usize) -> bool {
    let mut cur = 0;
    for &b in bits {
        if b == 0 {
            cur += 1;
            if cur >= run {
                return true;
            }
        } else {
            cur = 0;
        }
    }
    false
}

pub fn classify_block(block: &BlockWord) -> BlockClass {
    let r = block.r;
    if has_zero_run(&block.bits, r + 1) {
        return BlockClass::Wall;
    }
    let len = block.bits.len();
    // Positions r..r+len hold the block; the padding stays passive.
    let mut cells = vec![0u8; len + 2 * r];
    cells[r..r + len].copy_from_slice(&block.bits);
    let threshold = r + 1;
    loop {
        let activated: Vec<usize> = (r..r + len)
            .filter(|&i| {
                cells[i] == 0
                    && (i - r..=i + r)
                        .filter(|&j| j != i && cells[j] == 1)
                        .count()
                        >= threshold
            })
            .collect();
        if activated.is_empty() {
            break;
        }
        for i in activated {
            cells[i] = 1;
        }
    }
    if cells[r..r + len].iter().all(|&c| c == 1) {
        BlockClass::Spreading
    } else {
        BlockClass::Empty
    }
}

/// Probability that a length-`len` Bernoulli(p) word contains a run of at
/// least `r+1` zeros, by dynamic programming over the current zero run.
pub fn mu_wall_exact(len: usize, r: usize, p: f64) -> Result<f64> {
    check_open_probability("p", p)?;
    if r < 1 {
        return Err(Error::InvalidParameter("r must be >= 1".into()));
    }
    if len < r + 1 {
        return Err(Error::InvalidParameter(format!(
            "block length must satisfy len >= r+1 (got len={len}, r={r})"
        )));
    }
    let q = 1.0 - p;
    // run[k]: probability of no wall yet and a trailing zero run of length k.
    let mut run = vec![0.0; r + 1];
    run[0] = 1.0;
    let mut found = 0.0;
    for _ in 0..len {
        let mut next = vec![0.0; r + 1];
        next[0] = p * neumaier_sum(run.iter().copied());
        for k in 0..r {
            next[k + 1] = q * run[k];
        }
        found += q * run[r];
        run = next;
    }
    Ok(found)
}

/// Classification of every word of length `len <= 64` against radius `r`,
/// using neighbor bitmasks. Cross-checked against [`classify_block`].
pub(crate) fn classify_mask(word: u64, len: usize, r: usize, masks: &[u64]) -> BlockClass {
    let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let zeros = !word & full;
    let mut run = zeros;
    for k in 1..=r {
        run &= zeros >> k;
    }
    if run != 0 {
        return BlockClass::Wall;
    }
    let threshold = (r + 1) as u32;
    let mut active = word;
    loop {
        let mut next = active;
        let mut passive = !active & full;
        while passive != 0 {
            let i = passive.trailing_zeros() as usize;
            passive &= passive - 1;
            if (active & masks[i]).count_ones() >= threshold {
                next |= 1 << i;
            }
        }
        if next == active {
            break;
        }
        active = next;
    }
    if active == full {
        BlockClass::Spreading
    } else {
        BlockClass::Empty
    }
}

pub(crate) fn block_masks(len: usize, r: usize) -> Vec<u64> {
    (0..len)
        .map(|i| {
            let lo = i.saturating_sub(r);
            let hi = (i + r).min(len - 1);
            (lo..=hi).filter(|&j| j != i).fold(0u64, |m, j| m | 1 << j)
        })
        .collect()
}

/// `counts[k]` = number of spreading words of length `len` with `k` ones.
pub fn spreading_histogram(len: usize, r: usize, policy: CostPolicy) -> Result<Vec<u64>> {
    if len < 1 || r < 1 {
        return Err(Error::InvalidParameter("need len >= 1 and r >= 1".into()));
    }
    if len > MAX_SPREADING_LEN && !policy.is_override() {
        return Err(Error::GuardExceeded(format!(
            "block length {len} exceeds {MAX_SPREADING_LEN}; use the Monte Carlo BlockSpreading estimator or accept the cost"
        )));
    }
    if len > 40 {
        return Err(Error::GuardExceeded(format!(
            "block length {len} is beyond exhaustive enumeration"
        )));
    }
    let masks = block_masks(len, r);
    let total: u64 = 1 << len;
    let chunk = 1u64 << len.min(12);
    let hist = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut h = vec![0u64; len + 1];
            for word in c * chunk..(c + 1) * chunk {
                if classify_mask(word, len, r, &masks) == BlockClass::Spreading {
                    h[word.count_ones() as usize] += 1;
                }
            }
            h
        })
        .reduce(
            || vec![0u64; len + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}

pub fn mu_spreading_exact(len: usize, r: usize, p: f64) -> Result<f64> {
    mu_spreading_exact_with(len, r, p, CostPolicy::Guarded)
}

pub fn mu_spreading_exact_with(len: usize, r: usize, p: f64, policy: CostPolicy) -> Result<f64> {
    super::numeric::check_probability("p", p)?;
    let hist = spreading_histogram(len, r, policy)?;
    Ok(super::exact::WeightHistogram::from_counts(hist).probability(p))
}
