//! The word family `T_r`: length `2r+1` words with `r+1` ones, ones at both
//! ends, a zero in the middle, and whose column pairs `(v_i, v_{i+r})` form
//! a generalized Dyck word under the weight `(0,0) -> +1`, `(1,1) -> -1`,
//! mixed pairs `-> 0`.

use num_bigint::BigUint;
use num_traits::One;

use super::blocks::BlockWord;
use super::{CostPolicy, MAX_TR_RADIUS};
use crate::error::{Error, Result};

fn pair_weight(a: u8, b: u8) -> i64 {
    match (a, b) {
        (0, 0) => 1,
        (1, 1) => -1,
        _ => 0,
    }
}

pub fn is_member_tr(v: &[u8], r: usize) -> Result<bool> {
    if r < 1 {
        return Err(Error::InvalidParameter("r must be >= 1".into()));
    }
    if v.len() != 2 * r + 1 {
        return Err(Error::InvalidParameter(format!(
            "word length must be 2r+1 = {} (got {})",
            2 * r + 1,
            v.len()
        )));
    }
    if v.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("word must be binary".into()));
    }
    let ones = v.iter().filter(|&&b| b == 1).count();
    if ones != r + 1 || v[0] != 1 || v[2 * r] != 1 || v[r] != 0 {
        return Ok(false);
    }
    let mut height = 0i64;
    for i in 1..r {
        height += pair_weight(v[i], v[i + r]);
        if height < 0 {
            return Ok(false);
        }
    }
    Ok(height == 0)
}

pub fn enumerate_tr(r: usize) -> Result<Vec<BlockWord>> {
    enumerate_tr_with(r, CostPolicy::Guarded)
}

/// Words of `T_r` in increasing order of their free bits.
pub fn enumerate_tr_with(r: usize, policy: CostPolicy) -> Result<Vec<BlockWord>> {
    if r < 1 {
        return Err(Error::InvalidParameter("r must be >= 1".into()));
    }
    if r > MAX_TR_RADIUS && !policy.is_override() {
        return Err(Error::GuardExceeded(format!(
            "r = {r} exceeds {MAX_TR_RADIUS}; use tr_lower_bound for large radii or accept the cost"
        )));
    }
    if r > 31 {
        return Err(Error::GuardExceeded(format!(
            "r = {r} is beyond word-by-word enumeration"
        )));
    }
    let len = 2 * r + 1;
    // Positions other than 0, r and 2r are free.
    let free: Vec<usize> = (1..2 * r).filter(|&i| i != r).collect();
    let mut out = Vec::new();
    let mut v = vec![0u8; len];
    v[0] = 1;
    v[2 * r] = 1;
    for mask in 0u64..1 << free.len() {
        if mask.count_ones() as usize != r - 1 {
            continue;
        }
        for (k, &i) in free.iter().enumerate() {
            v[i] = (mask >> k & 1) as u8;
        }
        if is_member_tr(&v, r)? {
            out.push(BlockWord::new(v.clone(), r));
        }
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn catalan(k: u64) -> BigUint {
    binomial(2 * k, k) / BigUint::from(k + 1)
}

/// `Catalan(k) * C(4k, 2k) * 2^(2k)` for `r = 4k + 1`, `k >= 1`.
pub fn tr_lower_bound(r: usize) -> Result<BigUint> {
    if r < 5 || !(r - 1).is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!(
            "counting bound needs r = 4k+1 with k >= 1 (got r = {r})"
        )));
    }
    let k = ((r - 1) / 4) as u64;
    Ok(catalan(k) * binomial(4 * k, 2 * k) * (BigUint::one() << (2 * k)))
}
