use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use statrs::function::factorial::ln_binomial;

use super::numeric::{check_open_probability, check_probability, neumaier_sum};
use crate::error::{Error, Result};

/// Expected steps for the reset chain on `0..=r+1` (advance with
/// probability `q`, fall back to 0 with probability `p`) to reach `r+1`
/// from 0: `sum_{j=1}^{r+1} q^{-j}`.
pub fn markov_hitting_expectation(r: usize, p: f64) -> Result<f64> {
    check_open_probability("p", p)?;
    let q = 1.0 - p;
    Ok(neumaier_sum((1..=r as i32 + 1).map(|j| q.powi(-j))))
}

/// `q^{-r} (a q^r + 1/(pq))`, the bound on the expected distance to the
/// right wall given a leading run of `a` passive cells.
pub fn hitting_bound(a: usize, r: usize, p: f64) -> Result<f64> {
    check_open_probability("p", p)?;
    let q = 1.0 - p;
    Ok(q.powi(-(r as i32)) * (a as f64 * q.powi(r as i32) + 1.0 / (p * q)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeStateParams {
    pub p_wall: f64,
    pub p_spreading: f64,
    pub p_empty: f64,
}

impl ThreeStateParams {
    pub fn new(p_wall: f64, p_spreading: f64, p_empty: f64) -> Result<Self> {
        let params = ThreeStateParams {
            p_wall,
            p_spreading,
            p_empty,
        };
        params.validate()?;
        Ok(params)
    }

    /// `p_w` and `p_s` must be positive; `p_e = 0` is accepted as the
    /// degenerate case where nothing spreads.
    pub fn validate(&self) -> Result<()> {
        if !(self.p_wall > 0.0 && self.p_spreading > 0.0 && self.p_empty >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "three-state probabilities must be positive (got {self:?})"
            )));
        }
        let total = self.p_wall + self.p_spreading + self.p_empty;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "three-state probabilities must sum to 1 (got {total})"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeStateActivation {
    /// Probability that site 0 ends in the spreading state.
    pub exact: f64,
    /// `1 / (1 + p_w / p_s)`.
    pub bound: f64,
}

pub fn three_state_activation(params: &ThreeStateParams) -> Result<ThreeStateActivation> {
    params.validate()?;
    let ThreeStateParams {
        p_wall: pw,
        p_spreading: ps,
        p_empty: pe,
    } = *params;
    let exact = ps + ps * (ps + 2.0 * pw) * pe / ((1.0 - pe) * (1.0 - pe));
    Ok(ThreeStateActivation {
        exact,
        bound: 1.0 / (1.0 + pw / ps),
    })
}

/// `P(Bin(trials, p) >= threshold)`.
pub fn binomial_tail(trials: u64, p: f64, threshold: u64) -> Result<f64> {
    check_probability("p", p)?;
    if threshold > trials {
        return Ok(0.0);
    }
    if p == 0.0 {
        return Ok(if threshold == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    Ok(neumaier_sum((threshold..=trials).map(|k| {
        (ln_binomial(trials, k) + k as f64 * lp + (trials - k) as f64 * lq).exp()
    })))
}

/// Exact rational tail for a rational `p`.
pub fn binomial_tail_exact(trials: u64, p: &BigRational, threshold: u64) -> BigRational {
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    let mut coeff = BigInt::one();
    for k in 0..=trials {
        if k >= threshold {
            let term = BigRational::from_integer(coeff.clone())
                * num_traits::pow(p.clone(), k as usize)
                * num_traits::pow(q.clone(), (trials - k) as usize);
            total += term;
        }
        coeff = coeff * BigInt::from(trials - k) / BigInt::from(k + 1);
    }
    total
}

/// `(4 p q)^r`.
pub fn chernoff_bound(r: usize, p: f64) -> f64 {
    (4.0 * p * (1.0 - p)).powi(r as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::to_rational;

    #[test]
    fn hitting_examples() {
        assert!((markov_hitting_expectation(1, 0.5).unwrap() - 6.0).abs() < 1e-12);
        assert!((markov_hitting_expectation(2, 0.5).unwrap() - 14.0).abs() < 1e-12);
        for r in 1..10 {
            let v = markov_hitting_expectation(r, 1e-9).unwrap();
            assert!((v - (r + 1) as f64).abs() < 1e-6);
        }
        assert!(markov_hitting_expectation(1, 1.0).is_err());
    }

    #[test]
    fn hitting_expectation_solves_chain_recurrence() {
        // E[N_s] = 1 + q E[N_{s+1}] + p E[N_0], E[N_{r+1}] = 0; solve by
        // writing E[N_s] = a_s + b_s E[N_0] from the top down.
        for r in 1..8 {
            for p in [0.1, 0.3, 0.5, 0.7] {
                let q = 1.0 - p;
                let (mut a, mut b) = (0.0, 0.0);
                for _ in 0..=r {
                    a = 1.0 + q * a;
                    b = p + q * b;
                }
                let e0 = a / (1.0 - b);
                let closed = markov_hitting_expectation(r, p).unwrap();
                assert!((e0 - closed).abs() / closed < 1e-12, "r={r} p={p}");
            }
        }
    }

    #[test]
    fn three_state_examples() {
        let v = three_state_activation(&ThreeStateParams::new(0.25, 0.25, 0.5).unwrap()).unwrap();
        assert!((v.exact - 0.625).abs() < 1e-15);
        assert!((v.bound - 0.5).abs() < 1e-15);

        let v = three_state_activation(&ThreeStateParams::new(0.5, 0.25, 0.25).unwrap()).unwrap();
        assert!((v.bound - 1.0 / 3.0).abs() < 1e-15);
        assert!((v.exact - (0.25 + 0.25 * 1.25 * 0.25 / 0.5625)).abs() < 1e-15);
        assert!(v.exact > v.bound);

        let eps = 1e-9;
        let v = three_state_activation(&ThreeStateParams::new(eps, 1.0 - 2.0 * eps, eps).unwrap())
            .unwrap();
        assert!((v.exact - 1.0).abs() < 1e-6 && (v.bound - 1.0).abs() < 1e-6);

        let v = three_state_activation(&ThreeStateParams::new(0.3, 0.7, 0.0).unwrap()).unwrap();
        assert_eq!(v.exact, 0.7);

        assert!(ThreeStateParams::new(0.0, 0.5, 0.5).is_err());
        assert!(ThreeStateParams::new(0.3, 0.3, 0.3).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert!((binomial_tail(2, 0.5, 2).unwrap() - 0.25).abs() < 1e-15);
        let t = binomial_tail(20, 0.3, 11).unwrap();
        assert!(t <= chernoff_bound(10, 0.3));
        assert!((chernoff_bound(10, 0.3) - 0.17490).abs() < 1e-5);
        assert_eq!(binomial_tail(20, 0.0, 11).unwrap(), 0.0);
        assert!(binomial_tail(20, 1e-12, 11).unwrap() < 1e-100);
    }

    #[test]
    fn float_tail_matches_rational() {
        for r in [1u64, 5, 17, 40] {
            for p in [0.05, 0.25, 0.45] {
                let exact = binomial_tail_exact(2 * r, &to_rational(p), r + 1);
                let exact: f64 = num_traits::ToPrimitive::to_f64(&exact).unwrap();
                let float = binomial_tail(2 * r, p, r + 1).unwrap();
                assert!((exact - float).abs() <= 1e-12 * exact.max(1e-300), "r={r} p={p}");
            }
        }
    }
}
