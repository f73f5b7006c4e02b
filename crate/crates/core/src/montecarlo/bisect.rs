use serde::{Deserialize, Serialize};

use super::estimate::{run_estimate_with_threads, TrialPlan};
use crate::error::{Error, Result};

/// Recorded with every threshold estimate.
pub const SURROGATE_CAVEAT: &str = "finite-n surrogate: least p whose estimated success probability reaches the target at this fixed n; not a limit over n";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectOutcome {
    pub p_hat: f64,
    pub p_lo: f64,
    pub p_hi: f64,
    /// `(p, estimated response)` for every probe, in probe order.
    pub probes: Vec<(f64, f64)>,
}

/// Bisects a non-decreasing response for the crossing of `target_prob`.
///
/// The response must be below the target at `p_lo` and at or above it at
/// `p_hi`. Stops once the bracket is narrower than `tol`.
pub fn bisect_response<F>(mut response: F, target_prob: f64, p_lo: f64, p_hi: f64, tol: f64) -> Result<BisectOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol must be positive (got {tol})")));
    }
    if !(0.0..=1.0).contains(&p_lo) || !(0.0..=1.0).contains(&p_hi) || p_lo >= p_hi {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= p_lo < p_hi <= 1 (got {p_lo}, {p_hi})"
        )));
    }
    let est_lo = response(p_lo)?;
    let est_hi = response(p_hi)?;
    let mut probes = vec![(p_lo, est_lo), (p_hi, est_hi)];
    if !(est_lo < target_prob && est_hi >= target_prob) {
        return Err(Error::Bracket {
            p_lo,
            p_hi,
            est_lo,
            est_hi,
            target: target_prob,
        });
    }
    let (mut lo, mut hi) = (p_lo, p_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let est = response(mid)?;
        probes.push((mid, est));
        if est >= target_prob {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BisectOutcome {
        p_hat: 0.5 * (lo + hi),
        p_lo: lo,
        p_hi: hi,
        probes,
    })
}

/// Bisection on Monte Carlo estimates. Every probe reuses the plan's master
/// seed, so trial `i` sees the same uniforms at every `p` and the estimated
/// response is exactly monotone.
pub fn bisect_threshold(
    template: &TrialPlan,
    target_prob: f64,
    p_lo: f64,
    p_hi: f64,
    tol: f64,
    threads: Option<usize>,
) -> Result<BisectOutcome> {
    template.validate()?;
    bisect_response(
        |p| {
            let mut plan = *template;
            plan.p = p;
            Ok(run_estimate_with_threads(&plan, threads)?.estimate)
        },
        target_prob,
        p_lo,
        p_hi,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::Target;
    use crate::topology::{Rule, TopologySpec};

    #[test]
    fn step_response() {
        let out = bisect_response(|p| Ok(if p < 0.5 { 0.0 } else { 1.0 }), 0.9, 0.0, 1.0, 1e-4).unwrap();
        assert!((out.p_hat - 0.5).abs() <= 1e-4);
        assert!(out.p_hi - out.p_lo <= 1e-4);
    }

    #[test]
    fn bad_tolerance_and_bracket() {
        assert!(bisect_response(|_| Ok(0.0), 0.5, 0.0, 1.0, 0.0).is_err());
        let err = bisect_response(|_| Ok(0.0), 0.5, 0.0, 1.0, 0.01).unwrap_err();
        assert!(matches!(err, Error::Bracket { est_lo, est_hi, .. } if est_lo == 0.0 && est_hi == 0.0));
    }

    #[test]
    fn probes_are_monotone_under_common_numbers() {
        let plan = TrialPlan::new(TopologySpec::rwheel(500, 3), Rule::Strict, 0.5, Target::Percolation, 400, 11);
        let out = bisect_threshold(&plan, 0.5, 0.05, 0.95, 0.01, None).unwrap();
        let mut probes = out.probes.clone();
        probes.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!(probes.windows(2).all(|w| w[0].1 <= w[1].1), "{probes:?}");
    }
}
