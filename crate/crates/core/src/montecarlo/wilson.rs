use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Two-sided standard normal quantile for `confidence`.
pub fn z_score(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence must lie in (0, 1) (got {confidence})"
        )));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

/// Wilson score interval for `successes` out of `trials`, clamped to
/// `[0, 1]` and always containing the point estimate.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= successes <= trials, trials >= 1 (got {successes}/{trials})"
        )));
    }
    let z = z_score(confidence)?;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let mut low = (center - half).clamp(0.0, 1.0);
    let mut high = (center + half).clamp(0.0, 1.0);
    if successes == 0 {
        low = 0.0;
    }
    if successes == trials {
        high = 1.0;
    }
    Ok((low.min(phat), high.max(phat)))
}
