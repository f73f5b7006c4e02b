use num_bigint::BigInt;
use num_rational::BigRational;

/// Neumaier-compensated sum of the terms in ascending magnitude order.
pub fn neumaier_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut terms: Vec<f64> = terms.into_iter().collect();
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// The exact binary value of a finite float as a rational.
pub fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
}

pub(crate) fn check_probability(name: &str, p: f64) -> crate::Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(crate::Error::InvalidParameter(format!(
            "{name} must lie in [0, 1] (got {p})"
        )))
    }
}

pub(crate) fn check_open_probability(name: &str, p: f64) -> crate::Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(crate::Error::InvalidParameter(format!(
            "{name} must lie in (0, 1) (got {p})"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut terms = vec![1.0e16, -1.0e16];
        terms.extend(std::iter::repeat_n(1.0, 1000));
        assert_eq!(neumaier_sum(terms), 1000.0);
    }

    #[test]
    fn rational_is_exact() {
        let r = to_rational(0.5);
        assert_eq!(r, BigRational::new(1.into(), 2.into()));
    }
}
