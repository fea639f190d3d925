//! Closed-form coordinatewise shrinkage for orthonormal designs with all subset
//! models.
//!
//! Each coefficient is the posterior probability that coordinate `j` belongs to
//! the selected model; with the geometric prior it factorises into the logistic
//! form `1 / (1 + exp(tau - beta Z_j^2 / s^2))`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::math;
use crate::quad;

/// Panel cap for the binomial-prior quadrature.
pub const BINOMIAL_MAX_PANELS: usize = 1 << 14;
/// Relative tolerance for the binomial-prior quadrature.
pub const BINOMIAL_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkResult {
    /// shrinkage factors `c_j`
    pub coefficients: Vec<f64>,
    /// `c_j Z_j`
    pub shrunk: Vec<f64>,
    /// the raw coefficients `Z_j = <Y, v_j>`
    pub z: Vec<f64>,
    /// `ln(c_j / (1 - c_j))`; keeps `1 - c_j` resolvable after `c_j` rounds to 1
    pub log_odds: Vec<f64>,
}

impl ShrinkResult {
    fn from_log_odds(z: &[f64], log_odds: Vec<f64>) -> Self {
        let coefficients: Vec<f64> = log_odds
            .iter()
            .map(|t| math::logistic_complement(-t))
            .collect();
        let shrunk = coefficients.iter().zip(z).map(|(c, z)| c * z).collect();
        Self {
            coefficients,
            shrunk,
            z: z.to_vec(),
            log_odds,
        }
    }

    /// `1 - c_j` without cancellation.
    pub fn complements(&self) -> Vec<f64> {
        self.log_odds
            .iter()
            .map(|t| math::logistic_complement(*t))
            .collect()
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(domain(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

fn check_nonnegative(name: &str, value: f64) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(domain(format!("{name} must be non-negative, got {value}")));
    }
    Ok(())
}

fn logistic_log_odds(z: &[f64], scale2: f64, beta: f64, threshold: f64) -> Vec<f64> {
    z.iter()
        .map(|zj| beta * zj * zj / scale2 - threshold)
        .collect()
}

/// Unknown-variance estimator with prior `pi_m ∝ p^{-alpha |m|}` and `L_m = b |m|`:
/// `c_j = exp(beta Z_j^2 / s2) / (p^alpha e^b + exp(beta Z_j^2 / s2))`.
pub fn shrink_unknown_variance(
    z: &[f64],
    sigma2_hat: f64,
    beta: f64,
    alpha: f64,
    b: f64,
) -> Result<ShrinkResult> {
    check_positive("sigma2_hat", sigma2_hat)?;
    check_positive("beta", beta)?;
    check_positive("alpha", alpha)?;
    check_nonnegative("b", b)?;
    if z.is_empty() {
        return Err(domain("need at least one coefficient"));
    }
    let threshold = alpha * math::ln(z.len() as f64) + b;
    Ok(ShrinkResult::from_log_odds(
        z,
        logistic_log_odds(z, sigma2_hat, beta, threshold),
    ))
}

/// Known-variance exponential-weights estimator with the same prior:
/// `c_j = exp(beta Z_j^2 / s2) / (p^alpha e^{2 beta} + exp(beta Z_j^2 / s2))`.
///
/// With `alpha = 1` this is `s_beta(Z_j / sigma)`.
pub fn shrink_known_variance(
    z: &[f64],
    sigma2: f64,
    beta: f64,
    alpha: f64,
) -> Result<ShrinkResult> {
    check_positive("sigma2", sigma2)?;
    check_positive("beta", beta)?;
    check_positive("alpha", alpha)?;
    if z.is_empty() {
        return Err(domain("need at least one coefficient"));
    }
    let threshold = alpha * math::ln(z.len() as f64) + 2.0 * beta;
    Ok(ShrinkResult::from_log_odds(
        z,
        logistic_log_odds(z, sigma2, beta, threshold),
    ))
}

/// `s_beta(x) = e^{beta x^2} / (p e^{2 beta} + e^{beta x^2})`
#[inline]
pub fn s_beta(x: f64, p: usize, beta: f64) -> f64 {
    math::logistic_complement(math::ln(p as f64) + 2.0 * beta - beta * x * x)
}

/// Shrinkage under the binomial-type prior `pi_m = [(p + 1) C(p, |m|)]^{-1}`,
/// `L_m = b |m|`; each `c_j` is a ratio of two integrals over `q in [0, 1]`.
pub fn shrink_binomial_prior(
    z: &[f64],
    sigma2_hat: f64,
    beta: f64,
    b: f64,
) -> Result<ShrinkResult> {
    check_positive("sigma2_hat", sigma2_hat)?;
    check_positive("beta", beta)?;
    check_nonnegative("b", b)?;
    if z.is_empty() {
        return Err(domain("need at least one coefficient"));
    }
    // t_k = b - beta Z_k^2 / s2; bracket_k(q) = q + (1 - q) e^{t_k}
    let t: Vec<f64> = z.iter().map(|zk| b - beta * zk * zk / sigma2_hat).collect();
    let ln_bracket = |q: f64, tk: f64| -> f64 {
        let lq = if q > 0.0 {
            math::ln(q)
        } else {
            f64::NEG_INFINITY
        };
        let l1q = if q < 1.0 {
            math::ln_1p(-q)
        } else {
            f64::NEG_INFINITY
        };
        math::ln_add_exp(lq, l1q + tk)
    };
    let ln_product = |q: f64| -> f64 { t.iter().map(|&tk| ln_bracket(q, tk)).sum() };

    // common shift so the integrands stay O(1)
    let shift = (0..=64)
        .map(|i| ln_product(i as f64 / 64.0))
        .fold(f64::NEG_INFINITY, f64::max);

    // c_j and 1 - c_j are integrated separately so both stay resolvable
    let integrate = |f: &dyn Fn(f64) -> f64| {
        quad::adaptive_simpson(f, 0.0, 1.0, BINOMIAL_REL_TOL, BINOMIAL_MAX_PANELS).0
    };
    let log_odds = t
        .iter()
        .map(|&tj| {
            let inside = integrate(&|q: f64| {
                if q == 0.0 {
                    return 0.0;
                }
                math::exp(math::ln(q) + ln_product(q) - ln_bracket(q, tj) - shift)
            });
            let outside = integrate(&|q: f64| {
                if q == 1.0 {
                    return 0.0;
                }
                math::exp(math::ln_1p(-q) + tj + ln_product(q) - ln_bracket(q, tj) - shift)
            });
            math::ln(inside) - math::ln(outside)
        })
        .collect();
    Ok(ShrinkResult::from_log_odds(z, log_odds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_coefficient_gets_floor_factor() {
        let r = shrink_unknown_variance(&[0.0, 1.0, 2.0], 1.0, 0.5, 1.0, 1.0).unwrap();
        let floor = 1.0 / (3.0 * math::exp(1.0) + 1.0);
        assert!((r.coefficients[0] - floor).abs() < 1e-15);
        assert_eq!(r.shrunk[0], 0.0);
    }

    #[test]
    fn complements_survive_rounding() {
        let r = shrink_unknown_variance(&[0.0, 3.0, 30.0], 1.0, 1.0 / 3.0, 1.0, 1.0).unwrap();
        let comp = r.complements();
        assert_eq!(r.coefficients[2], 1.0);
        assert!(comp[2] > 0.0 && comp[2] < 1e-100);
        for (c, q) in r.coefficients.iter().zip(&comp).take(2) {
            assert!((c + q - 1.0).abs() < 1e-15);
        }
        let bin = shrink_binomial_prior(&[0.5, 2.0, 40.0], 1.0, 0.25, 1.0).unwrap();
        for (c, q) in bin.coefficients.iter().zip(bin.complements()) {
            assert!(q > 0.0 && (c + q - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn transition_point_is_one_half() {
        let (p, alpha, b, beta, s2) = (7usize, 1.3, 0.7, 0.4, 2.0);
        let z2 = (b + alpha * math::ln(p as f64)) * s2 / beta;
        let mut z = vec![0.5; p];
        z[3] = math::sqrt(z2);
        let r = shrink_unknown_variance(&z, s2, beta, alpha, b).unwrap();
        assert!((r.coefficients[3] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn illustration_parameters() {
        // p = 41, alpha = b = 1, beta = 1/3, Z^2 / s2 = 20; mpmath reference
        let mut z = vec![0.0; 41];
        z[0] = math::sqrt(20.0);
        let r = shrink_unknown_variance(&z, 1.0, 1.0 / 3.0, 1.0, 1.0).unwrap();
        assert!((r.coefficients[0] - 0.875_783_684_568_310_2).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_variance() {
        assert!(shrink_unknown_variance(&[1.0], 0.0, 0.5, 1.0, 1.0).is_err());
        assert!(shrink_known_variance(&[1.0], -1.0, 0.5, 1.0).is_err());
        assert!(shrink_binomial_prior(&[1.0], 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn known_variance_floor_and_transition() {
        let r = shrink_known_variance(&[0.0; 10], 1.0, 0.5, 1.0).unwrap();
        let floor = 1.0 / (10.0 * math::exp(1.0) + 1.0);
        assert!((r.coefficients[0] - floor).abs() < 1e-15);
        let mut z = vec![0.0; 10];
        z[0] = math::sqrt(2.0 + 2.0 * math::ln(10.0));
        let r = shrink_known_variance(&z, 1.0, 0.5, 1.0).unwrap();
        assert!((r.coefficients[0] - 0.5).abs() < 1e-14);
        assert!((r.coefficients[0] - s_beta(z[0], 10, 0.5)).abs() < 1e-15);
    }

    #[test]
    fn known_variance_dominates_half_indicator() {
        for p in [3usize, 10, 1000] {
            for beta in [0.25, 0.4, 0.5] {
                let t = 2.0 + math::ln(p as f64) / beta;
                for i in 0..200 {
                    let z = i as f64 * 0.05;
                    let c = s_beta(z, p, beta);
                    let ind = if z * z >= t { 0.5 } else { 0.0 };
                    assert!(c >= ind, "p={p} beta={beta} z={z}");
                }
            }
        }
    }

    #[test]
    fn binomial_single_coordinate_closed_form() {
        for (zv, b, beta) in [(0.0, 1.0, 0.3), (2.5, 0.5, 0.25), (4.0, 2.0, 0.5)] {
            let r = shrink_binomial_prior(&[zv], 1.3, beta, b).unwrap();
            let expected = 1.0 / (1.0 + math::exp(b - beta * zv * zv / 1.3));
            assert!((r.coefficients[0] - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn binomial_unit_factors_give_one_half() {
        // beta Z^2 / s2 = b makes every bracket identically 1
        let beta = 0.5;
        let b = 2.0;
        let z = vec![2.0; 6]; // beta * 4 / 1 = 2 = b
        let r = shrink_binomial_prior(&z, 1.0, beta, b).unwrap();
        for c in r.coefficients {
            assert!((c - 0.5).abs() < 1e-12);
        }
    }
}
