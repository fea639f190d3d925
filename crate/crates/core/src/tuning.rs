//! The temperature `beta`: the deviation function `phi`, its inverse, and the
//! admissibility conditions of the risk bounds.

use alloc::format;

use crate::error::{domain, Error, Result};
use crate::math;

const BISECTION_LO: f64 = 1e-15;
const BISECTION_ITERS: usize = 200;
// relative width; tighter than the 1e-12 absolute target so phi(phi^{-1}(y))
// stays accurate where phi is steep near 0
const BISECTION_TOL: f64 = 1e-15;

/// `phi(x) = (x - 1 - ln x) / 2` on `(0, 1)`; strictly decreasing, `phi(1-) = 0`.
pub fn phi(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!("phi expects 0 < x < 1, got {x}")));
    }
    Ok(phi_unchecked(x))
}

#[inline]
fn phi_unchecked(x: f64) -> f64 {
    (x - 1.0 - math::ln(x)) / 2.0
}

/// The unique `x in (0, 1]` with `phi(x) = y`, by bisection on `[1e-15, 1]`
/// (at most 200 halvings).
pub fn phi_inverse(y: f64) -> Result<f64> {
    if !(y >= 0.0) || y.is_infinite() {
        return Err(domain(format!(
            "phi_inverse expects finite y >= 0, got {y}"
        )));
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (BISECTION_LO, 1.0);
    for _ in 0..BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        // phi is decreasing: phi(mid) > y means the root lies to the right
        if phi_unchecked(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= BISECTION_TOL * lo {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest `beta` meeting the general risk-bound condition:
/// `beta = phi^{-1}(ln n / (N_* - 2)) / 4`, always below `1/4`.
pub fn beta_max_theorem1(n: usize, n_star: usize) -> Result<f64> {
    if n < 3 {
        return Err(domain("n must be at least 3"));
    }
    if n_star <= 2 {
        return Err(domain(format!("N_* must exceed 2, got {n_star}")));
    }
    let y = math::ln(n as f64) / (n_star as f64 - 2.0);
    let mut beta = phi_inverse(y)? / 4.0;
    // keep the inequality strict even where phi_inverse returns 1
    if beta >= 0.25 {
        beta = 0.25 * (1.0 - f64::EPSILON);
    }
    // the bisection midpoint can sit an ulp past the boundary
    Ok(nudge_down(beta, |b| {
        check_theorem1_conditions(b, n_star, n)
    }))
}

/// Which admissibility rule to use for the orthonormal unknown-variance estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthonormalRule {
    /// `beta <= phi^{-1}(ln p / (n - p)) / 2`
    Remark4,
    /// largest `beta < 1/2` with `p + ln p / phi(2 beta) <= n`, found by bisection
    AppendixA2,
}

pub fn beta_max_orthonormal(n: usize, p: usize, rule: OrthonormalRule) -> Result<f64> {
    if p < 3 {
        return Err(domain(format!("p must be at least 3, got {p}")));
    }
    if n <= p {
        return Err(domain(format!("need n > p, got n = {n}, p = {p}")));
    }
    let (nf, pf) = (n as f64, p as f64);
    match rule {
        OrthonormalRule::Remark4 => {
            let beta = phi_inverse(math::ln(pf) / (nf - pf))? / 2.0;
            let beta = if beta >= 0.5 {
                0.5 * (1.0 - f64::EPSILON)
            } else {
                beta
            };
            Ok(nudge_down(beta, |b| {
                pf + math::ln(pf) / phi_unchecked(2.0 * b) <= nf
            }))
        }
        OrthonormalRule::AppendixA2 => {
            let holds = |beta: f64| pf + math::ln(pf) / phi_unchecked(2.0 * beta) <= nf;
            let (mut lo, mut hi) = (BISECTION_LO, 0.5);
            if !holds(lo) {
                return Err(Error::ConditionViolated(format!(
                    "no beta satisfies p + ln p / phi(2 beta) <= n for n = {n}, p = {p}"
                )));
            }
            for _ in 0..BISECTION_ITERS {
                let mid = 0.5 * (lo + hi);
                if holds(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(lo)
        }
    }
}

fn nudge_down<F: Fn(f64) -> bool>(mut beta: f64, holds: F) -> f64 {
    for _ in 0..64 {
        if holds(beta) {
            break;
        }
        beta *= 1.0 - 4.0 * f64::EPSILON;
    }
    beta
}

/// `beta < 1/4` and `N_* >= 2 + ln n / phi(4 beta)`.
pub fn check_theorem1_conditions(beta: f64, n_star: usize, n: usize) -> bool {
    if !(beta > 0.0 && beta < 0.25) || n < 2 {
        return false;
    }
    n_star as f64 >= 2.0 + math::ln(n as f64) / phi_unchecked(4.0 * beta)
}

/// Conditions of the orthonormal unknown-variance bound:
/// `p >= 3`, `0 < beta < 1/2`, `p + ln p / phi(2 beta) <= n`, and `b >= 1`.
pub fn check_orthonormal_conditions(beta: f64, b: f64, p: usize, n: usize) -> Result<()> {
    if p < 3 {
        return Err(Error::ConditionViolated(format!("p >= 3 (p = {p})")));
    }
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::ConditionViolated(format!(
            "0 < beta < 1/2 (beta = {beta})"
        )));
    }
    let lhs = p as f64 + math::ln(p as f64) / phi_unchecked(2.0 * beta);
    if lhs > n as f64 {
        return Err(Error::ConditionViolated(format!(
            "p + ln p / phi(2 beta) <= n ({lhs} > {n})"
        )));
    }
    if !(b >= 1.0) {
        return Err(Error::ConditionViolated(format!("b >= 1 (b = {b})")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaRule {
    Theorem1,
    OrthonormalAppendix,
    User,
}

/// A chosen `beta` and whether the matching admissibility predicate holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningReport {
    pub beta: f64,
    pub beta_rule: BetaRule,
    pub conditions_ok: bool,
    /// `phi(4 beta)` for the general rule, `phi(2 beta)` for the orthonormal one;
    /// `None` when the argument leaves `(0, 1)`.
    pub phi_value: Option<f64>,
}

impl TuningReport {
    pub fn theorem1(n: usize, n_star: usize) -> Result<Self> {
        let beta = beta_max_theorem1(n, n_star)?;
        Ok(Self::for_theorem1(beta, BetaRule::Theorem1, n_star, n))
    }

    pub fn orthonormal(n: usize, p: usize, b: f64) -> Result<Self> {
        let beta = beta_max_orthonormal(n, p, OrthonormalRule::AppendixA2)?;
        Ok(Self {
            beta,
            beta_rule: BetaRule::OrthonormalAppendix,
            conditions_ok: check_orthonormal_conditions(beta, b, p, n).is_ok(),
            phi_value: phi(2.0 * beta).ok(),
        })
    }

    /// A user-supplied `beta`, accepted as is and checked against the general condition.
    pub fn user(beta: f64, n: usize, n_star: usize) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(domain(format!("beta must be positive, got {beta}")));
        }
        Ok(Self::for_theorem1(beta, BetaRule::User, n_star, n))
    }

    fn for_theorem1(beta: f64, beta_rule: BetaRule, n_star: usize, n: usize) -> Self {
        Self {
            beta,
            beta_rule,
            conditions_ok: check_theorem1_conditions(beta, n_star, n),
            phi_value: phi(4.0 * beta).ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from 40-digit mpmath evaluation
    const PHI_HALF: f64 = 0.096_573_590_279_972_65;

    #[test]
    fn phi_known_value_and_domain() {
        assert!((phi(0.5).unwrap() - PHI_HALF).abs() < 1e-15);
        assert!(phi(0.0).is_err());
        assert!(phi(1.0).is_err());
        assert!(phi(1.0 - 1e-9).unwrap() < 1e-17);
        assert!(phi(0.1).unwrap() > phi(0.5).unwrap());
    }

    #[test]
    fn phi_inverse_values() {
        assert_eq!(phi_inverse(0.0).unwrap(), 1.0);
        assert!((phi_inverse(0.096_573_590_3).unwrap() - 0.5).abs() < 1e-9);
        assert!((phi_inverse(phi(0.3).unwrap()).unwrap() - 0.3).abs() < 1e-10);
        assert!(phi_inverse(-1e-3).is_err());
    }

    #[test]
    fn theorem1_beta() {
        // mpmath: phi^{-1}(ln 1024 / 510) / 4
        let b = beta_max_theorem1(1024, 512).unwrap();
        assert!((b - 0.196_149_091_957_086_6).abs() < 1e-10);
        assert!(check_theorem1_conditions(b, 512, 1024));
        assert!(beta_max_theorem1(1024, 2).is_err());
        let near = beta_max_theorem1(3, 1_000_000_000).unwrap();
        assert!(near < 0.25 && near > 0.2499);
    }

    #[test]
    fn theorem1_condition_edges() {
        assert!(!check_theorem1_conditions(0.25, 1000, 60));
        // 2 + ln 60 / phi(0.31) = 19.0178 > 19
        assert!(!check_theorem1_conditions(0.0775, 19, 60));
        let b = beta_max_theorem1(60, 19).unwrap();
        assert!((b - 0.077_443_352_353_563_26).abs() < 1e-10);
        assert!(check_theorem1_conditions(b, 19, 60));
        assert!(check_theorem1_conditions(0.077, 19, 60));
    }

    #[test]
    fn orthonormal_betas() {
        let r4 = beta_max_orthonormal(60, 41, OrthonormalRule::Remark4).unwrap();
        assert!((r4 - 0.177_427_142_705_770_2).abs() < 1e-10);
        let a2 = beta_max_orthonormal(60, 41, OrthonormalRule::AppendixA2).unwrap();
        assert!(41.0 + math::ln(41.0) / phi(2.0 * a2).unwrap() <= 60.0);
        // both rules describe the same boundary
        assert!((a2 - r4).abs() < 1e-9);
        let big = beta_max_orthonormal(10_000_000, 5, OrthonormalRule::Remark4).unwrap();
        assert!(big < 0.5 && big > 0.49);
        assert!(beta_max_orthonormal(41, 41, OrthonormalRule::Remark4).is_err());
    }

    #[test]
    fn orthonormal_conditions_name_the_failure() {
        let err = check_orthonormal_conditions(0.2, 0.5, 5, 40).unwrap_err();
        assert!(alloc::format!("{err}").contains("b >= 1"));
        let err = check_orthonormal_conditions(0.49, 1.0, 41, 60).unwrap_err();
        assert!(alloc::format!("{err}").contains("phi(2 beta)"));
        assert!(check_orthonormal_conditions(0.2, 1.0, 5, 40).is_ok());
    }

    #[test]
    fn user_beta_is_kept_but_flagged() {
        let r = TuningReport::user(1.0 / 3.0, 60, 19).unwrap();
        assert_eq!(r.beta, 1.0 / 3.0);
        assert!(!r.conditions_ok);
        assert_eq!(r.phi_value, None);
        let t = TuningReport::theorem1(60, 19).unwrap();
        assert!(t.conditions_ok && t.beta < 0.25);
    }
}
