//! Monte Carlo risk estimation with deterministic, order-preserving reduction.

use rand::RngCore;
use rand_distr::{ChiSquared, Distribution};
use rayon::prelude::*;

use lsmix_core::bounds::{theorem1_bounds, BoundReport};
use lsmix_core::math::pairwise_sum;
use lsmix_core::mixer::mix;
use lsmix_core::vector::dist_sq;

use crate::error::{HarnessError, Result};
use crate::rng::{normal_vector, rep_rng};
use crate::scenario::{Prepared, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub empirical_risk: f64,
    /// sample standard deviation over `sqrt(reps)`
    pub std_error: f64,
    pub per_rep_losses: Option<Vec<f64>>,
    /// absent when the bound degenerates (`sigma = 0` with `mu` in `S_*`)
    pub bound_report: Option<BoundReport>,
}

/// Mean and standard error of `values` with pairwise sums.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    if values.iter().all(|v| *v == values[0]) {
        return (values[0], 0.0);
    }
    let mean = pairwise_sum(values) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Losses `loss(Y_rep)` for `Y_rep = mu + sigma * eps_rep`, in rep order.
/// The noise of rep `r` depends only on `(seed, r)`.
pub fn simulate<T, F>(mu: &[f64], sigma: f64, reps: usize, seed: u64, loss: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[f64]) -> Result<T> + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rep_rng(seed, rep as u64);
            let eps = normal_vector(&mut rng, mu.len());
            let y: Vec<f64> = mu.iter().zip(&eps).map(|(m, e)| m + sigma * e).collect();
            loss(&y)
        })
        .collect()
}

pub fn mc_risk(scenario: &Scenario) -> Result<McResult> {
    mc_risk_with(scenario, false)
}

pub fn mc_risk_with(scenario: &Scenario, keep_losses: bool) -> Result<McResult> {
    let prepared = scenario.prepare()?;
    mc_risk_prepared(
        &prepared,
        scenario.sigma,
        scenario.reps,
        scenario.master_seed,
        keep_losses,
    )
}

pub fn mc_risk_prepared(
    p: &Prepared,
    sigma: f64,
    reps: usize,
    seed: u64,
    keep_losses: bool,
) -> Result<McResult> {
    if reps == 0 {
        return Err(HarnessError::Invalid("reps must be at least 1".into()));
    }
    let mu = &p.mu;
    let losses = simulate(mu, sigma, reps, seed, |y| {
        let r = mix(y, &p.collection, &p.config)?;
        Ok(dist_sq(&r.mu_hat, mu))
    })?;
    let (empirical_risk, std_error) = mean_and_se(&losses);
    let bound_report = match theorem1_bounds(
        mu,
        &p.collection,
        sigma * sigma,
        p.config.beta,
        p.config.l_rule,
    ) {
        Ok(b) => Some(b),
        Err(lsmix_core::Error::Domain(_)) if sigma == 0.0 => None,
        Err(e) => return Err(e.into()),
    };
    Ok(McResult {
        empirical_risk,
        std_error,
        per_rep_losses: keep_losses.then_some(losses),
        bound_report,
    })
}

/// Monte Carlo estimate of `E[(a / X - 1)_+]` where `N X ~ chi^2_N`. Draws are
/// made in fixed blocks, each with its own stream, so the result is
/// independent of the thread count.
pub fn chi2_deviation_mc(dof: usize, a: f64, reps: usize, seed: u64) -> Result<(f64, f64)> {
    const BLOCK: usize = 4096;
    let dist = ChiSquared::new(dof as f64)
        .map_err(|e| HarnessError::Invalid(format!("chi-square: {e}")))?;
    let blocks = reps.div_ceil(BLOCK);
    let nf = dof as f64;
    let values: Vec<f64> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|blk| {
            let mut rng = rep_rng(seed, blk as u64);
            let len = BLOCK.min(reps - blk * BLOCK);
            (0..len)
                .map(|_| {
                    let x = dist.sample(&mut rng as &mut dyn RngCore) / nf;
                    (a / x - 1.0).max(0.0)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(mean_and_se(&values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_se_basic() {
        assert_eq!(mean_and_se(&[2.0; 5]), (2.0, 0.0));
        let (m, s) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn noiseless_run_has_zero_error() {
        let s = Scenario::parse(
            "n = 12\nsigma = 0\np = 3\nmu = 1,2,0.5,0.1,0,0,0,0,0,0,0,0.3\nreps = 7\n",
        )
        .unwrap();
        let r = mc_risk_with(&s, true).unwrap();
        assert_eq!(r.std_error, 0.0);
        let losses = r.per_rep_losses.unwrap();
        assert!(losses.iter().all(|l| *l == losses[0]));
        let prep = s.prepare().unwrap();
        let direct = mix(&prep.mu, &prep.collection, &prep.config).unwrap();
        assert_eq!(r.empirical_risk, dist_sq(&direct.mu_hat, &prep.mu));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let s =
            Scenario::parse("n = 16\nsigma = 1\np = 4\nmu = coef:2,0,1\nreps = 300\nseed = 5\n")
                .unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_risk_with(&s, true).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a, b);
        assert_eq!(a.empirical_risk.to_bits(), b.empirical_risk.to_bits());
        let c1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| chi2_deviation_mc(10, 0.5, 10_000, 3).unwrap());
        let c3 = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| chi2_deviation_mc(10, 0.5, 10_000, 3).unwrap());
        assert_eq!(c1, c3);
    }
}
