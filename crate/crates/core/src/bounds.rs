//! Risk bounds and the numerical constants they depend on.

use alloc::format;
use alloc::vec::Vec;

use crate::design::ORTHONORMAL_TOL;
use crate::error::{domain, Error, Result};
use crate::math;
use crate::mixer::LRule;
use crate::model::{ModelCollection, ModelId};
use crate::quad;
use crate::tuning::{self, phi};
use crate::vector;

/// Risk of the least-squares estimator on one model:
/// `||mu - Pi_m mu||^2 + dim(S_m) sigma^2`.
pub fn model_risk(
    mu: &[f64],
    collection: &ModelCollection,
    index: usize,
    sigma2: f64,
) -> Result<f64> {
    vector::check_len(mu, collection.n())?;
    if !(sigma2 >= 0.0) {
        return Err(domain(format!(
            "sigma^2 must be non-negative, got {sigma2}"
        )));
    }
    let sub = collection.subspace(index);
    Ok(sub.residual_norm_sq(mu) + sub.dim() as f64 * sigma2)
}

/// Evaluated right-hand sides of the general oracle bounds for a given truth.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `||mu - Pi_m mu||^2 + dim(S_m) sigma^2` in collection order
    pub per_model_risk: Vec<f64>,
    /// `(1 + eps_n) inf_m {bias_m + (sbar2 / beta)(L_m - ln pi_m)} + sigma^2 / (2 ln n)`
    pub foracle_rhs: f64,
    /// `-(1 + eps_n)(sbar2 / beta) ln sum_m pi_m exp(-beta [bias_m - dim_m sigma^2] / sbar2 - L_m) + sigma^2 / (2 ln n)`
    pub fgibbs_rhs: f64,
    /// the bias/complexity form with `C_m = L_m - ln pi_m` and remainder `R*_n sigma^2`
    pub crude_rhs: f64,
    /// `1 / (2 n ln n)`
    pub epsilon_n: f64,
    /// `sigma^2 + ||mu - Pi_* mu||^2 / N_*`
    pub sigma_bar2: f64,
    /// minimiser of the oracle bracket
    pub best_model: ModelId,
}

pub fn theorem1_bounds(
    mu: &[f64],
    collection: &ModelCollection,
    sigma2: f64,
    beta: f64,
    l_rule: LRule,
) -> Result<BoundReport> {
    vector::check_len(mu, collection.n())?;
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    if !(sigma2 >= 0.0) {
        return Err(domain(format!(
            "sigma^2 must be non-negative, got {sigma2}"
        )));
    }
    let nf = collection.n() as f64;
    let ln_n = math::ln(nf);
    let epsilon_n = 1.0 / (2.0 * nf * ln_n);
    let star_bias = collection.star().residual_norm_sq(mu);
    let n_star = collection.n_star() as f64;
    let sigma_bar2 = sigma2 + star_bias / n_star;
    if !(sigma_bar2 > 0.0) {
        return Err(domain("sigma_bar^2 vanishes (sigma = 0 and mu in S_*)"));
    }
    let tail = sigma2 / (2.0 * ln_n);

    let mut per_model_risk = Vec::with_capacity(collection.len());
    let mut gibbs_terms = Vec::with_capacity(collection.len());
    let mut best = (f64::INFINITY, 0usize);
    let mut crude_inf = f64::INFINITY;
    let mut sup_complexity = f64::NEG_INFINITY;
    for (i, m) in collection.models().iter().enumerate() {
        let sub = collection.subspace(i);
        let dim = sub.dim() as f64;
        let bias = sub.residual_norm_sq(mu);
        let l = l_rule.value(m, sub.dim());
        let ln_pi = math::ln(m.prior);
        let complexity = l - ln_pi;
        per_model_risk.push(bias + dim * sigma2);
        gibbs_terms.push(ln_pi - beta * (bias - dim * sigma2) / sigma_bar2 - l);
        let oracle = bias + sigma_bar2 / beta * complexity;
        if oracle < best.0 {
            best = (oracle, i);
        }
        crude_inf = crude_inf.min(bias + complexity * sigma2 / beta);
        sup_complexity = sup_complexity.max(complexity);
    }
    let foracle_rhs = (1.0 + epsilon_n) * best.0 + tail;
    let fgibbs_rhs =
        -(1.0 + epsilon_n) * sigma_bar2 / beta * math::log_sum_exp(&gibbs_terms) + tail;
    // R*_n sigma^2 = sigma^2 / (2 ln n) + ||mu - Pi_* mu||^2 sup C_m / (beta N_*)
    let crude_rhs =
        (1.0 + epsilon_n) * crude_inf + tail + star_bias * sup_complexity / (beta * n_star);
    Ok(BoundReport {
        per_model_risk,
        foracle_rhs,
        fgibbs_rhs,
        crude_rhs,
        epsilon_n,
        sigma_bar2,
        best_model: collection.models()[best.1].id,
    })
}

/// Remainder `R'_n` of the oracle inequality for a collection with complexity
/// index `(M, a)`, i.e. at most `M e^{a d}` models of each dimension `d`, when
/// `d_* <= kappa n`. `bias_ratio` is `||mu - Pi_* mu||^2 / sigma^2`.
pub fn complexity_remainder(
    m_const: f64,
    a: f64,
    kappa: f64,
    beta: f64,
    n: usize,
    bias_ratio: f64,
) -> f64 {
    let ln_3m = math::ln(3.0 * m_const);
    let nf = n as f64;
    ln_3m / beta
        + 1.0 / (2.0 * math::ln(nf))
        + bias_ratio * ((a + 1.0) * kappa + ln_3m / nf) / (beta * (1.0 - kappa))
}

/// `gamma_beta(p) = sqrt(2 + ln(p) / beta)`
pub fn gamma_beta(p: usize, beta: f64) -> Result<f64> {
    if p < 1 || !(beta > 0.0) {
        return Err(domain(format!(
            "need p >= 1 and beta > 0, got p = {p}, beta = {beta}"
        )));
    }
    Ok(math::sqrt(2.0 + math::ln(p as f64) / beta))
}

/// Quadrature and search resolution for [`c_beta_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CBetaOptions {
    /// the Gaussian integral runs over `[-w, w]`
    pub z_half_width: f64,
    /// Simpson step in `z`
    pub z_step: f64,
    /// coarse scan points over `[0, 4 gamma]`
    pub coarse_points: usize,
    /// golden-section tolerance in `x`
    pub x_tol: f64,
}

impl Default for CBetaOptions {
    fn default() -> Self {
        Self {
            z_half_width: 12.0,
            z_step: 1e-3,
            coarse_points: 512,
            x_tol: 1e-6,
        }
    }
}

impl CBetaOptions {
    /// Twice the resolution in every direction.
    pub fn refined(&self) -> Self {
        Self {
            z_half_width: self.z_half_width,
            z_step: self.z_step / 2.0,
            coarse_points: self.coarse_points * 2,
            x_tol: self.x_tol / 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CBeta {
    /// `max(sup ratio, 0.6)`
    pub value: f64,
    /// the supremum before the 0.6 floor
    pub supremum: f64,
    pub argmax: f64,
    pub gamma: f64,
}

/// `c_beta(p)`: the supremum over `x in [0, 4 gamma]` of
/// `E[(x - (x+Z) s_beta(x+Z))^2] / (min(x^2, gamma^2) + gamma^2 / p)`, floored at 0.6.
pub fn c_beta(p: usize, beta: f64) -> Result<f64> {
    Ok(c_beta_with(p, beta, &CBetaOptions::default())?.value)
}

pub fn c_beta_with(p: usize, beta: f64, opts: &CBetaOptions) -> Result<CBeta> {
    if p < 3 {
        return Err(domain(format!("c_beta needs p >= 3, got {p}")));
    }
    let gamma = gamma_beta(p, beta)?;
    let g2 = gamma * gamma;

    // Simpson nodes and weights including the Gaussian density
    let w = opts.z_half_width;
    let mut panels = math::floor(2.0 * w / opts.z_step) as usize;
    if (panels as f64) * opts.z_step < 2.0 * w {
        panels += 1;
    }
    panels += panels % 2;
    let h = 2.0 * w / panels as f64;
    let inv_sqrt_2pi = 1.0 / math::sqrt(2.0 * core::f64::consts::PI);
    let (nodes, weights): (Vec<f64>, Vec<f64>) = (0..=panels)
        .map(|i| {
            let z = -w + i as f64 * h;
            let simpson = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (
                z,
                simpson * h / 3.0 * inv_sqrt_2pi * math::exp(-z * z / 2.0),
            )
        })
        .unzip();

    // s_beta(t) = 1 / (1 + exp(ln p + 2 beta - beta t^2))
    let offset = math::ln(p as f64) + 2.0 * beta;
    let ratio = |x: f64| -> f64 {
        let mut acc = 0.0;
        for (z, wt) in nodes.iter().zip(&weights) {
            let t = x + z;
            let d = x - t * math::logistic_complement(offset - beta * t * t);
            acc += wt * d * d;
        }
        acc / ((x * x).min(g2) + g2 / p as f64)
    };

    let upper = 4.0 * gamma;
    let m = opts.coarse_points.max(3);
    let step = upper / (m - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..m {
        let r = ratio(i as f64 * step);
        if r > best.1 {
            best = (i, r);
        }
    }
    let lo = best.0.saturating_sub(1) as f64 * step;
    let hi = ((best.0 + 1).min(m - 1)) as f64 * step;
    let (x_ref, r_ref) = quad::golden_section_max(ratio, lo, hi, opts.x_tol);
    let (argmax, supremum) = if r_ref > best.1 {
        (x_ref, r_ref)
    } else {
        (best.0 as f64 * step, best.1)
    };
    Ok(CBeta {
        value: supremum.max(0.6),
        supremum,
        argmax,
        gamma,
    })
}

/// A bound of the form `constant * inf_m [...]` together with its minimiser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfimumBound {
    pub value: f64,
    pub best_model: ModelId,
    /// the multiplicative constant applied (`c_beta(p)` or 16)
    pub constant: f64,
}

fn require_orthonormal(collection: &ModelCollection) -> Result<()> {
    let dev = collection.design().gram_check();
    if dev > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(())
}

/// Known-variance bound for the orthonormal shrinkage estimator:
/// `||mu - Pi_* mu||^2 + c_beta(p) inf_m [||Pi_* mu - Pi_m mu||^2 + gamma^2 (|m| + 1) sigma^2]`.
pub fn prop2_bound(
    mu: &[f64],
    collection: &ModelCollection,
    sigma2: f64,
    beta: f64,
) -> Result<InfimumBound> {
    let p = collection.star_dim();
    if p < 3 {
        return Err(domain(format!("need p >= 3, got {p}")));
    }
    let c = c_beta(p, beta)?;
    prop2_bound_with_constant(mu, collection, sigma2, beta, c)
}

/// [`prop2_bound`] with a precomputed `c_beta(p)`.
pub fn prop2_bound_with_constant(
    mu: &[f64],
    collection: &ModelCollection,
    sigma2: f64,
    beta: f64,
    c_beta: f64,
) -> Result<InfimumBound> {
    vector::check_len(mu, collection.n())?;
    require_orthonormal(collection)?;
    if !(0.25..=0.5).contains(&beta) {
        return Err(domain(format!("beta must lie in [1/4, 1/2], got {beta}")));
    }
    let p = collection.star_dim();
    if p < 3 {
        return Err(domain(format!("need p >= 3, got {p}")));
    }
    let g2 = 2.0 + math::ln(p as f64) / beta;
    let star_mu = collection.star().project(mu);
    let star_bias = vector::dist_sq(mu, &star_mu);
    let (inf, best) = infimum(collection, |i| {
        let fit = collection.subspace(i).project(mu);
        let card = collection.models()[i].cardinality() as f64;
        vector::dist_sq(&star_mu, &fit) + g2 * (card + 1.0) * sigma2
    });
    Ok(InfimumBound {
        value: star_bias + c_beta * inf,
        best_model: best,
        constant: c_beta,
    })
}

/// Unknown-variance bound for the orthonormal shrinkage estimator:
/// `16 inf_m [||mu - mu_m||^2 + (b + ln p)(|m| + 1) sbar2 / beta + (2 + b + ln p) sigma^2]`.
pub fn appendix_a2_bound(
    mu: &[f64],
    collection: &ModelCollection,
    sigma2: f64,
    beta: f64,
    b: f64,
) -> Result<InfimumBound> {
    vector::check_len(mu, collection.n())?;
    require_orthonormal(collection)?;
    let p = collection.star_dim();
    let n = collection.n();
    tuning::check_orthonormal_conditions(beta, b, p, n)?;
    let ln_p = math::ln(p as f64);
    let sigma_bar2 = sigma2 + collection.star().residual_norm_sq(mu) / (n - p) as f64;
    let (inf, best) = infimum(collection, |i| {
        let card = collection.models()[i].cardinality() as f64;
        collection.subspace(i).residual_norm_sq(mu)
            + (b + ln_p) * (card + 1.0) * sigma_bar2 / beta
            + (2.0 + b + ln_p) * sigma2
    });
    Ok(InfimumBound {
        value: 16.0 * inf,
        best_model: best,
        constant: 16.0,
    })
}

fn infimum<F: Fn(usize) -> f64>(collection: &ModelCollection, f: F) -> (f64, ModelId) {
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..collection.len() {
        let v = f(i);
        if v < best.0 {
            best = (v, i);
        }
    }
    (best.0, collection.models()[best.1].id)
}

/// `2 / ((1 - a)(N - 2)) exp(-N phi(a))`, which dominates `E[(a/X - 1)_+]`
/// when `N X` is chi-square with `N` degrees of freedom.
pub fn chi2_deviation_bound(dof: usize, a: f64) -> Result<f64> {
    if dof <= 2 {
        return Err(domain(format!("N must exceed 2, got {dof}")));
    }
    let ph = phi(a)?;
    let nf = dof as f64;
    Ok(2.0 / ((1.0 - a) * (nf - 2.0)) * math::exp(-nf * ph))
}

/// `P(X <= 1/t) <= exp(-N phi(1/t))` for `t > 1`.
pub fn chi2_lower_tail_bound(dof: usize, t: f64) -> Result<f64> {
    if dof == 0 || !(t > 1.0) {
        return Err(domain(format!(
            "need N >= 1 and t > 1, got N = {dof}, t = {t}"
        )));
    }
    Ok(math::exp(-(dof as f64) * phi(1.0 / t)?))
}
