//! Exponentially weighted mixture of least-squares estimators.
//!
//! In the unknown-variance mode each model receives weight
//! `w_m ∝ pi_m exp(beta ||mu_m||^2 / s2 - L_m)` where `s2` is the residual
//! variance against the largest model `S_*`. The known-variance mode uses
//! `w_m ∝ pi_m exp(-beta [||Y - mu_m||^2 / sigma^2 + 2 dim(S_m) - n])`.
//! All exponents are normalised with log-sum-exp.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::math;
use crate::model::{Model, ModelCollection, ModelId};
use crate::vector::{self, Vector};

/// How `L_m` is assigned to each model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LRule {
    /// `dim(S_m) / 2`, using the actual rank
    HalfDim,
    /// the `weight_l` stored on each model
    PerModel,
    /// `b |m|`
    BTimesCardinality(f64),
}

impl LRule {
    pub fn value(&self, model: &Model, dim: usize) -> f64 {
        match *self {
            LRule::HalfDim => dim as f64 / 2.0,
            LRule::PerModel => model.weight_l,
            LRule::BTimesCardinality(b) => b * model.cardinality() as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarianceMode {
    ResidualEstimate,
    Known(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixConfig {
    pub beta: f64,
    pub l_rule: LRule,
    pub variance: VarianceMode,
}

impl MixConfig {
    pub fn new(beta: f64, l_rule: LRule, variance: VarianceMode) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(domain(format!("beta must be positive, got {beta}")));
        }
        if let VarianceMode::Known(s2) = variance {
            if !(s2 > 0.0) || !s2.is_finite() {
                return Err(domain(format!("known variance must be positive, got {s2}")));
            }
        }
        if let LRule::BTimesCardinality(b) = l_rule {
            if !(b >= 0.0) || !b.is_finite() {
                return Err(domain(format!("b must be non-negative, got {b}")));
            }
        }
        Ok(Self {
            beta,
            l_rule,
            variance,
        })
    }

    pub fn residual(beta: f64, l_rule: LRule) -> Result<Self> {
        Self::new(beta, l_rule, VarianceMode::ResidualEstimate)
    }
}

/// Exponent used for the unknown-variance weights. Both give the same weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exponent {
    /// `beta ||mu_m||^2 / s2 - L_m`
    #[default]
    ProjectionNorm,
    /// `-beta ||Pi_* Y - mu_m||^2 / s2 - L_m`
    StarDistance,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    /// models whose selected columns were linearly dependent
    pub rank_deficient: Vec<ModelId>,
    /// models with weight above `1e-12`
    pub effective_models: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixResult {
    pub mu_hat: Vector,
    /// weights in collection order
    pub weights: Vec<f64>,
    pub model_ids: Vec<ModelId>,
    /// `s2` in residual mode, the supplied `sigma^2` in known mode
    pub sigma2_hat: f64,
    /// `ln Z`, the log normaliser of the weights
    pub log_partition: f64,
    pub diagnostics: Diagnostics,
}

impl MixResult {
    pub fn weight_of(&self, id: ModelId) -> Option<f64> {
        self.model_ids
            .iter()
            .position(|m| *m == id)
            .map(|i| self.weights[i])
    }
}

/// `||Y - Pi_* Y||^2 / N_*` with `N_* = n - dim(S_*)`.
pub fn residual_variance(y: &[f64], collection: &ModelCollection) -> Result<f64> {
    vector::check_len(y, collection.n())?;
    Ok(collection.star().residual_norm_sq(y) / collection.n_star() as f64)
}

pub fn mix(y: &[f64], collection: &ModelCollection, config: &MixConfig) -> Result<MixResult> {
    mix_with(y, collection, config, Exponent::default())
}

/// [`mix`] with an explicit choice of exponent for the unknown-variance mode.
pub fn mix_with(
    y: &[f64],
    collection: &ModelCollection,
    config: &MixConfig,
    exponent: Exponent,
) -> Result<MixResult> {
    vector::check_len(y, collection.n())?;
    if collection.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let n = collection.n() as f64;
    let beta = config.beta;
    let fits: Vec<Vec<f64>> = (0..collection.len())
        .map(|i| collection.subspace(i).project(y))
        .collect();

    let (sigma2, log_terms): (f64, Vec<f64>) = match config.variance {
        VarianceMode::ResidualEstimate => {
            let s2 = residual_variance(y, collection)?;
            if !(s2 > 0.0) {
                return Err(Error::DegenerateResidual);
            }
            let star_fit = match exponent {
                Exponent::StarDistance => Some(collection.star().project(y)),
                Exponent::ProjectionNorm => None,
            };
            let terms = collection
                .models()
                .iter()
                .zip(&fits)
                .enumerate()
                .map(|(i, (m, fit))| {
                    let l = config.l_rule.value(m, collection.dim(i));
                    let energy = match &star_fit {
                        None => beta * vector::norm_sq(fit) / s2,
                        Some(star) => -beta * vector::dist_sq(star, fit) / s2,
                    };
                    math::ln(m.prior) + energy - l
                })
                .collect();
            (s2, terms)
        }
        VarianceMode::Known(s2) => {
            let terms = collection
                .models()
                .iter()
                .zip(&fits)
                .enumerate()
                .map(|(i, (m, fit))| {
                    let risk = vector::dist_sq(y, fit) / s2 + 2.0 * collection.dim(i) as f64 - n;
                    math::ln(m.prior) - beta * risk
                })
                .collect();
            (s2, terms)
        }
    };

    let (weights, log_partition) = math::softmax(&log_terms);
    let mut mu_hat = alloc::vec![0.0; collection.n()];
    let mut column = Vec::with_capacity(fits.len());
    for (i, out) in mu_hat.iter_mut().enumerate() {
        column.clear();
        column.extend(weights.iter().zip(&fits).map(|(w, f)| w * f[i]));
        *out = math::pairwise_sum(&column);
    }

    let diagnostics = Diagnostics {
        rank_deficient: collection
            .models()
            .iter()
            .enumerate()
            .filter(|(i, _)| collection.subspace(*i).is_rank_deficient())
            .map(|(_, m)| m.id)
            .collect(),
        effective_models: weights.iter().filter(|w| **w > 1e-12).count(),
    };
    Ok(MixResult {
        mu_hat: Vector::from_raw(mu_hat),
        weights,
        model_ids: collection.models().iter().map(|m| m.id).collect(),
        sigma2_hat: sigma2,
        log_partition,
        diagnostics,
    })
}
