//! Exponentially weighted mixtures of least-squares estimators for Gaussian
//! regression `Y = mu + sigma * eps` when `sigma` is unknown.
//!
//! Each candidate model is a linear subspace spanned by columns of a design.
//! The mixture weights every projection estimator by its prior mass and by an
//! exponential of its fitted energy measured against a residual variance
//! estimate, so no knowledge of `sigma` is needed. For orthonormal designs with
//! all subset models the mixture collapses to a coordinatewise shrinkage rule,
//! see [`shrinkage`].
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approx;
pub mod bounds;
pub mod collections;
pub mod design;
mod error;
pub mod math;
pub mod mixer;
pub mod model;
pub mod quad;
pub mod shrinkage;
pub mod tuning;
pub mod vector;

pub use design::{DesignFamily, InnerProduct};
pub use error::{Error, Result};
pub use mixer::{mix, residual_variance, LRule, MixConfig, MixResult, VarianceMode};
pub use model::{Model, ModelCollection, ModelId};
pub use vector::Vector;
