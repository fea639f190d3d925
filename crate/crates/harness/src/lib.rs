//! Monte Carlo harness, scenario files, CSV/SVG output and the `lsmix`
//! command line for [`lsmix_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod formats;
pub mod illustrate;
pub mod mc;
pub mod rng;
pub mod scenario;
pub mod signal;

pub use error::{HarnessError, Result};
pub use illustrate::{illustration_risk, run_illustration, Illustration};
pub use mc::{mc_risk, McResult};
pub use scenario::Scenario;
pub use signal::signal_section5;
