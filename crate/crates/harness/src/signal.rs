//! Test signals.

use std::str::FromStr;

use lsmix_core::approx::SampledFunction;

use crate::error::HarnessError;

/// `f(x) = 0.7 cos x + cos 7x + 1.5 sin x + 0.8 sin 5x + 0.9 sin 8x`
pub fn illustration_function(x: f64) -> f64 {
    0.7 * x.cos() + (7.0 * x).cos() + 1.5 * x.sin() + 0.8 * (5.0 * x).sin() + 0.9 * (8.0 * x).sin()
}

/// The illustration signal sampled at `x_i = i / n`, `i = 1..n`.
pub fn signal_section5(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| illustration_function(i as f64 / n as f64))
        .collect()
}

/// Bounded-variation test functions on `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BvFunction {
    /// `x`
    Identity,
    /// indicator of `[1/3, 1)`
    Step,
    /// four jumps of unequal size and sign
    Staircase,
}

impl BvFunction {
    pub const ALL: [BvFunction; 3] = [
        BvFunction::Identity,
        BvFunction::Step,
        BvFunction::Staircase,
    ];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            BvFunction::Identity => x,
            BvFunction::Step => {
                if x >= 1.0 / 3.0 {
                    1.0
                } else {
                    0.0
                }
            }
            BvFunction::Staircase => {
                const JUMPS: [(f64, f64); 4] =
                    [(0.15, 1.0), (0.4, -0.5), (0.62, 2.0), (0.9, -1.25)];
                JUMPS
                    .iter()
                    .filter(|(at, _)| x >= *at)
                    .map(|(_, h)| h)
                    .sum()
            }
        }
    }

    /// Samples at `x_i = (i - 1) / n`.
    pub fn sample(self, n: usize) -> Result<SampledFunction, HarnessError> {
        Ok(SampledFunction::sample(n, |x| self.eval(x))?)
    }

    pub fn name(self) -> &'static str {
        match self {
            BvFunction::Identity => "identity",
            BvFunction::Step => "step",
            BvFunction::Staircase => "staircase",
        }
    }
}

impl FromStr for BvFunction {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "identity" | "x" => Ok(BvFunction::Identity),
            "step" => Ok(BvFunction::Step),
            "staircase" => Ok(BvFunction::Staircase),
            other => Err(HarnessError::Invalid(format!(
                "unknown function `{other}` (expected identity, step or staircase)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn illustration_signal_values() {
        assert!((illustration_function(0.0) - 1.7).abs() < 1e-15);
        let s = signal_section5(60);
        assert_eq!(s.len(), 60);
        assert_eq!(s[59], illustration_function(1.0));
        assert!(s.iter().all(|v| v.abs() <= 4.9));
    }

    #[test]
    fn bv_variations() {
        let n = 256;
        let v = |f: BvFunction| f.sample(n).unwrap().total_variation();
        assert!((v(BvFunction::Identity) - 255.0 / 256.0).abs() < 1e-12);
        assert_eq!(v(BvFunction::Step), 1.0);
        assert!((v(BvFunction::Staircase) - 4.75).abs() < 1e-12);
        assert_eq!("step".parse::<BvFunction>().unwrap(), BvFunction::Step);
        assert!("ramp".parse::<BvFunction>().is_err());
    }
}
