//! Elementary functions and numerically careful reductions.
//!
//! The crate is `no_std`, so transcendental functions come from `libm`.

use alloc::vec::Vec;

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln C(n, k)` through log-gamma; exact zero at the edges.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    let (n, k) = (n as f64, k as f64);
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// `1 / (1 + exp(t))` without overflow for large `|t|`.
#[inline]
pub fn logistic_complement(t: f64) -> f64 {
    if t > 0.0 {
        let e = exp(-t);
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + exp(t))
    }
}

/// `ln(exp(a) + exp(b))`, tolerating `-inf` operands.
#[inline]
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + ln_1p(exp(lo - hi))
}

/// Log-sum-exp with max subtraction. Empty input gives `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || !max.is_finite() {
        return max;
    }
    let shifted: Vec<f64> = values.iter().map(|v| exp(v - max)).collect();
    max + ln(pairwise_sum(&shifted))
}

/// Normalised softmax of log-weights; the largest exponent maps to `exp(0)`.
pub fn softmax(log_weights: &[f64]) -> (Vec<f64>, f64) {
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return (alloc::vec![f64::NAN; log_weights.len()], max);
    }
    // normalise by the shifted sum rather than exp(v - lse) so the weights sum
    // to one within a few ulps even when lse is large
    let mut w: Vec<f64> = log_weights.iter().map(|v| exp(v - max)).collect();
    let total = pairwise_sum(&w);
    w.iter_mut().for_each(|x| *x /= total);
    (w, max + ln(total))
}

/// Pairwise (cascade) summation; the result depends only on the slice order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
