//! Haar approximation of sampled functions of bounded variation: coefficients,
//! the linear approximant `f_J`, the compressed approximant that keeps only the
//! largest fine-scale coefficients, and the level-wise coefficient bound.

use alloc::format;
use alloc::vec::Vec;

use crate::collections::{dyadic_level, haar_vector};
use crate::design::InnerProduct;
use crate::error::{domain, Result};
use crate::math;
use crate::vector;

/// `sum_{p >= 1} p^3 2^{-p/2 + 1}`, the constant of the compressed error bound.
pub const COMPRESSION_CONSTANT: f64 = 831.778_787_337_689_9;

/// Samples `f(x_1), ..., f(x_n)` on a dyadic grid together with their total variation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    samples: Vec<f64>,
    total_variation: f64,
    level: u32,
}

impl SampledFunction {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let level = dyadic_level(samples.len())
            .filter(|&j| j >= 1)
            .ok_or_else(|| {
                domain(format!(
                    "sample count {} is not a power of two >= 2",
                    samples.len()
                ))
            })?;
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(crate::Error::NonFinite(i));
        }
        let diffs: Vec<f64> = samples.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        Ok(Self {
            total_variation: math::pairwise_sum(&diffs),
            samples,
            level,
        })
    }

    /// Samples `f` at `x_i = (i - 1) / n`, `i = 1..n`.
    pub fn sample<F: Fn(f64) -> f64>(n: usize, f: F) -> Result<Self> {
        Self::new((0..n).map(|i| f(i as f64 / n as f64)).collect())
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    /// `J_n = log2(n)`
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Discrete total variation `sum |f(x_{i+1}) - f(x_i)|`.
    pub fn total_variation(&self) -> f64 {
        self.total_variation
    }

    /// `||f - g||_n`
    pub fn distance(&self, other: &SampledFunction) -> f64 {
        math::sqrt(vector::dist_sq(&self.samples, &other.samples) / self.n() as f64)
    }
}

/// Haar coefficients `c_{j,k} = <f, v_{j,k}>_n` for `j = 0..=J_n`.
///
/// `levels[j][k]`; level 0 holds the mean, level `j >= 1` holds `2^{j-1}` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarCoefficients {
    n: usize,
    levels: Vec<Vec<f64>>,
}

impl HaarCoefficients {
    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn get(&self, j: u32, k: usize) -> Option<f64> {
        self.levels.get(j as usize).and_then(|l| l.get(k)).copied()
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// `sum_{j,k} c_{j,k}^2`
    pub fn energy(&self) -> f64 {
        self.levels.iter().flatten().map(|c| c * c).sum()
    }

    /// Synthesis `sum c_{j,k} v_{j,k}` over the entries for which `keep` is true.
    pub fn synthesize<K: Fn(u32, usize) -> bool>(&self, keep: K) -> Vec<f64> {
        let n = self.n;
        let mut out = alloc::vec![0.0; n];
        for (j, level) in self.levels.iter().enumerate() {
            let j = j as u32;
            for (k, c) in level.iter().enumerate() {
                if *c != 0.0 && keep(j, k) {
                    vector::axpy(*c, &haar_vector(n, j, k), &mut out);
                }
            }
        }
        out
    }
}

pub fn haar_coefficients(f: &SampledFunction) -> HaarCoefficients {
    let n = f.n();
    let x = f.samples();
    // prefix[i] = x_0 + ... + x_{i-1}
    let mut prefix = alloc::vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + x[i];
    }
    let block = |a: usize, b: usize| prefix[b] - prefix[a];
    let mut levels = Vec::with_capacity(f.level() as usize + 1);
    levels.push(alloc::vec![
        InnerProduct::Normalized.dot(x, &alloc::vec![1.0; n])
    ]);
    for j in 1..=f.level() {
        let half = n >> j;
        let scale = math::powf(2.0, (j as f64 - 1.0) / 2.0) / n as f64;
        let level = (0..1usize << (j - 1))
            .map(|k| {
                let s = 2 * k * half;
                scale * (block(s + half, s + 2 * half) - block(s, s + half))
            })
            .collect();
        levels.push(level);
    }
    HaarCoefficients { n, levels }
}

fn check_level(j: u32, lo: u32, f: &SampledFunction) -> Result<()> {
    if j < lo || j > f.level() {
        return Err(domain(format!("level {j} outside {lo}..={}", f.level())));
    }
    Ok(())
}

/// `f_J`: the projection onto levels `0..=J`.
pub fn linear_approx(f: &SampledFunction, level: u32) -> Result<SampledFunction> {
    check_level(level, 0, f)?;
    let coeffs = haar_coefficients(f);
    SampledFunction::new(coeffs.synthesize(|j, _| j <= level))
}

/// `K_{j,J} = floor((j - J + 1)^{-3} 2^{J - 2})` for `1 <= J <= j`.
pub fn compressed_keep_count(j: u32, level: u32) -> usize {
    let d = (j - level + 1) as f64;
    math::floor(math::powf(2.0, level as f64 - 2.0) / (d * d * d)) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedApprox {
    pub function: SampledFunction,
    /// number of Haar coefficients retained
    pub kept: usize,
}

/// Keeps every coefficient on levels `< J` and the `K_{j,J}` largest `|c_{j,k}|`
/// on each level `j >= J` (ties go to the smaller `k`).
pub fn compressed_approx(f: &SampledFunction, level: u32) -> Result<CompressedApprox> {
    check_level(level, 1, f)?;
    let coeffs = haar_coefficients(f);
    let mut keep: Vec<Vec<bool>> = coeffs
        .levels()
        .iter()
        .map(|l| alloc::vec![false; l.len()])
        .collect();
    for (j, flags) in keep.iter_mut().enumerate() {
        let j = j as u32;
        if j < level {
            flags.iter_mut().for_each(|f| *f = true);
            continue;
        }
        let values = &coeffs.levels()[j as usize];
        let mut order: Vec<usize> = (0..values.len()).collect();
        // stable sort keeps smaller k first among equal magnitudes
        order.sort_by(|a, b| values[*b].abs().total_cmp(&values[*a].abs()));
        for &k in order.iter().take(compressed_keep_count(j, level)) {
            flags[k] = true;
        }
    }
    let kept = keep.iter().flatten().filter(|k| **k).count();
    let samples = coeffs.synthesize(|j, k| keep[j as usize][k]);
    Ok(CompressedApprox {
        function: SampledFunction::new(samples)?,
        kept,
    })
}

/// `2 V(f) 2^{-J/2}`
pub fn linear_error_bound(total_variation: f64, level: u32) -> f64 {
    2.0 * total_variation * math::powf(2.0, -(level as f64) / 2.0)
}

/// `c V(f) 2^{-J}`
pub fn compressed_error_bound(total_variation: f64, level: u32) -> f64 {
    COMPRESSION_CONSTANT * total_variation * math::powf(2.0, -(level as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCheck {
    pub level: u32,
    /// `sum_k |c_{j,k}|`
    pub abs_sum: f64,
    /// `2^{-(j+1)/2} V(f)`
    pub bound: f64,
    pub holds: bool,
}

/// Checks `sum_k |c_{j,k}| <= 2^{-(j+1)/2} V(f)` on every level `j >= 1`.
pub fn bv_coefficient_bound_check(f: &SampledFunction) -> Vec<LevelCheck> {
    let coeffs = haar_coefficients(f);
    let v = f.total_variation();
    coeffs
        .levels()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, level)| {
            let abs_sum: f64 = level.iter().map(|c| c.abs()).sum();
            let bound = math::powf(2.0, -((j as f64) + 1.0) / 2.0) * v;
            LevelCheck {
                level: j as u32,
                abs_sum,
                // rounding slack for exactly saturated levels
                holds: abs_sum <= bound * (1.0 + 1e-12) + 1e-15,
                bound,
            }
        })
        .collect()
}
