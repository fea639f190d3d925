//! Builders for the model collections: nested and subset collections over a
//! design, the Haar family on a dyadic grid, Besov compression descriptors and
//! the trigonometric design of the numerical illustration.

use alloc::format;
use alloc::vec::Vec;

use crate::design::{DesignFamily, InnerProduct};
use crate::error::{domain, Error, Result};
use crate::math;
use crate::model::{Model, ModelCollection};
use crate::shrinkage::{self, ShrinkResult};
use crate::vector::{self, Vector};

/// Largest number of models any enumerating builder will produce.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

fn choose_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of subsets of `{0..p}` with at most `q` elements.
pub fn subset_count(p: usize, q: usize) -> u128 {
    (0..=q.min(p))
        .map(|d| choose_u128(p as u64, d as u64))
        .sum()
}

/// All subsets of `{0..p}` of size `<= q`, by size and then lexicographically.
fn subsets_up_to(p: usize, q: usize) -> Result<Vec<Vec<usize>>> {
    let count = subset_count(p, q);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    for d in 0..=q.min(p) {
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            out.push(idx.clone());
            // advance to the next d-combination
            let mut i = d;
            while i > 0 && idx[i - 1] == p - d + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for k in i..d {
                idx[k] = idx[k - 1] + 1;
            }
        }
    }
    Ok(out)
}

/// Nested models `S_0 = {0} ⊂ S_1 ⊂ ... ⊂ S_p` with
/// `pi_m = (e^a - 1) / (e^a - e^{-a p}) e^{-a m}` and `L_m = m / 2`.
pub fn ordered_linear(design: DesignFamily, alpha: f64) -> Result<ModelCollection> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    let p = design.p();
    let ln_norm = math::ln(math::exp(alpha) - 1.0)
        - math::ln(math::exp(alpha) - math::exp(-alpha * p as f64));
    let models = (0..=p)
        .map(|m| {
            let prior = math::exp(ln_norm - alpha * m as f64);
            Model::new(m, (0..m).collect(), prior, m as f64 / 2.0)
        })
        .collect::<Result<Vec<_>>>()?;
    ModelCollection::new(design, models, (0..p).collect())
}

/// `H_q = sum_{d=0}^{q} 1 / (d + 1)`
pub fn harmonic(q: usize) -> f64 {
    let terms: Vec<f64> = (0..=q).map(|d| 1.0 / (d as f64 + 1.0)).collect();
    math::pairwise_sum(&terms)
}

/// All subsets of size at most `q` with `pi_m = [C(p, |m|) (|m| + 1) H_q]^{-1}`
/// and `L_m = |m| / 2`.
pub fn unordered_linear(design: DesignFamily, q: usize) -> Result<ModelCollection> {
    let p = design.p();
    if q > p {
        return Err(domain(format!("q = {q} exceeds p = {p}")));
    }
    let h = harmonic(q);
    let models = subsets_up_to(p, q)?
        .into_iter()
        .enumerate()
        .map(|(id, cols)| {
            let d = cols.len();
            let prior = 1.0 / (choose_u128(p as u64, d as u64) as f64 * (d as f64 + 1.0) * h);
            Model::new(id, cols, prior, d as f64 / 2.0)
        })
        .collect::<Result<Vec<_>>>()?;
    ModelCollection::new(design, models, (0..p).collect())
}

/// Every subset of the columns with `pi_m = (1 + p^{-a})^{-p} p^{-a |m|}` and `L_m = b |m|`.
pub fn all_subsets(design: DesignFamily, alpha: f64, b: f64) -> Result<ModelCollection> {
    if !(alpha > 0.0) || !(b >= 0.0) {
        return Err(domain(format!(
            "need alpha > 0 and b >= 0, got {alpha}, {b}"
        )));
    }
    let p = design.p();
    let ln_p = math::ln(p as f64);
    let ln_norm = -(p as f64) * math::ln_1p(math::exp(-alpha * ln_p));
    let models = subsets_up_to(p, p)?
        .into_iter()
        .enumerate()
        .map(|(id, cols)| {
            let d = cols.len() as f64;
            Model::new(id, cols, math::exp(ln_norm - alpha * d * ln_p), b * d)
        })
        .collect::<Result<Vec<_>>>()?;
    ModelCollection::new(design, models, (0..p).collect())
}

/// Every subset of the columns with `pi_m = [(p + 1) C(p, |m|)]^{-1}` and `L_m = b |m|`.
pub fn binomial_subsets(design: DesignFamily, b: f64) -> Result<ModelCollection> {
    if !(b >= 0.0) {
        return Err(domain(format!("b must be non-negative, got {b}")));
    }
    let p = design.p();
    let models = subsets_up_to(p, p)?
        .into_iter()
        .enumerate()
        .map(|(id, cols)| {
            let d = cols.len();
            let prior = 1.0 / ((p as f64 + 1.0) * choose_u128(p as u64, d as u64) as f64);
            Model::new(id, cols, prior, b * d as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    ModelCollection::new(design, models, (0..p).collect())
}

/// Haar index `(j, k)`: level `j`, position `k` in `0..max(1, 2^{j-1})`.
pub type HaarIndex = (u32, usize);

/// `log2(n)` when `n` is a power of two.
pub fn dyadic_level(n: usize) -> Option<u32> {
    if n.is_power_of_two() {
        Some(n.trailing_zeros())
    } else {
        None
    }
}

/// Sampled Haar function `v_{j,k}` on `n` points.
///
/// `v_{0,0}` is the constant one; for `j >= 1` the vector is `2^{(j-1)/2}` on the
/// right half of block `k` at scale `n 2^{-j+1}` and minus that on the left half.
pub fn haar_vector(n: usize, j: u32, k: usize) -> Vec<f64> {
    let mut v = alloc::vec![0.0; n];
    if j == 0 {
        v.iter_mut().for_each(|x| *x = 1.0);
        return v;
    }
    let half = n >> j; // 2^{-j} n
    let scale = math::powf(2.0, (j as f64 - 1.0) / 2.0);
    let start = 2 * k * half;
    for x in &mut v[start..start + half] {
        *x = -scale;
    }
    for x in &mut v[start + half..start + 2 * half] {
        *x = scale;
    }
    v
}

/// Indices of levels `0..=max_level`.
pub fn haar_indices(max_level: u32) -> Vec<HaarIndex> {
    let mut out = alloc::vec![(0, 0)];
    for j in 1..=max_level {
        out.extend((0..1usize << (j - 1)).map(|k| (j, k)));
    }
    out
}

/// Haar vectors on levels `0..=J_n - 1`, orthonormal for `<x, y>_n = (1/n) sum x_i y_i`.
#[derive(Debug, Clone)]
pub struct HaarFamily {
    n: usize,
    j_star: u32,
    indices: Vec<HaarIndex>,
    vectors: Vec<Vector>,
}

impl HaarFamily {
    pub fn new(n: usize) -> Result<Self> {
        let j_n = dyadic_level(n)
            .filter(|&j| j >= 3)
            .ok_or_else(|| domain(format!("n must be a power of two >= 8, got {n}")))?;
        let j_star = j_n - 1;
        let indices = haar_indices(j_star);
        let vectors = indices
            .iter()
            .map(|&(j, k)| Vector::new(haar_vector(n, j, k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            j_star,
            indices,
            vectors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `J^* = J_n - 1`
    pub fn j_star(&self) -> u32 {
        self.j_star
    }

    pub fn indices(&self) -> &[HaarIndex] {
        &self.indices
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn vector(&self, index: HaarIndex) -> Option<&Vector> {
        self.indices
            .iter()
            .position(|i| *i == index)
            .map(|pos| &self.vectors[pos])
    }

    /// The family as a design under the normalised inner product.
    pub fn to_design(&self) -> Result<DesignFamily> {
        DesignFamily::new(self.vectors.clone(), InnerProduct::Normalized)
    }
}

pub fn haar_family(n: usize) -> Result<HaarFamily> {
    HaarFamily::new(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarEstimate {
    /// coefficients `Z_{j,k} = <Y, v_{j,k}>_n` and their shrinkage, in family order
    pub shrink: ShrinkResult,
    pub sigma2_hat: f64,
    pub mu_hat: Vector,
}

/// Shrinkage estimator on the Haar family with `p = n/2`, `alpha = b = 1`:
/// `c = exp(n beta Z^2 / s2) / (e n / 2 + exp(n beta Z^2 / s2))`, where
/// `s2 = 2 (<Y, Y>_n - sum Z^2)`.
pub fn haar_estimator(family: &HaarFamily, y: &[f64], beta: f64) -> Result<HaarEstimate> {
    let n = family.n();
    vector::check_len(y, n)?;
    let ip = InnerProduct::Normalized;
    let z: Vec<f64> = family.vectors().iter().map(|v| ip.dot(y, v)).collect();
    let sigma2_hat = 2.0 * (ip.norm_sq(y) - z.iter().map(|z| z * z).sum::<f64>());
    if !(sigma2_hat > 0.0) {
        return Err(Error::DegenerateResidual);
    }
    // Euclidean coefficients are sqrt(n) times the normalised ones
    let root_n = math::sqrt(n as f64);
    let z_euclid: Vec<f64> = z.iter().map(|z| z * root_n).collect();
    let euclid = shrinkage::shrink_unknown_variance(&z_euclid, sigma2_hat, beta, 1.0, 1.0)?;
    let shrunk: Vec<f64> = euclid
        .coefficients
        .iter()
        .zip(&z)
        .map(|(c, z)| c * z)
        .collect();
    let mut mu_hat = alloc::vec![0.0; n];
    for (s, v) in shrunk.iter().zip(family.vectors()) {
        vector::axpy(*s, v, &mut mu_hat);
    }
    Ok(HaarEstimate {
        shrink: ShrinkResult {
            coefficients: euclid.coefficients,
            shrunk,
            z,
            log_odds: euclid.log_odds,
        },
        sigma2_hat,
        mu_hat: Vector::new(mu_hat)?,
    })
}

/// Summary of the compression sub-collection `M_J` used for Besov adaptation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovDescriptor {
    /// the level `J`
    pub level: u32,
    /// `sum_{j<J} 2^j + sum_{j=J}^{J_*} floor(2^J / (j - J + 1)^3)`
    pub dim_bound: f64,
    /// `L_m = 1.1 * 2^J`
    pub weight_l: f64,
    /// `ln pi_m`, normalised so the masses over `J = 1..J_*` sum to one
    pub log_prior: f64,
    /// `ln |M_J|`
    pub cardinality_log: f64,
}

/// `J_* = floor(log2(kappa n / 2))`
pub fn besov_j_star(kappa: f64, n: usize) -> Result<u32> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(domain(format!("kappa must lie in (0, 1), got {kappa}")));
    }
    let x = kappa * n as f64 / 2.0;
    if x < 2.0 {
        return Err(domain(format!("kappa n / 2 = {x} leaves no level J >= 1")));
    }
    Ok(math::floor(math::ln(x) / core::f64::consts::LN_2) as u32)
}

fn besov_keep(level: u32, j: u32) -> u64 {
    let d = (j - level + 1) as f64;
    math::floor(math::powf(2.0, level as f64) / (d * d * d)) as u64
}

pub fn besov_descriptor(level: u32, j_star: u32) -> Result<BesovDescriptor> {
    if level < 1 || level > j_star {
        return Err(domain(format!("J = {level} outside 1..={j_star}")));
    }
    let two_j = math::powf(2.0, level as f64);
    let mut dim_bound = two_j - 1.0;
    let mut cardinality_log = 0.0;
    for j in level..=j_star {
        let keep = besov_keep(level, j);
        dim_bound += keep as f64;
        cardinality_log += math::ln_choose(1u64 << j, keep);
    }
    // pi_m = [2^J (1 - 2^{-J_*}) |M_J|]^{-1}
    let normaliser = math::ln_1p(-math::powf(2.0, -(j_star as f64)));
    let log_prior = -(level as f64 * core::f64::consts::LN_2 + normaliser + cardinality_log);
    Ok(BesovDescriptor {
        level,
        dim_bound,
        weight_l: 1.1 * two_j,
        log_prior,
        cardinality_log,
    })
}

/// Descriptors for every `J = 1..=J_*`.
pub fn besov_descriptors(kappa: f64, n: usize) -> Result<Vec<BesovDescriptor>> {
    let j_star = besov_j_star(kappa, n)?;
    (1..=j_star)
        .map(|level| besov_descriptor(level, j_star))
        .collect()
}

/// Number of columns in the trigonometric design.
pub const FOURIER_COLUMNS: usize = 41;

/// Sines at frequencies 1..20, the constant, then cosines at frequencies 1..20,
/// sampled at `x_i = i / n` and scaled to unit Euclidean norm.
pub fn fourier_design(n: usize) -> Result<DesignFamily> {
    if n < FOURIER_COLUMNS + 1 {
        return Err(domain(format!("n must be at least 42, got {n}")));
    }
    let nf = n as f64;
    let two_pi = 2.0 * core::f64::consts::PI;
    let (s2, s1) = (math::sqrt(2.0 / nf), math::sqrt(1.0 / nf));
    let xs: Vec<f64> = (1..=n).map(|i| i as f64 / nf).collect();
    let mut cols = Vec::with_capacity(FOURIER_COLUMNS);
    for j in 1..=20 {
        cols.push(
            xs.iter()
                .map(|x| s2 * math::sin(two_pi * j as f64 * x))
                .collect(),
        );
    }
    cols.push(alloc::vec![s1; n]);
    for j in 1..=20 {
        cols.push(
            xs.iter()
                .map(|x| s2 * math::cos(two_pi * j as f64 * x))
                .collect(),
        );
    }
    let cols = cols
        .into_iter()
        .map(Vector::new)
        .collect::<Result<Vec<_>>>()?;
    DesignFamily::new(cols, InnerProduct::Euclidean)
}
