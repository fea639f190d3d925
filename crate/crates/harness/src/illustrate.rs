//! The Fourier-basis illustration: `n = 60`, 41 trigonometric columns,
//! `alpha = b = 1`, `beta = 1/3`, unknown variance.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use lsmix_core::collections::{fourier_design, FOURIER_COLUMNS};
use lsmix_core::design::DesignFamily;
use lsmix_core::mixer::residual_variance;
use lsmix_core::shrinkage::shrink_unknown_variance;
use lsmix_core::vector::dist_sq;
use lsmix_core::{Model, ModelCollection};

use crate::error::Result;
use crate::formats::{svg_plot, write_csv, write_indexed_csv, Series};
use crate::mc::{mean_and_se, simulate};
use crate::rng::{normal_vector, rep_rng};
use crate::signal::{illustration_function, signal_section5};

pub const ILLUSTRATION_N: usize = 60;
pub const ILLUSTRATION_BETA: f64 = 1.0 / 3.0;
pub const ILLUSTRATION_ALPHA: f64 = 1.0;
pub const ILLUSTRATION_B: f64 = 1.0;
/// index of the constant column
const CONSTANT_COLUMN: usize = 20;

#[derive(Debug, Clone)]
pub struct Illustration {
    pub x: Vec<f64>,
    pub mu: Vec<f64>,
    pub y: Vec<f64>,
    /// `Pi_* Y`, the 41-dimensional least-squares fit
    pub projection: Vec<f64>,
    pub mu_hat: Vec<f64>,
    /// `Z_j = <Y, v_j>`
    pub z: Vec<f64>,
    pub shrinkage: Vec<f64>,
    /// `1 - c_j`, resolvable where `c_j` rounds to 1
    pub shrinkage_complement: Vec<f64>,
    pub sigma2_hat: f64,
    /// `a_0, ..., a_20`
    pub a_hat: Vec<f64>,
    /// `b_1, ..., b_20`
    pub b_hat: Vec<f64>,
    pub gram_deviation: f64,
}

impl Illustration {
    /// `a_0 + sum a_j cos(2 pi j x) + sum b_j sin(2 pi j x)`
    pub fn fitted(&self, x: f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * x;
        let mut v = self.a_hat[0];
        for j in 1..=20 {
            let jw = j as f64 * w;
            v += self.a_hat[j] * jw.cos() + self.b_hat[j - 1] * jw.sin();
        }
        v
    }

    pub fn loss(&self) -> f64 {
        dist_sq(&self.mu_hat, &self.mu)
    }

    pub fn projection_loss(&self) -> f64 {
        dist_sq(&self.projection, &self.mu)
    }
}

struct Setup {
    design: DesignFamily,
    star: ModelCollection,
    mu: Vec<f64>,
}

fn setup() -> Result<Setup> {
    let design = fourier_design(ILLUSTRATION_N)?;
    let all: Vec<usize> = (0..FOURIER_COLUMNS).collect();
    let star = ModelCollection::new(
        design.clone(),
        vec![Model::new(0, all.clone(), 1.0, 0.0)?],
        all,
    )?;
    Ok(Setup {
        design,
        star,
        mu: signal_section5(ILLUSTRATION_N),
    })
}

struct Fit {
    z: Vec<f64>,
    shrinkage: Vec<f64>,
    complement: Vec<f64>,
    sigma2_hat: f64,
    mu_hat: Vec<f64>,
    projection: Vec<f64>,
}

fn fit(s: &Setup, y: &[f64]) -> Result<Fit> {
    let z = s.design.coefficients(y)?;
    let sigma2_hat = residual_variance(y, &s.star)?;
    let shrink = shrink_unknown_variance(
        &z,
        sigma2_hat,
        ILLUSTRATION_BETA,
        ILLUSTRATION_ALPHA,
        ILLUSTRATION_B,
    )?;
    let mu_hat = s.design.combine(&shrink.shrunk)?.into_inner();
    let projection = s.design.combine(&z)?.into_inner();
    Ok(Fit {
        z,
        complement: shrink.complements(),
        shrinkage: shrink.coefficients,
        sigma2_hat,
        mu_hat,
        projection,
    })
}

/// One noisy draw `Y = mu + sigma eps` from stream `(seed, 0)` and its fit.
pub fn run_illustration(sigma: f64, seed: u64) -> Result<Illustration> {
    let s = setup()?;
    let n = ILLUSTRATION_N;
    let mut rng = rep_rng(seed, 0);
    let eps = normal_vector(&mut rng, n);
    let y: Vec<f64> = s.mu.iter().zip(&eps).map(|(m, e)| m + sigma * e).collect();
    let f = fit(&s, &y)?;

    let nf = n as f64;
    let (r1, r2) = ((1.0 / nf).sqrt(), (2.0 / nf).sqrt());
    let cols = s.design.columns();
    let ip = |j: usize| lsmix_core::vector::dot(&f.mu_hat, &cols[j]);
    let mut a_hat = vec![r1 * ip(CONSTANT_COLUMN)];
    a_hat.extend((1..=20).map(|j| r2 * ip(j + CONSTANT_COLUMN)));
    let b_hat = (1..=20).map(|j| r2 * ip(j - 1)).collect();

    Ok(Illustration {
        x: (1..=n).map(|i| i as f64 / nf).collect(),
        mu: s.mu,
        y,
        projection: f.projection,
        mu_hat: f.mu_hat,
        z: f.z,
        shrinkage: f.shrinkage,
        shrinkage_complement: f.complement,
        sigma2_hat: f.sigma2_hat,
        a_hat,
        b_hat,
        gram_deviation: s.design.gram_check(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IllustrationRisk {
    pub mixture_risk: f64,
    pub mixture_se: f64,
    pub projection_risk: f64,
    pub projection_se: f64,
    /// `||mu - Pi_* mu||^2 + 41 sigma^2`
    pub projection_risk_exact: f64,
}

/// Risk of the shrinkage fit and of the full projection over `reps` draws.
pub fn illustration_risk(sigma: f64, seed: u64, reps: usize) -> Result<IllustrationRisk> {
    let s = setup()?;
    let pairs = simulate(&s.mu, sigma, reps, seed, |y| {
        let f = fit(&s, y)?;
        Ok((dist_sq(&f.mu_hat, &s.mu), dist_sq(&f.projection, &s.mu)))
    })?;
    let (mix, proj): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let (mixture_risk, mixture_se) = mean_and_se(&mix);
    let (projection_risk, projection_se) = mean_and_se(&proj);
    let bias = s.star.star().residual_norm_sq(&s.mu);
    Ok(IllustrationRisk {
        mixture_risk,
        mixture_se,
        projection_risk,
        projection_se,
        projection_risk_exact: bias + FOURIER_COLUMNS as f64 * sigma * sigma,
    })
}

/// Writes `illustration.csv` (one row per design point), `coefficients.csv`,
/// `frequencies.csv` and `illustration.svg` into `dir`.
pub fn write_outputs(ill: &Illustration, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let paths: Vec<PathBuf> = [
        "illustration.csv",
        "coefficients.csv",
        "frequencies.csv",
        "illustration.svg",
    ]
    .iter()
    .map(|f| dir.join(f))
    .collect();

    let mut w = BufWriter::new(File::create(&paths[0])?);
    write_csv(
        &mut w,
        &["x", "signal", "observation", "projection", "estimate"],
        &[&ill.x, &ill.mu, &ill.y, &ill.projection, &ill.mu_hat],
    )?;

    let mut w = BufWriter::new(File::create(&paths[1])?);
    write_indexed_csv(
        &mut w,
        ("column", 1),
        &["z", "shrinkage", "one_minus_shrinkage"],
        &[&ill.z, &ill.shrinkage, &ill.shrinkage_complement],
    )?;

    let mut b_full = vec![0.0];
    b_full.extend_from_slice(&ill.b_hat);
    let mut w = BufWriter::new(File::create(&paths[2])?);
    write_indexed_csv(
        &mut w,
        ("frequency", 0),
        &["a_hat", "b_hat"],
        &[&ill.a_hat, &b_full],
    )?;

    let fine: Vec<f64> = (0..=600).map(|i| i as f64 / 600.0).collect();
    let truth: Vec<f64> = fine.iter().map(|x| illustration_function(*x)).collect();
    let fitted: Vec<f64> = fine.iter().map(|x| ill.fitted(*x)).collect();
    let svg = svg_plot(
        "Fourier shrinkage estimate",
        &[
            Series {
                label: "signal",
                xs: &fine,
                ys: &truth,
                color: "black",
                markers: false,
            },
            Series {
                label: "observations",
                xs: &ill.x,
                ys: &ill.y,
                color: "gray",
                markers: true,
            },
            Series {
                label: "estimate",
                xs: &fine,
                ys: &fitted,
                color: "red",
                markers: false,
            },
        ],
    );
    std::fs::write(&paths[3], svg)?;
    Ok(paths)
}
