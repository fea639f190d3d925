//! Families of candidate regressors and the inner products they live under.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vector::{self, Vector};

/// Gram deviation accepted for a family declared orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Inner product a design is expressed in.
///
/// `Normalized` is `(1/n) * sum x_i y_i`, used in the functional (Haar) setting.
/// Both give the same orthogonal projectors; only norms and coefficients differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerProduct {
    Euclidean,
    Normalized,
}

impl InnerProduct {
    pub fn dot(self, a: &[f64], b: &[f64]) -> f64 {
        let d = vector::dot(a, b);
        match self {
            InnerProduct::Euclidean => d,
            InnerProduct::Normalized => d / a.len() as f64,
        }
    }

    pub fn norm_sq(self, a: &[f64]) -> f64 {
        self.dot(a, a)
    }
}

/// Ordered family of `p < n` column vectors of `R^n`.
#[derive(Debug, Clone)]
pub struct DesignFamily {
    n: usize,
    columns: Vec<Vector>,
    inner_product: InnerProduct,
    orthonormal: bool,
}

impl DesignFamily {
    pub fn new(columns: Vec<Vector>, inner_product: InnerProduct) -> Result<Self> {
        let n = match columns.first() {
            Some(c) => c.len(),
            None => return Err(Error::InvalidDesign("no columns".into())),
        };
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(Error::InvalidDesign(format!(
                    "column {j} has length {}, expected {n}",
                    c.len()
                )));
            }
        }
        if columns.len() >= n {
            return Err(Error::InvalidDesign(format!(
                "p = {} columns must be fewer than n = {n}",
                columns.len()
            )));
        }
        let mut design = Self {
            n,
            columns,
            inner_product,
            orthonormal: false,
        };
        design.orthonormal = design.gram_check() <= ORTHONORMAL_TOL;
        Ok(design)
    }

    /// Like [`DesignFamily::new`] but rejects families whose Gram matrix is not the identity.
    pub fn orthonormal(columns: Vec<Vector>, inner_product: InnerProduct) -> Result<Self> {
        let d = Self::new(columns, inner_product)?;
        if !d.orthonormal {
            return Err(Error::NotOrthonormal(d.gram_check()));
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.columns[j]
    }

    pub fn inner_product(&self) -> InnerProduct {
        self.inner_product
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    /// `max |G_ij - delta_ij|` under the declared inner product.
    pub fn gram_check(&self) -> f64 {
        let ip = self.inner_product;
        let mut worst: f64 = 0.0;
        for (i, a) in self.columns.iter().enumerate() {
            for (j, b) in self.columns.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip.dot(a, b) - target).abs());
            }
        }
        worst
    }

    /// Coefficients `<y, v_j>` under the declared inner product.
    pub fn coefficients(&self, y: &[f64]) -> Result<Vec<f64>> {
        vector::check_len(y, self.n)?;
        Ok(self
            .columns
            .iter()
            .map(|c| self.inner_product.dot(y, c))
            .collect())
    }

    /// `sum_j theta_j v_j`
    pub fn combine(&self, theta: &[f64]) -> Result<Vector> {
        vector::check_len(theta, self.p())?;
        let mut out = alloc::vec![0.0; self.n];
        for (t, c) in theta.iter().zip(&self.columns) {
            vector::axpy(*t, c, &mut out);
        }
        Ok(Vector::from_raw(out))
    }
}

/// The first `p` standard basis vectors of `R^n`.
pub fn standard_basis(n: usize, p: usize) -> Result<DesignFamily> {
    let cols = (0..p)
        .map(|j| {
            let mut v = alloc::vec![0.0; n];
            v[j] = 1.0;
            Vector::new(v)
        })
        .collect::<Result<Vec<_>>>()?;
    DesignFamily::new(cols, InnerProduct::Euclidean)
}
