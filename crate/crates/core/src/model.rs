//! Models (linear subspaces spanned by design columns) and collections of them.

use alloc::format;
use alloc::vec::Vec;

use crate::design::DesignFamily;
use crate::error::{Error, Result};
use crate::math;
use crate::vector::{self, Vector};

/// Tolerance on `sum pi_m = 1`.
pub const PRIOR_SUM_TOL: f64 = 1e-10;

/// Relative residual norm below which a column is treated as linearly dependent.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelId(pub usize);

/// A candidate model `S_m = span{v_j : j in columns}` with prior mass and penalty `L_m`.
///
/// Column indices are zero-based positions in the design.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub id: ModelId,
    pub columns: Vec<usize>,
    pub prior: f64,
    pub weight_l: f64,
}

impl Model {
    pub fn new(id: usize, mut columns: Vec<usize>, prior: f64, weight_l: f64) -> Result<Self> {
        if !(prior > 0.0 && prior <= 1.0) {
            return Err(Error::InvalidCollection(format!(
                "model {id}: prior {prior} outside (0, 1]"
            )));
        }
        if !(weight_l >= 0.0 && weight_l.is_finite()) {
            return Err(Error::InvalidCollection(format!(
                "model {id}: L_m = {weight_l} must be finite and non-negative"
            )));
        }
        columns.sort_unstable();
        if columns.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCollection(format!(
                "model {id}: duplicate column index"
            )));
        }
        Ok(Self {
            id: ModelId(id),
            columns,
            prior,
            weight_l,
        })
    }

    pub fn cardinality(&self) -> usize {
        self.columns.len()
    }
}

/// Euclidean-orthonormal basis of the span of some design columns.
///
/// Built by modified Gram-Schmidt with one re-orthogonalisation pass. Dependent
/// columns are dropped, which yields the pseudo-inverse projector onto the span.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: Vec<Vec<f64>>,
    rank_deficient: bool,
}

impl Subspace {
    pub fn spanned_by(design: &DesignFamily, columns: &[usize]) -> Result<Self> {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
        let mut rank_deficient = false;
        for &j in columns {
            if j >= design.p() {
                return Err(Error::InvalidCollection(format!(
                    "column index {j} out of range (p = {})",
                    design.p()
                )));
            }
            let mut v = design.column(j).as_slice().to_vec();
            let original = math::sqrt(vector::norm_sq(&v));
            for _ in 0..2 {
                for q in &basis {
                    let c = vector::dot(q, &v);
                    vector::axpy(-c, q, &mut v);
                }
            }
            let norm = math::sqrt(vector::norm_sq(&v));
            if original == 0.0 || norm <= RANK_TOL * original {
                rank_deficient = true;
                continue;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
        Ok(Self {
            basis,
            rank_deficient,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_rank_deficient(&self) -> bool {
        self.rank_deficient
    }

    /// Orthogonal projection of `y` onto the subspace. The zero subspace maps to `0`.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; y.len()];
        for q in &self.basis {
            vector::axpy(vector::dot(q, y), q, &mut out);
        }
        out
    }

    /// `||Pi y||^2` (Euclidean) without forming the projection.
    pub fn projected_norm_sq(&self, y: &[f64]) -> f64 {
        self.basis
            .iter()
            .map(|q| {
                let c = vector::dot(q, y);
                c * c
            })
            .sum()
    }

    /// `||y - Pi y||^2` (Euclidean).
    pub fn residual_norm_sq(&self, y: &[f64]) -> f64 {
        vector::dist_sq(y, &self.project(y))
    }
}

/// Finite collection of models nested in a largest space `S_*`.
///
/// Immutable after construction; per-model bases are computed once.
#[derive(Debug, Clone)]
pub struct ModelCollection {
    design: DesignFamily,
    models: Vec<Model>,
    subspaces: Vec<Subspace>,
    star_indices: Vec<usize>,
    star: Subspace,
}

impl ModelCollection {
    pub fn new(
        design: DesignFamily,
        models: Vec<Model>,
        mut star_indices: Vec<usize>,
    ) -> Result<Self> {
        if models.is_empty() {
            return Err(Error::EmptyCollection);
        }
        star_indices.sort_unstable();
        star_indices.dedup();
        let priors: Vec<f64> = models.iter().map(|m| m.prior).collect();
        let total = math::pairwise_sum(&priors);
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidCollection(format!(
                "priors sum to {total}, not 1"
            )));
        }
        for m in &models {
            if let Some(j) = m
                .columns
                .iter()
                .find(|j| star_indices.binary_search(j).is_err())
            {
                return Err(Error::InvalidCollection(format!(
                    "model {} uses column {j} outside S_*",
                    m.id.0
                )));
            }
        }
        let star = Subspace::spanned_by(&design, &star_indices)?;
        if star.dim() >= design.n() {
            return Err(Error::InvalidCollection(format!(
                "dim(S_*) = {} must be below n = {}",
                star.dim(),
                design.n()
            )));
        }
        let subspaces = models
            .iter()
            .map(|m| Subspace::spanned_by(&design, &m.columns))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            design,
            models,
            subspaces,
            star_indices,
            star,
        })
    }

    pub fn design(&self) -> &DesignFamily {
        &self.design
    }

    pub fn n(&self) -> usize {
        self.design.n()
    }

    pub fn models(&self) -> &[Model] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn subspace(&self, index: usize) -> &Subspace {
        &self.subspaces[index]
    }

    pub fn star(&self) -> &Subspace {
        &self.star
    }

    pub fn star_indices(&self) -> &[usize] {
        &self.star_indices
    }

    /// `d_* = dim(S_*)`
    pub fn star_dim(&self) -> usize {
        self.star.dim()
    }

    /// `N_* = n - d_*`
    pub fn n_star(&self) -> usize {
        self.n() - self.star_dim()
    }

    pub fn dim(&self, index: usize) -> usize {
        self.subspaces[index].dim()
    }

    pub fn position(&self, id: ModelId) -> Option<usize> {
        self.models.iter().position(|m| m.id == id)
    }

    /// Least-squares estimator `Pi_{S_m} y` for the model at `index`.
    pub fn project(&self, y: &[f64], index: usize) -> Result<Vector> {
        vector::check_len(y, self.n())?;
        if index >= self.models.len() {
            return Err(Error::InvalidCollection(format!(
                "no model at position {index}"
            )));
        }
        Ok(Vector::from_raw(self.subspaces[index].project(y)))
    }

    pub fn project_star(&self, y: &[f64]) -> Result<Vector> {
        vector::check_len(y, self.n())?;
        Ok(Vector::from_raw(self.star.project(y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{standard_basis, InnerProduct};
    use alloc::vec;

    fn two_model_collection() -> ModelCollection {
        let design = standard_basis(4, 2).unwrap();
        let models = vec![
            Model::new(0, vec![], 0.5, 0.0).unwrap(),
            Model::new(1, vec![0], 0.5, 0.5).unwrap(),
        ];
        ModelCollection::new(design, models, vec![0, 1]).unwrap()
    }

    #[test]
    fn coordinate_projection() {
        let c = two_model_collection();
        let y = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(c.project(&y, 1).unwrap().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn empty_model_projects_to_zero() {
        let c = two_model_collection();
        assert_eq!(
            c.project(&[1.0, 2.0, 3.0, 4.0], 0).unwrap().as_slice(),
            &[0.0; 4]
        );
        assert_eq!(c.dim(0), 0);
    }

    #[test]
    fn vector_in_range_is_fixed() {
        let c = two_model_collection();
        let y = [3.5, 0.0, 0.0, 0.0];
        assert_eq!(c.project(&y, 1).unwrap().as_slice(), &y);
    }

    #[test]
    fn rejects_bad_priors_and_escaping_models() {
        let design = standard_basis(4, 2).unwrap();
        let models = vec![Model::new(0, vec![0], 0.4, 0.0).unwrap()];
        assert!(matches!(
            ModelCollection::new(design.clone(), models, vec![0, 1]),
            Err(Error::InvalidCollection(_))
        ));
        let models = vec![Model::new(0, vec![1], 1.0, 0.0).unwrap()];
        assert!(ModelCollection::new(design.clone(), models, vec![0]).is_err());
        assert!(matches!(
            ModelCollection::new(design, vec![], vec![0]),
            Err(Error::EmptyCollection)
        ));
        assert!(Model::new(0, vec![1, 1], 1.0, 0.0).is_err());
        assert!(Model::new(0, vec![1], 0.0, 0.0).is_err());
    }

    #[test]
    fn dependent_columns_are_flagged_and_projection_still_exact() {
        let a = Vector::new(vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let b = Vector::new(vec![2.0, 2.0, 0.0, 0.0]).unwrap();
        let c = Vector::new(vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let design = DesignFamily::new(vec![a, b, c], InnerProduct::Euclidean).unwrap();
        let models = vec![Model::new(0, vec![0, 1, 2], 1.0, 0.0).unwrap()];
        let coll = ModelCollection::new(design, models, vec![0, 1, 2]).unwrap();
        assert!(coll.subspace(0).is_rank_deficient());
        assert_eq!(coll.dim(0), 2);
        let p = coll.project(&[1.0, 3.0, 5.0, 7.0], 0).unwrap();
        for (x, e) in p.iter().zip([2.0, 2.0, 5.0, 0.0]) {
            assert!((x - e).abs() < 1e-14);
        }
    }
}
