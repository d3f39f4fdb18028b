//! Multivariate Gaussian and Student-t mixtures.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::canonical::{merge_and_sort, FlatComponent};
use crate::error::{Error, Result};

/// Inputs whose weights are off by more than this are rejected.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;
/// Weight sums within this distance of 1 are kept untouched.
pub const WEIGHT_SUM_EXACT: f64 = 1e-12;
/// Components lighter than this are dropped on validation.
pub const MIN_WEIGHT: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    StudentT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CovIssue {
    NonFinite,
    NotSymmetric,
    NotPositiveDefinite,
}

/// Symmetric positive-definite matrix together with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct CovMatrix {
    matrix: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
    log_det: f64,
}

impl PartialEq for CovMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl CovMatrix {
    pub(crate) fn try_from_matrix(matrix: DMatrix<f64>) -> std::result::Result<Self, CovIssue> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(CovIssue::NotPositiveDefinite);
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(CovIssue::NonFinite);
        }
        let d = matrix.nrows();
        for i in 0..d {
            for j in (i + 1)..d {
                if matrix[(i, j)] != matrix[(j, i)] {
                    return Err(CovIssue::NotSymmetric);
                }
            }
        }
        let chol = Cholesky::new(matrix.clone()).ok_or(CovIssue::NotPositiveDefinite)?;
        let l = chol.l_dirty();
        if (0..d).any(|i| !(l[(i, i)] > 0.0) || !l[(i, i)].is_finite()) {
            return Err(CovIssue::NotPositiveDefinite);
        }
        let log_det = 2.0 * (0..d).map(|i| l[(i, i)].ln()).sum::<f64>();
        Ok(Self {
            matrix,
            chol,
            log_det,
        })
    }

    /// Builds a covariance from row-major rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        let m = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        Self::try_from_matrix(m).map_err(|issue| cov_error(issue, 0))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// `vᵀ Σ v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            let mut row = 0.0;
            for j in 0..d {
                row += self.matrix[(i, j)] * v[j];
            }
            acc += v[i] * row;
        }
        acc
    }

    /// `vᵀ Σ⁻¹ v`, via the Cholesky factor.
    pub fn inv_quad_form(&self, v: &DVector<f64>) -> f64 {
        let y = self
            .chol
            .l_dirty()
            .solve_lower_triangular(v)
            .expect("Cholesky factor has a positive diagonal");
        y.norm_squared()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.matrix[(i, j)]).collect())
            .collect()
    }

    fn upper_triangle(&self) -> impl Iterator<Item = f64> + '_ {
        let d = self.dim();
        (0..d).flat_map(move |i| (i..d).map(move |j| self.matrix[(i, j)]))
    }
}

pub(crate) fn cov_error(issue: CovIssue, index: usize) -> Error {
    match issue {
        CovIssue::NonFinite => Error::NonFinite(index),
        CovIssue::NotSymmetric => Error::NotSymmetric(index),
        CovIssue::NotPositiveDefinite => Error::NonPositiveDefinite(index),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: DVector<f64>,
    pub cov: CovMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TComponent {
    pub weight: f64,
    pub dof: u32,
    pub mean: DVector<f64>,
    pub scale: CovMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Gaussian(GaussianComponent),
    StudentT(TComponent),
}

impl Component {
    pub fn family(&self) -> Family {
        match self {
            Component::Gaussian(_) => Family::Gaussian,
            Component::StudentT(_) => Family::StudentT,
        }
    }

    pub fn weight(&self) -> f64 {
        match self {
            Component::Gaussian(c) => c.weight,
            Component::StudentT(c) => c.weight,
        }
    }

    pub fn mean(&self) -> &DVector<f64> {
        match self {
            Component::Gaussian(c) => &c.mean,
            Component::StudentT(c) => &c.mean,
        }
    }

    /// Covariance for Gaussians, scale matrix for t components.
    pub fn cov(&self) -> &CovMatrix {
        match self {
            Component::Gaussian(c) => &c.cov,
            Component::StudentT(c) => &c.scale,
        }
    }

    pub fn dof(&self) -> Option<u32> {
        match self {
            Component::Gaussian(_) => None,
            Component::StudentT(c) => Some(c.dof),
        }
    }

    /// Unweighted density at `x`.
    pub fn density(&self, x: &DVector<f64>) -> f64 {
        self.log_density(x).exp()
    }

    fn log_density(&self, x: &DVector<f64>) -> f64 {
        let d = x.len() as f64;
        let delta = x - self.mean();
        let q = self.cov().inv_quad_form(&delta);
        match self {
            Component::Gaussian(c) => -0.5 * (d * (2.0 * PI).ln() + c.cov.log_det() + q),
            Component::StudentT(c) => {
                let nu = c.dof as f64;
                log_t_norm(nu, d, c.scale.log_det()) - 0.5 * (nu + d) * (q / nu).ln_1p()
            }
        }
    }
}

/// Log of Γ((ν+d)/2) / (Γ(ν/2) (νπ)^{d/2} det(Σ)^{1/2}).
pub(crate) fn log_t_norm(nu: f64, d: f64, log_det: f64) -> f64 {
    ln_gamma(0.5 * (nu + d)) - ln_gamma(0.5 * nu) - 0.5 * d * (nu * PI).ln() - 0.5 * log_det
}

/// Unvalidated mixture description; also the JSON interchange shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawMixture {
    pub family: Family,
    pub dim: usize,
    pub components: Vec<RawComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawComponent {
    pub weight: f64,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dof: Option<u32>,
}

/// A validated finite mixture of Gaussian or Student-t components sharing
/// one dimension and one family.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel {
    dim: usize,
    family: Family,
    components: Vec<Component>,
}

impl MixtureModel {
    /// Validates a raw description.
    ///
    /// Components lighter than [`MIN_WEIGHT`] are dropped. The remaining
    /// weights must sum to 1 within [`WEIGHT_SUM_TOLERANCE`]; sums further
    /// than [`WEIGHT_SUM_EXACT`] from 1 are then divided through so that a
    /// validated model re-validates to itself bit-for-bit.
    pub fn validate(raw: &RawMixture) -> Result<Self> {
        let dim = raw.dim;
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if raw.components.is_empty() {
            return Err(Error::EmptyMixture);
        }

        let mut kept: Vec<(usize, &RawComponent)> = Vec::with_capacity(raw.components.len());
        for (index, c) in raw.components.iter().enumerate() {
            if !c.weight.is_finite() || c.weight < 0.0 {
                return Err(Error::InvalidWeight(index));
            }
            if c.mean.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.mean.len(),
                });
            }
            if c.cov.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.cov.len(),
                });
            }
            if let Some(row) = c.cov.iter().find(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            if c.mean.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(index));
            }
            match (raw.family, c.dof) {
                (Family::Gaussian, Some(_)) => {
                    return Err(Error::InvalidDof {
                        index,
                        reason: "Gaussian components take no degrees of freedom",
                    })
                }
                (Family::StudentT, None) => {
                    return Err(Error::InvalidDof {
                        index,
                        reason: "t components need degrees of freedom",
                    })
                }
                (Family::StudentT, Some(0)) => {
                    return Err(Error::InvalidDof {
                        index,
                        reason: "degrees of freedom must be at least 1",
                    })
                }
                _ => {}
            }
            if c.weight >= MIN_WEIGHT {
                kept.push((index, c));
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyMixture);
        }

        let sum: f64 = kept.iter().map(|(_, c)| c.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::WeightSumMismatch(sum));
        }
        let renormalize = (sum - 1.0).abs() > WEIGHT_SUM_EXACT;

        let mut components = Vec::with_capacity(kept.len());
        for (index, c) in kept {
            let weight = if renormalize { c.weight / sum } else { c.weight };
            let matrix = DMatrix::from_fn(dim, dim, |i, j| c.cov[i][j]);
            let cov = CovMatrix::try_from_matrix(matrix).map_err(|e| cov_error(e, index))?;
            let mean = DVector::from_column_slice(&c.mean);
            components.push(match c.dof {
                None => Component::Gaussian(GaussianComponent { weight, mean, cov }),
                Some(dof) => Component::StudentT(TComponent {
                    weight,
                    dof,
                    mean,
                    scale: cov,
                }),
            });
        }
        Ok(Self {
            dim,
            family: raw.family,
            components,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn to_raw(&self) -> RawMixture {
        RawMixture {
            family: self.family,
            dim: self.dim,
            components: self
                .components
                .iter()
                .map(|c| RawComponent {
                    weight: c.weight(),
                    mean: c.mean().iter().copied().collect(),
                    cov: c.cov().to_rows(),
                    dof: c.dof(),
                })
                .collect(),
        }
    }

    /// Mixture density `Σ_j w_j f_j(x)`.
    pub fn density(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        let x = DVector::from_column_slice(x);
        Ok(self
            .components
            .iter()
            .map(|c| c.weight() * c.density(&x))
            .sum())
    }

    /// Characteristic function `Σ_j w_j exp(i μ_j·ξ − ½ ξᵀΣ_j ξ)`; Gaussian
    /// mixtures only.
    pub fn char_fn(&self, xi: &[f64]) -> Result<Complex64> {
        if self.family != Family::Gaussian {
            return Err(Error::UnsupportedFamily(self.family));
        }
        self.check_dim(xi.len())?;
        Ok(self
            .components
            .iter()
            .map(|c| {
                let phase: f64 = c.mean().iter().zip(xi).map(|(m, x)| m * x).sum();
                let damp = -0.5 * c.cov().quad_form(xi);
                c.weight() * Complex64::new(damp, phase).exp()
            })
            .sum())
    }

    /// Merges components whose mean and covariance entries agree within
    /// `tol_merge` (max-norm, equal dof for t) and sorts them by
    /// `(dof, mean, upper-triangle covariance)`.
    pub fn canonicalize(&self, tol_merge: f64) -> MixtureModel {
        let d = self.dim;
        let flat = self
            .components
            .iter()
            .map(|c| FlatComponent {
                weight: c.weight(),
                group: c.dof().unwrap_or(0),
                params: c.mean().iter().copied().chain(c.cov().upper_triangle()).collect(),
            })
            .collect();
        let merged = merge_and_sort(flat, tol_merge);
        let components = merged
            .into_iter()
            .map(|f| {
                let mean = DVector::from_column_slice(&f.params[..d]);
                let upper = &f.params[d..];
                let matrix = DMatrix::from_fn(d, d, |i, j| {
                    let (r, c) = if i <= j { (i, j) } else { (j, i) };
                    upper[upper_index(d, r, c)]
                });
                let cov = CovMatrix::try_from_matrix(matrix)
                    .expect("convex combination of positive-definite matrices");
                match self.family {
                    Family::Gaussian => Component::Gaussian(GaussianComponent {
                        weight: f.weight,
                        mean,
                        cov,
                    }),
                    Family::StudentT => Component::StudentT(TComponent {
                        weight: f.weight,
                        dof: f.group,
                        mean,
                        scale: cov,
                    }),
                }
            })
            .collect();
        MixtureModel {
            dim: d,
            family: self.family,
            components,
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

/// Position of `(i, j)`, `i <= j`, in the row-major upper triangle of a
/// `d x d` matrix.
pub(crate) fn upper_index(d: usize, i: usize, j: usize) -> usize {
    i * d - i * i.saturating_sub(1) / 2 + (j - i)
}

impl TryFrom<&RawMixture> for MixtureModel {
    type Error = Error;

    fn try_from(raw: &RawMixture) -> Result<Self> {
        MixtureModel::validate(raw)
    }
}
