//! Numerical linear-independence test for finite families of univariate
//! densities: the family is independent exactly when the Gram matrix of L²
//! inner products is positive definite.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mix1d::Component1D;
use crate::model::Family;
use crate::quadrature::integrate_real_line;

pub const DEFAULT_EIG_THRESHOLD: f64 = 1e-12;
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

/// `∫ f₁ f₂ dx` for two Gaussian densities (weights ignored).
pub fn gauss_l2_inner(c1: &Component1D, c2: &Component1D) -> f64 {
    let v = c1.scale * c1.scale + c2.scale * c2.scale;
    let dm = c1.mean - c2.mean;
    (-dm * dm / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
}

/// `∫ f₁ f₂ dx` for two t densities, by adaptive quadrature over the whole
/// line. The estimate is accepted only if tightening the tolerance by half
/// moves it by less than `10 · quad_tol`.
pub fn t_l2_inner(c1: &Component1D, c2: &Component1D, quad_tol: f64) -> Result<f64> {
    // order the pair so that inner(a, b) and inner(b, a) run the identical
    // floating-point computation
    let order = c1
        .dof
        .cmp(&c2.dof)
        .then(c1.mean.total_cmp(&c2.mean))
        .then(c1.scale.total_cmp(&c2.scale));
    let (a, b) = if order.is_le() { (c1, c2) } else { (c2, c1) };
    let center = 0.5 * (a.mean + b.mean);
    let scale = a.scale.max(b.scale).max(0.5 * (a.mean - b.mean).abs());
    let f = |x: f64| a.density(x) * b.density(x);
    let coarse = integrate_real_line(f, center, scale, quad_tol, 0.0)?;
    let fine = integrate_real_line(f, center, scale, 0.5 * quad_tol, 0.0)?;
    if (coarse.value - fine.value).abs() >= 10.0 * quad_tol {
        return Err(Error::QuadratureNonConvergence {
            estimate: fine.value,
            error: (coarse.value - fine.value).abs(),
        });
    }
    Ok(fine.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub size: usize,
    /// Row-major `size x size` inner-product matrix.
    pub gram: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub independent: bool,
    pub threshold: f64,
}

/// Builds the Gram matrix of the family and declares it independent when
/// `λ_min > eig_threshold · λ_max`.
pub fn independence_test(components: &[Component1D], eig_threshold: f64) -> Result<GramReport> {
    let n = components.len();
    if n == 0 {
        return Err(Error::EmptyMixture);
    }
    let family = components[0].family();
    if let Some(other) = components.iter().find(|c| c.family() != family) {
        return Err(Error::FamilyMismatch {
            left: family,
            right: other.family(),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| match family {
            Family::Gaussian => Ok(gauss_l2_inner(&components[i], &components[j])),
            Family::StudentT => t_l2_inner(&components[i], &components[j], DEFAULT_QUAD_TOL),
        })
        .collect::<Result<_>>()?;
    let mut gram = DMatrix::zeros(n, n);
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        gram[(i, j)] = v;
        gram[(j, i)] = v;
    }
    let eig = SymmetricEigen::new(gram.clone()).eigenvalues;
    let min_eigenvalue = eig.min();
    let max_eigenvalue = eig.max();
    Ok(GramReport {
        size: n,
        gram: (0..n).map(|i| (0..n).map(|j| gram[(i, j)]).collect()).collect(),
        min_eigenvalue,
        max_eigenvalue,
        independent: min_eigenvalue > eig_threshold * max_eigenvalue,
        threshold: eig_threshold,
    })
}
