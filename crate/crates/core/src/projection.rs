//! Projection of multivariate mixtures onto lines through the origin.
//!
//! The projection onto `⟨x⟩` is represented as the law of `u·X` with `u` the
//! unit vector along `x` whose first nonzero coordinate is positive, so the
//! result depends only on the line.

use crate::error::{Error, Result};
use crate::mix1d::{Component1D, Mixture1D};
use crate::model::{Component, MixtureModel};

/// Unit vector spanning the same line as `x`, sign-normalized.
pub fn unit_direction(x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite direction entry".into()));
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let sign = match x.iter().find(|&&v| v != 0.0) {
        Some(&first) if first < 0.0 => -1.0,
        _ => 1.0,
    };
    // `+ 0.0` turns a negative zero into a positive one
    Ok(x.iter().map(|v| sign * v / norm + 0.0).collect())
}

fn project_unit(component: &Component, u: &[f64]) -> Component1D {
    let mean = component.mean().iter().zip(u).map(|(m, x)| m * x).sum();
    let scale = component.cov().quad_form(u).sqrt();
    Component1D {
        weight: component.weight(),
        mean,
        scale,
        dof: component.dof(),
    }
}

/// Gaussian `(μ, Σ)` maps to `N(u·μ, uᵀΣu)`; a t component keeps its degrees
/// of freedom and maps to `t_ν(u·μ, sqrt(uᵀΣu))`.
pub fn project_component(component: &Component, x: &[f64]) -> Result<Component1D> {
    if x.len() != component.mean().len() {
        return Err(Error::DimensionMismatch {
            expected: component.mean().len(),
            found: x.len(),
        });
    }
    let u = unit_direction(x)?;
    Ok(project_unit(component, &u))
}

/// Componentwise projection; weights are carried over unchanged and no
/// canonicalization happens.
pub fn project_mixture(model: &MixtureModel, x: &[f64]) -> Result<Mixture1D> {
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: x.len(),
        });
    }
    let u = unit_direction(x)?;
    Ok(Mixture1D {
        family: model.family(),
        components: model.components().iter().map(|c| project_unit(c, &u)).collect(),
    })
}
