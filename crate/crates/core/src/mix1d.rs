//! Univariate Gaussian and Student-t mixtures, the image of a projection.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::canonical::{merge_and_sort, FlatComponent};
use crate::error::{Error, Result};
use crate::model::{log_t_norm, Family};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component1D {
    pub weight: f64,
    pub mean: f64,
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dof: Option<u32>,
}

impl Component1D {
    pub fn gaussian(weight: f64, mean: f64, scale: f64) -> Self {
        Self {
            weight,
            mean,
            scale,
            dof: None,
        }
    }

    pub fn student_t(weight: f64, dof: u32, mean: f64, scale: f64) -> Self {
        Self {
            weight,
            mean,
            scale,
            dof: Some(dof),
        }
    }

    pub fn family(&self) -> Family {
        match self.dof {
            None => Family::Gaussian,
            Some(_) => Family::StudentT,
        }
    }

    /// Unweighted density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.scale;
        match self.dof {
            None => (-0.5 * z * z).exp() / (self.scale * (2.0 * PI).sqrt()),
            Some(dof) => {
                let nu = dof as f64;
                let log_norm = log_t_norm(nu, 1.0, 2.0 * self.scale.ln());
                (log_norm - 0.5 * (nu + 1.0) * (z * z / nu).ln_1p()).exp()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mixture1D {
    pub family: Family,
    pub components: Vec<Component1D>,
}

impl Mixture1D {
    /// Checks family consistency, positive scales and unit total weight
    /// (within 1e-12).
    pub fn new(family: Family, components: Vec<Component1D>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyMixture);
        }
        for (i, c) in components.iter().enumerate() {
            if c.family() != family {
                return Err(Error::FamilyMismatch {
                    left: family,
                    right: c.family(),
                });
            }
            if c.dof == Some(0) {
                return Err(Error::InvalidDof {
                    index: i,
                    reason: "degrees of freedom must be at least 1",
                });
            }
            if !(c.scale > 0.0) || !c.scale.is_finite() {
                return Err(Error::InvalidScale(c.scale));
            }
            if !(c.weight > 0.0) || !c.weight.is_finite() || !c.mean.is_finite() {
                return Err(Error::InvalidWeight(i));
            }
        }
        let sum: f64 = components.iter().map(|c| c.weight).sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::WeightSumMismatch(sum));
        }
        Ok(Self { family, components })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn density(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.weight * c.density(x)).sum()
    }

    /// `Σ_j w_j exp(i μ_j s − σ_j² s² / 2)`; Gaussian mixtures only.
    pub fn char_fn(&self, s: f64) -> Result<Complex64> {
        if self.family != Family::Gaussian {
            return Err(Error::UnsupportedFamily(self.family));
        }
        Ok(self
            .components
            .iter()
            .map(|c| {
                let damp = -0.5 * c.scale * c.scale * s * s;
                c.weight * Complex64::new(damp, c.mean * s).exp()
            })
            .sum())
    }

    /// Merges components whose `(mean, scale)` agree within `tol_merge`
    /// (same dof required) and sorts by `(dof, mean, scale)`.
    pub fn canonicalize(&self, tol_merge: f64) -> Mixture1D {
        let flat = self
            .components
            .iter()
            .map(|c| FlatComponent {
                weight: c.weight,
                group: c.dof.unwrap_or(0),
                params: vec![c.mean, c.scale],
            })
            .collect();
        let components = merge_and_sort(flat, tol_merge)
            .into_iter()
            .map(|f| Component1D {
                weight: f.weight,
                mean: f.params[0],
                scale: f.params[1],
                dof: match self.family {
                    Family::Gaussian => None,
                    Family::StudentT => Some(f.group),
                },
            })
            .collect();
        Mixture1D {
            family: self.family,
            components,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(w: f64, m: f64, s: f64) -> Component1D {
        Component1D::gaussian(w, m, s)
    }

    #[test]
    fn exact_duplicates_merge() {
        let m = Mixture1D::new(Family::Gaussian, vec![g(0.3, 1.0, 2.0), g(0.7, 1.0, 2.0)]).unwrap();
        let c = m.canonicalize(1e-9);
        assert_eq!(c.components, vec![g(1.0, 1.0, 2.0)]);
    }

    #[test]
    fn sorted_by_mean() {
        let m = Mixture1D::new(Family::Gaussian, vec![g(0.5, 0.0, 1.0), g(0.5, -3.0, 1.0)]).unwrap();
        let c = m.canonicalize(1e-9);
        assert_eq!(c.components[0].mean, -3.0);
        assert_eq!(c.components[1].mean, 0.0);
    }

    #[test]
    fn near_duplicates_merge_to_average() {
        let m = Mixture1D::new(Family::Gaussian, vec![g(0.5, 0.0, 1.0), g(0.5, 1e-12, 1.0)]).unwrap();
        let c = m.canonicalize(1e-9);
        assert_eq!(c.len(), 1);
        assert_eq!(c.components[0].weight, 1.0);
        assert!((c.components[0].mean - 5e-13).abs() < 1e-20);
        assert_eq!(c.components[0].scale, 1.0);
        assert_eq!(c.canonicalize(1e-9), c);
    }

    #[test]
    fn t_components_with_different_dof_stay_apart() {
        let m = Mixture1D::new(
            Family::StudentT,
            vec![
                Component1D::student_t(0.5, 5, 0.0, 1.0),
                Component1D::student_t(0.5, 3, 0.0, 1.0),
            ],
        )
        .unwrap();
        let c = m.canonicalize(1e-9);
        assert_eq!(c.len(), 2);
        assert_eq!(c.components[0].dof, Some(3));
    }

    #[test]
    fn rejects_bad_components() {
        assert_eq!(
            Mixture1D::new(Family::Gaussian, vec![g(1.0, 0.0, 0.0)]),
            Err(Error::InvalidScale(0.0))
        );
        assert!(Mixture1D::new(Family::Gaussian, vec![g(0.5, 0.0, 1.0)]).is_err());
        assert!(Mixture1D::new(Family::StudentT, vec![g(1.0, 0.0, 1.0)]).is_err());
        assert_eq!(Mixture1D::new(Family::Gaussian, vec![]), Err(Error::EmptyMixture));
    }

    #[test]
    fn cauchy_density() {
        let c = Component1D::student_t(1.0, 1, 0.0, 1.0);
        assert!((c.density(0.0) - 1.0 / PI).abs() < 1e-15);
        let c = Component1D::student_t(1.0, 1, 1.0, 2.0);
        assert!((c.density(1.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }
}
