//! Equality decisions for mixtures: canonical 1D comparison, the
//! finite-projection procedure, and a direct multivariate comparison used as
//! an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mix1d::Mixture1D;
use crate::model::{Family, MixtureModel};
use crate::projection::project_mixture;
use crate::smu::{required_lines, DirectionSet};

pub const DEFAULT_TOL_PARAM: f64 = 1e-9;
pub const DEFAULT_TOL_MERGE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Matching tolerance for weights, means and scales (the latter two
    /// relative to `1 + |value|`).
    pub tol_param: f64,
    /// Components closer than this are merged before comparison.
    pub tol_merge: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_param: DEFAULT_TOL_PARAM,
            tol_merge: DEFAULT_TOL_MERGE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Distinct,
}

/// Outcome of a parameter-list comparison. `distance` is the largest scaled
/// residual over matched components, `+inf` when the lists cannot be matched
/// (different lengths or degrees of freedom).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub verdict: Verdict,
    pub distance: f64,
}

impl Comparison {
    fn from_distance(distance: f64, tol_param: f64) -> Self {
        let verdict = if distance <= tol_param {
            Verdict::Equal
        } else {
            Verdict::Distinct
        };
        Self { verdict, distance }
    }

    pub fn is_equal(&self) -> bool {
        self.verdict == Verdict::Equal
    }
}

fn check_family(a: Family, b: Family) -> Result<()> {
    if a != b {
        return Err(Error::FamilyMismatch { left: a, right: b });
    }
    Ok(())
}

fn scaled(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// Compares two univariate mixtures through their canonical forms.
pub fn compare_1d(a: &Mixture1D, b: &Mixture1D, tol: &Tolerances) -> Result<Comparison> {
    check_family(a.family, b.family)?;
    let ca = a.canonicalize(tol.tol_merge);
    let cb = b.canonicalize(tol.tol_merge);
    if ca.len() != cb.len() {
        return Ok(Comparison::from_distance(f64::INFINITY, tol.tol_param));
    }
    let mut distance: f64 = 0.0;
    for (x, y) in ca.components.iter().zip(&cb.components) {
        if x.dof != y.dof {
            return Ok(Comparison::from_distance(f64::INFINITY, tol.tol_param));
        }
        distance = distance
            .max((x.weight - y.weight).abs())
            .max(scaled(x.mean, y.mean))
            .max(scaled(x.scale, y.scale));
    }
    Ok(Comparison::from_distance(distance, tol.tol_param))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionDiagnostic {
    pub index: usize,
    pub direction: Vec<f64>,
    /// `null` in JSON when the projections could not be matched at all.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub verdict: Verdict,
    pub witness_direction: Option<Vec<f64>>,
    pub witness_index: Option<usize>,
    pub diagnostics: Vec<DirectionDiagnostic>,
    pub tolerances: Tolerances,
    /// Larger canonical component count of the two mixtures.
    pub mixture_size: usize,
    pub required_lines: u64,
    pub lines_used: usize,
    pub cardinality_warning: Option<String>,
}

/// Decides `P = Q` by comparing projections on every line of `s`, stopping
/// at the first mismatch (in input order), which becomes the witness.
///
/// A distinct verdict is always sound. An equal verdict relies on `s` being
/// a strong sm-uniqueness set with at least `required_lines(d, m)` members;
/// a smaller set still runs but the verdict carries a warning.
pub fn compare_via_projections(
    p: &MixtureModel,
    q: &MixtureModel,
    s: &DirectionSet,
    tol: &Tolerances,
) -> Result<ComparisonVerdict> {
    check_family(p.family(), q.family())?;
    for found in [q.dim(), s.dim()] {
        if found != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found,
            });
        }
    }
    let m = p
        .canonicalize(tol.tol_merge)
        .len()
        .max(q.canonicalize(tol.tol_merge).len());
    let required = required_lines(p.dim() as u64, m as u64)?;
    let cardinality_warning = ((s.len() as u64) < required).then(|| {
        format!(
            "{} directions supplied but {required} are needed for mixtures of {m} components in \
             dimension {}; an equal verdict is not certified",
            s.len(),
            p.dim()
        )
    });

    let mut diagnostics = Vec::new();
    let mut witness = None;
    for (index, x) in s.vectors().iter().enumerate() {
        let c = compare_1d(&project_mixture(p, x)?, &project_mixture(q, x)?, tol)?;
        diagnostics.push(DirectionDiagnostic {
            index,
            direction: x.clone(),
            distance: c.distance,
        });
        if !c.is_equal() {
            witness = Some(index);
            break;
        }
    }

    Ok(ComparisonVerdict {
        verdict: if witness.is_some() {
            Verdict::Distinct
        } else {
            Verdict::Equal
        },
        witness_direction: witness.map(|i| s.vectors()[i].clone()),
        witness_index: witness,
        diagnostics,
        tolerances: *tol,
        mixture_size: m,
        required_lines: required,
        lines_used: s.len(),
        cardinality_warning,
    })
}

/// Compares the multivariate canonical forms directly (weights, mean
/// entries, covariance entries, dof).
pub fn compare_canonical(p: &MixtureModel, q: &MixtureModel, tol: &Tolerances) -> Result<Comparison> {
    check_family(p.family(), q.family())?;
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let cp = p.canonicalize(tol.tol_merge);
    let cq = q.canonicalize(tol.tol_merge);
    if cp.len() != cq.len() {
        return Ok(Comparison::from_distance(f64::INFINITY, tol.tol_param));
    }
    let mut distance: f64 = 0.0;
    for (a, b) in cp.components().iter().zip(cq.components()) {
        if a.dof() != b.dof() {
            return Ok(Comparison::from_distance(f64::INFINITY, tol.tol_param));
        }
        distance = distance.max((a.weight() - b.weight()).abs());
        for (x, y) in a.mean().iter().zip(b.mean().iter()) {
            distance = distance.max(scaled(*x, *y));
        }
        for (x, y) in a.cov().matrix().iter().zip(b.cov().matrix().iter()) {
            distance = distance.max(scaled(*x, *y));
        }
    }
    Ok(Comparison::from_distance(distance, tol.tol_param))
}
