//! Pairs of distinct mixtures whose projections agree on a given strong
//! sm-uniqueness set: a covariance swap with `m = 2` on four lines, and a
//! mean swap on the vertices of a regular `2m`-gon on `m` lines.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::equality::{compare_1d, compare_canonical, Comparison, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::model::{Family, MixtureModel, RawComponent, RawMixture};
use crate::projection::{project_mixture, unit_direction};
use crate::smu::{is_strong_smu, lifted_dim, CertMode, DirectionSet, SmuReport};

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub p: MixtureModel,
    pub q: MixtureModel,
    pub s: DirectionSet,
}

fn zero_mean_gaussians(covs: &[[[f64; 2]; 2]]) -> MixtureModel {
    let w = 1.0 / covs.len() as f64;
    MixtureModel::validate(&RawMixture {
        family: Family::Gaussian,
        dim: 2,
        components: covs
            .iter()
            .map(|c| RawComponent {
                weight: w,
                mean: vec![0.0, 0.0],
                cov: c.iter().map(|r| r.to_vec()).collect(),
                dof: None,
            })
            .collect(),
    })
    .expect("fixed positive-definite covariances")
}

/// `P = (N(0,Σ₁) + N(0,Σ₂))/2`, `Q = (N(0,Σ₁') + N(0,Σ₂'))/2` and the four
/// lines spanned by `(1,0), (0,1), (1,1), (1,−1)`.
pub fn build_m2_example() -> Counterexample {
    let sigma1 = [[2.0, 0.0], [0.0, 1.0]];
    let sigma2 = [[1.0, 1.0], [1.0, 2.0]];
    let sigma1p = [[2.0, 1.0], [1.0, 1.0]];
    let sigma2p = [[1.0, 0.0], [0.0, 2.0]];
    let s = DirectionSet::new(
        2,
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![1.0, -1.0]],
    )
    .expect("nonzero directions");
    Counterexample {
        p: zero_mean_gaussians(&[sigma1, sigma2]),
        q: zero_mean_gaussians(&[sigma1p, sigma2p]),
        s,
    }
}

fn unit_circle(angle: f64) -> Vec<f64> {
    vec![angle.cos(), angle.sin()]
}

/// Identity-covariance Gaussians with equal weights at alternate vertices of
/// a regular `2m`-gon (`P` at angles `(2j − ½)π/m`, `Q` at `(2j + ½)π/m`),
/// and the `m` edge-bisecting lines at angles `jπ/m`.
pub fn build_polygon_example(m: usize) -> Result<Counterexample> {
    if m < 2 {
        return Err(Error::InvalidM(m));
    }
    let mf = m as f64;
    let identity = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let mixture = |offset: f64| {
        let components = (1..=m)
            .map(|j| RawComponent {
                weight: 1.0 / mf,
                mean: unit_circle((2.0 * j as f64 + offset) * PI / mf),
                cov: identity.clone(),
                dof: None,
            })
            .collect();
        MixtureModel::validate(&RawMixture {
            family: Family::Gaussian,
            dim: 2,
            components,
        })
    };
    let s = DirectionSet::new(2, (1..=m).map(|j| unit_circle(j as f64 * PI / mf)).collect())?;
    Ok(Counterexample {
        p: mixture(-0.5)?,
        q: mixture(0.5)?,
        s,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCheck {
    pub index: usize,
    pub direction: Vec<f64>,
    pub verdict: Verdict,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub smu_report: SmuReport,
    /// Set when `|S| < D`, so that every `D`-subset condition holds vacuously.
    pub strong_vacuous: bool,
    pub strong_ok: bool,
    pub projections: Vec<ProjectionCheck>,
    pub all_projections_equal: bool,
    pub canonical: Comparison,
    pub canonical_distinct: bool,
    pub pass: bool,
}

/// Checks that `S` is strong, that `P` and `Q` project identically on every
/// line of `S`, and that `P ≠ Q`.
pub fn verify_counterexample(
    p: &MixtureModel,
    q: &MixtureModel,
    s: &DirectionSet,
    tol: &Tolerances,
    tol_rank: f64,
) -> Result<VerificationRecord> {
    let smu_report = is_strong_smu(s, tol_rank, CertMode::Exact)?;
    let strong_vacuous = s.len() < lifted_dim(s.dim());
    let strong_ok = strong_vacuous || smu_report.is_strong == Some(true);

    let projections = s
        .vectors()
        .iter()
        .enumerate()
        .map(|(index, x)| {
            let c = compare_1d(&project_mixture(p, x)?, &project_mixture(q, x)?, tol)?;
            Ok(ProjectionCheck {
                index,
                direction: x.clone(),
                verdict: c.verdict,
                distance: c.distance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_projections_equal = projections.iter().all(|c| c.verdict == Verdict::Equal);
    let canonical = compare_canonical(p, q, tol)?;
    let canonical_distinct = canonical.verdict == Verdict::Distinct;
    Ok(VerificationRecord {
        smu_report,
        strong_vacuous,
        strong_ok,
        projections,
        all_projections_equal,
        canonical,
        canonical_distinct,
        pass: strong_ok && all_projections_equal && canonical_distinct,
    })
}

/// Largest distance between the mean multiset of `q` and the reflection of
/// the mean multiset of `p` across a line of `s`, maximized over `s`.
///
/// Returns `+inf` when the component counts differ.
pub fn reflection_deviation(p: &MixtureModel, q: &MixtureModel, s: &DirectionSet) -> Result<f64> {
    if p.len() != q.len() {
        return Ok(f64::INFINITY);
    }
    let mut worst: f64 = 0.0;
    for x in s.vectors() {
        let u = unit_direction(x)?;
        let mut unmatched: Vec<Vec<f64>> =
            q.components().iter().map(|c| c.mean().iter().copied().collect()).collect();
        for c in p.components() {
            let along: f64 = c.mean().iter().zip(&u).map(|(a, b)| a * b).sum();
            let reflected: Vec<f64> = c
                .mean()
                .iter()
                .zip(&u)
                .map(|(mu, ui)| 2.0 * along * ui - mu)
                .collect();
            let (best, dist) = unmatched
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let d = v
                        .iter()
                        .zip(&reflected)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    (i, d)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("equal counts");
            worst = worst.max(dist);
            unmatched.swap_remove(best);
        }
    }
    Ok(worst)
}
