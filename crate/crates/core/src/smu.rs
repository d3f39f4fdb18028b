//! Quadratic lifting of directions and certification of (strong)
//! sm-uniqueness: a direction set `S` is an sm-uniqueness set when the only
//! symmetric matrix `A` with `xᵀAx = 0` on all of `S` is zero, i.e. when the
//! lifted vectors span `R^D`, `D = d(d+1)/2`. It is strong when every
//! `D`-element subset already is one.

use itertools::Itertools;
use nalgebra::{DMatrix, SMatrix};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL_RANK: f64 = 1e-10;
/// Largest number of subsets exact certification will enumerate.
pub const EXACT_SUBSET_LIMIT: u128 = 10_000_000;
/// Samples used by [`gen_strong_smu`] when exact certification is too large.
pub const GENERATOR_RANDOMIZED_SAMPLES: u64 = 100_000;

const CHUNK: usize = 4096;

/// Finite set of nonzero direction vectors in `R^d`, each spanning a line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSet {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl DirectionSet {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("non-finite direction entry".into()));
            }
            if v.iter().all(|&x| x == 0.0) {
                return Err(Error::ZeroDirection);
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> DirectionSet {
        DirectionSet {
            dim: self.dim,
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }
}

/// Image `x̂` of a direction: entries `t_i t_j`, `i <= j`, in lexicographic
/// order of `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedVector {
    pub entries: Vec<f64>,
}

impl LiftedVector {
    pub fn dim_lifted(&self) -> usize {
        self.entries.len()
    }
}

/// `D = (d² + d) / 2`.
pub fn lifted_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn lift(x: &[f64]) -> LiftedVector {
    let d = x.len();
    let mut entries = Vec::with_capacity(lifted_dim(d));
    for i in 0..d {
        for j in i..d {
            entries.push(x[i] * x[j]);
        }
    }
    LiftedVector { entries }
}

/// Number of lines `(2m − 1)(d² + d − 2)/2 + 1` sufficient to separate
/// mixtures of at most `m` components in dimension `d`.
pub fn required_lines(d: u64, m: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("mixture size must be at least 1".into()));
    }
    let overflow = || Error::Overflow("required_lines");
    // d² + d − 2 = (d + 2)(d − 1) is always even
    let half = d
        .checked_add(2)
        .and_then(|v| v.checked_mul(d - 1))
        .ok_or_else(overflow)?
        / 2;
    let odd = m.checked_mul(2).ok_or_else(overflow)? - 1;
    odd.checked_mul(half)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(overflow)
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeTag {
    Exact,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    /// Enumerate every `D`-subset.
    Exact,
    /// Test `samples` uniformly drawn `D`-subsets.
    Randomized { samples: u64, seed: u64 },
}

/// Outcome of a (strong) sm-uniqueness certification.
///
/// `is_strong` is `None` when randomized certification found no failing
/// subset. `witness_bad_subset` holds indices into the certified set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmuReport {
    pub is_smu: bool,
    pub is_strong: Option<bool>,
    pub mode: ModeTag,
    pub witness_bad_subset: Option<Vec<usize>>,
    pub min_singular_value: f64,
    pub subsets_checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_note: Option<String>,
}

/// Lifted vectors scaled to unit Euclidean norm, one per direction.
fn normalized_lifts(s: &DirectionSet) -> Vec<Vec<f64>> {
    s.vectors()
        .iter()
        .map(|v| {
            let mut l = lift(v).entries;
            let n = l.iter().map(|x| x * x).sum::<f64>().sqrt();
            l.iter_mut().for_each(|x| *x /= n);
            l
        })
        .collect()
}

struct RankCheck {
    full_rank: bool,
    min_singular_value: f64,
}

fn rank_check(rows: &[&[f64]], cols: usize, tol_rank: f64) -> RankCheck {
    if rows.len() < cols {
        return RankCheck {
            full_rank: false,
            min_singular_value: 0.0,
        };
    }
    // square checks in small dimension dominate strong certification; stack
    // matrices avoid the allocations of the dynamic decomposition
    match (rows.len(), cols) {
        (3, 3) => rank_from(square::<3>(rows).singular_values().as_slice(), tol_rank),
        (6, 6) => rank_from(square::<6>(rows).singular_values().as_slice(), tol_rank),
        (10, 10) => rank_from(square::<10>(rows).singular_values().as_slice(), tol_rank),
        _ => {
            let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
            rank_from(m.singular_values().as_slice(), tol_rank)
        }
    }
}

fn square<const N: usize>(rows: &[&[f64]]) -> SMatrix<f64, N, N> {
    SMatrix::from_fn(|i, j| rows[i][j])
}

fn rank_from(sv: &[f64], tol_rank: f64) -> RankCheck {
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let rank = sv.iter().filter(|&&s| s > tol_rank * max).count();
    RankCheck {
        full_rank: rank == sv.len(),
        min_singular_value: min,
    }
}

/// Decides whether the lifted directions span `R^D`: numerical rank counts
/// singular values above `tol_rank · σ_max` of the row-normalized lift matrix.
pub fn is_smu(s: &DirectionSet, tol_rank: f64) -> SmuReport {
    let lifts = normalized_lifts(s);
    let rows: Vec<&[f64]> = lifts.iter().map(Vec::as_slice).collect();
    let check = rank_check(&rows, lifted_dim(s.dim()), tol_rank);
    SmuReport {
        is_smu: check.full_rank,
        is_strong: None,
        mode: ModeTag::Exact,
        witness_bad_subset: None,
        min_singular_value: check.min_singular_value,
        subsets_checked: 0,
        confidence_note: None,
    }
}

/// Certifies that every `D`-element subset of `s` is an sm-uniqueness set.
///
/// Exact mode reports the lexicographically first failing subset, however
/// the work is scheduled. Randomized mode is deterministic given its seed and
/// can only refute, never confirm.
pub fn is_strong_smu(s: &DirectionSet, tol_rank: f64, mode: CertMode) -> Result<SmuReport> {
    let k = s.len();
    let dl = lifted_dim(s.dim());
    let whole = is_smu(s, tol_rank);
    let tag = match mode {
        CertMode::Exact => ModeTag::Exact,
        CertMode::Randomized { .. } => ModeTag::Randomized,
    };
    if k < dl {
        return Ok(SmuReport {
            is_smu: false,
            is_strong: Some(false),
            mode: tag,
            witness_bad_subset: Some((0..k).collect()),
            min_singular_value: 0.0,
            subsets_checked: 0,
            confidence_note: None,
        });
    }
    let lifts = normalized_lifts(s);
    let eval = |subset: &[usize]| {
        let rows: Vec<&[f64]> = subset.iter().map(|&i| lifts[i].as_slice()).collect();
        rank_check(&rows, dl, tol_rank)
    };

    let mut checked: u64 = 0;
    let mut min_sv = f64::INFINITY;
    let mut witness = None;

    match mode {
        CertMode::Exact => {
            let total = binomial(k, dl);
            if total > EXACT_SUBSET_LIMIT {
                return Err(Error::ExactModeTooLarge {
                    subsets: total,
                    limit: EXACT_SUBSET_LIMIT,
                });
            }
            let mut combos = (0..k).combinations(dl);
            loop {
                let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
                if chunk.is_empty() {
                    break;
                }
                if scan_chunk(&chunk, &eval, &mut checked, &mut min_sv, &mut witness) {
                    break;
                }
            }
        }
        CertMode::Randomized { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut remaining = samples;
            while remaining > 0 && witness.is_none() {
                let n = remaining.min(CHUNK as u64);
                remaining -= n;
                let chunk: Vec<Vec<usize>> = (0..n)
                    .map(|_| {
                        let mut idx = rand::seq::index::sample(&mut rng, k, dl).into_vec();
                        idx.sort_unstable();
                        idx
                    })
                    .collect();
                scan_chunk(&chunk, &eval, &mut checked, &mut min_sv, &mut witness);
            }
        }
    }

    let is_strong = match (&witness, mode) {
        (Some(_), _) => Some(false),
        (None, CertMode::Exact) => Some(true),
        (None, CertMode::Randomized { .. }) => None,
    };
    let confidence_note = match mode {
        CertMode::Randomized { seed, .. } if witness.is_none() => {
            let total = binomial(k, dl);
            // smallest failing fraction detected with probability 0.99
            let detectable = if checked == 0 {
                1.0
            } else {
                1.0 - 0.01f64.powf(1.0 / checked as f64)
            };
            Some(format!(
                "randomized: {checked} uniformly drawn {dl}-subsets (of {total}, seed {seed}) all \
                 passed; a failing fraction of {detectable:.3e} or more would be detected with \
                 probability 0.99"
            ))
        }
        _ => None,
    };
    Ok(SmuReport {
        is_smu: whole.is_smu,
        is_strong,
        mode: tag,
        witness_bad_subset: witness,
        min_singular_value: if min_sv.is_finite() { min_sv } else { 0.0 },
        subsets_checked: checked,
        confidence_note,
    })
}

/// Evaluates a chunk in parallel, then folds results in chunk order up to
/// and including the first failure. Returns whether a failure was found.
fn scan_chunk<F>(
    chunk: &[Vec<usize>],
    eval: &F,
    checked: &mut u64,
    min_sv: &mut f64,
    witness: &mut Option<Vec<usize>>,
) -> bool
where
    F: Fn(&[usize]) -> RankCheck + Sync,
{
    let results: Vec<RankCheck> = chunk.par_iter().map(|c| eval(c)).collect();
    for (subset, r) in chunk.iter().zip(results) {
        *checked += 1;
        *min_sv = min_sv.min(r.min_singular_value);
        if !r.full_rank {
            *witness = Some(subset.clone());
            return true;
        }
    }
    false
}

/// Draws `count` i.i.d. spherical-uniform directions in `R^d` and certifies
/// them as a strong sm-uniqueness set, redrawing up to `max_retries` times.
///
/// Certification is exact when `C(count, D)` is at most
/// [`EXACT_SUBSET_LIMIT`], otherwise randomized with
/// [`GENERATOR_RANDOMIZED_SAMPLES`] subsets.
pub fn gen_strong_smu(
    d: usize,
    count: usize,
    seed: u64,
    max_retries: usize,
    tol_rank: f64,
) -> Result<(DirectionSet, SmuReport)> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let dl = lifted_dim(d);
    if count < dl {
        return Err(Error::InsufficientDirections {
            required: dl,
            count,
        });
    }
    let exact = binomial(count, dl) <= EXACT_SUBSET_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..=max_retries {
        let vectors = (0..count).map(|_| sphere_point(&mut rng, d)).collect();
        let set = DirectionSet::new(d, vectors)?;
        let mode = if exact {
            CertMode::Exact
        } else {
            CertMode::Randomized {
                samples: GENERATOR_RANDOMIZED_SAMPLES,
                seed: rng.next_u64(),
            }
        };
        let report = is_strong_smu(&set, tol_rank, mode)?;
        if report.is_strong != Some(false) {
            return Ok((set, report));
        }
    }
    Err(Error::GenerationFailed(max_retries + 1))
}

fn sphere_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
