#![allow(dead_code)]

use cwmix::{Family, MixtureModel, RawComponent, RawMixture};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Random symmetric positive-definite matrix with eigenvalues in `[lo, hi]`.
pub fn random_cov(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let g: DMatrix<f64> = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    let q = g.qr().q();
    let eig = DMatrix::from_diagonal(&DVector::from_fn(d, |_, _| rng.random_range(lo..hi)));
    let a: DMatrix<f64> = &q * eig * q.transpose();
    (0..d)
        .map(|i| (0..d).map(|j| 0.5 * (a[(i, j)] + a[(j, i)])).collect())
        .collect()
}

pub fn random_weights(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// Random mixture with means in `[-5, 5]^d` and covariance eigenvalues in
/// `[0.2, 5]`; t components draw dof from `{1, 3, 5}`.
pub fn random_raw(rng: &mut ChaCha8Rng, family: Family, d: usize, m: usize) -> RawMixture {
    let weights = random_weights(rng, m);
    let components = weights
        .into_iter()
        .map(|weight| RawComponent {
            weight,
            mean: (0..d).map(|_| rng.random_range(-5.0..5.0)).collect(),
            cov: random_cov(rng, d, 0.2, 5.0),
            dof: match family {
                Family::Gaussian => None,
                Family::StudentT => Some([1, 3, 5][rng.random_range(0..3)]),
            },
        })
        .collect();
    RawMixture {
        family,
        dim: d,
        components,
    }
}

pub fn random_model(rng: &mut ChaCha8Rng, family: Family, d: usize, m: usize) -> MixtureModel {
    MixtureModel::validate(&random_raw(rng, family, d, m)).expect("valid random mixture")
}

/// Same distribution, components reversed and the first one split in two
/// halves.
pub fn reexpress(raw: &RawMixture) -> RawMixture {
    let mut components: Vec<RawComponent> = raw.components.iter().rev().cloned().collect();
    let first = components.pop().expect("non-empty");
    let mut half = first.clone();
    half.weight = 0.5 * first.weight;
    let mut rest = first;
    rest.weight -= half.weight;
    components.insert(0, half);
    components.push(rest);
    RawMixture {
        components,
        ..raw.clone()
    }
}

/// Shift one mean entry by `delta`.
pub fn perturb(raw: &RawMixture, component: usize, coord: usize, delta: f64) -> RawMixture {
    let mut out = raw.clone();
    out.components[component].mean[coord] += delta;
    out
}

/// Certified direction set for mixtures of `m` components in `R^d`, cached
/// per `(d, m, seed)`.
pub fn certified_set(d: usize, m: usize, seed: u64) -> cwmix::DirectionSet {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, u64), cwmix::DirectionSet>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&(d, m, seed)) {
        return s.clone();
    }
    let k = cwmix::required_lines(d as u64, m as u64).unwrap() as usize;
    let (s, report) = cwmix::gen_strong_smu(d, k, seed, 3, cwmix::smu::DEFAULT_TOL_RANK).unwrap();
    assert_eq!(report.is_strong, Some(true), "exact certification expected");
    cache.lock().unwrap().insert((d, m, seed), s.clone());
    s
}

/// Adaptive quadrature over `pieces` equal subintervals, so narrow peaks
/// inside a wide range cannot slip between the first sample points.
pub fn integrate_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            cwmix::quadrature::integrate(&f, lo, lo + h, tol / pieces as f64, 0.0)
                .expect("smooth integrand")
                .value
        })
        .sum()
}
