//! Shared fixtures for the criterion benches.

use cwmix::{build_m2_example, gen_strong_smu, DirectionSet, MixtureModel};

/// The covariance-swap pair together with a certified set of seven lines.
pub fn m2_pair_with_certified_lines(seed: u64) -> (MixtureModel, MixtureModel, DirectionSet) {
    let ex = build_m2_example();
    let (s, _) = gen_strong_smu(2, 7, seed, 10, cwmix::smu::DEFAULT_TOL_RANK)
        .expect("seven random lines certify");
    (ex.p, ex.q, s)
}
