//! Certify equality or distinctness of finite Gaussian and Student-t
//! mixtures in `R^d` from their one-dimensional projections on a finite set
//! of lines.
//!
//! Two mixtures of at most `m` components agree as soon as their projections
//! agree on every line of a strong sm-uniqueness set with at least
//! [`required_lines`]`(d, m)` members. This crate builds the pieces:
//!
//! * [`model`]: validated mixtures, densities, characteristic functions and
//!   canonical forms;
//! * [`smu`]: the quadratic lifting, (strong) sm-uniqueness certification
//!   and random generation of certified direction sets;
//! * [`projection`]: exact projection of a mixture onto a line;
//! * [`equality`]: the finite-projection decision procedure and a direct
//!   canonical-form check;
//! * [`identifiability`]: Gram-matrix tests for linear independence of 1D
//!   density families;
//! * [`counterexamples`]: distinct mixture pairs whose projections agree on
//!   too few lines.

mod canonical;
pub mod counterexamples;
pub mod equality;
pub mod error;
pub mod identifiability;
pub mod mix1d;
pub mod model;
pub mod projection;
pub mod quadrature;
pub mod smu;

pub use counterexamples::{
    build_m2_example, build_polygon_example, reflection_deviation, verify_counterexample,
    Counterexample, VerificationRecord,
};
pub use equality::{
    compare_1d, compare_canonical, compare_via_projections, Comparison, ComparisonVerdict,
    Tolerances, Verdict,
};
pub use error::{Error, Result};
pub use identifiability::{gauss_l2_inner, independence_test, t_l2_inner, GramReport};
pub use mix1d::{Component1D, Mixture1D};
pub use model::{
    Component, CovMatrix, Family, GaussianComponent, MixtureModel, RawComponent, RawMixture,
    TComponent,
};
pub use projection::{project_component, project_mixture, unit_direction};
pub use smu::{
    gen_strong_smu, is_smu, is_strong_smu, lift, lifted_dim, required_lines, CertMode,
    DirectionSet, LiftedVector, ModeTag, SmuReport,
};
