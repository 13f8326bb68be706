//! Quadratic stochastic operators indexed by a finite Abelian group.
//!
//! Given a group `G` and a heredity measure `mu` on it, the operator
//! `V(x) = mu (*) x (*) x` (additive convolution) maps the probability
//! simplex over `G` to itself. This crate builds such operators, simulates
//! their trajectories with an exact-rational or float backend, and decides
//! their structural behaviour: how supports evolve, which subgroups absorb
//! them, where trajectories converge, which orbits are periodic, and
//! whether the operator is regular.
//!
//! The [`abelian`] module supplies the group arithmetic, [`simplex`] the
//! probability vectors, [`qso`] the operator and its iteration, and
//! [`analysis`] the structural results. [`codec`] fixes the JSON/CSV wire
//! formats and [`sampling`] provides seeded random points.

#![forbid(unsafe_code)]

pub mod abelian;
pub mod analysis;
pub mod codec;
pub mod error;
pub mod qso;
pub mod sampling;
pub mod scalar;
pub mod simplex;

pub use abelian::{
    enumerate_subgroups, enumerate_subgroups_bounded, Coset, DoublingOrbit, ElementSet,
    GroupElement, GroupSpec, Subgroup, DEFAULT_ENUMERATION_BOUND,
};
pub use analysis::{
    classify, convergence_rate, ergodic_average, invariant_subgroups, is_coset, is_invariant,
    is_regular, limit_profile, periodic_orbits, predict_support_dynamics, ClassificationReport,
    LimitKind, LimitProfile, PeriodicOrbit, RatePoint, RegularityVerdict, RegularityWitness,
    SupportForecast, DEFAULT_BUDGET, DEFAULT_TOLERANCE,
};
pub use error::{Error, ErrorCategory, Result};
pub use qso::{
    convolve, iterate, iterate_with, nth_iterate, nth_iterate_with, IterationLimits, QsoOperator,
    StochasticityReport, Trajectory,
};
pub use scalar::{Rational, Scalar};
pub use simplex::{Norm, SimplexPoint, Support, DEFAULT_SUPPORT_THRESHOLD};
