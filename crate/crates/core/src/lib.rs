//! Dynamical invariants of generalized iterated function systems, computed on
//! finite metric models.
//!
//! A *function system* is a finite metric space together with a finite family
//! of partial injections, each defined on its own domain. Orbits follow any
//! admissible sequence of maps, so the objects counted here (separated sets,
//! capacities, tracing orbits) range over pairs `(point, symbol sequence)`.
//!
//! Module map:
//!
//! * [`metric`]: finite metric models, Hausdorff and Gromov-Hausdorff distance,
//!   realization gluing.
//! * [`ifs`]: partial maps, function systems, the admissibility graph and the
//!   witness-set test.
//! * [`orbit`]: eventually periodic symbol sequences, orbit evaluation and joint
//!   orbit distances.
//! * [`complexity`]: spanning/separated counts, entropy and metric mean
//!   dimension estimates.
//! * [`cover`]: finite covers, order, joins, pullbacks, the refinement minimum
//!   and compatibility checks.
//! * [`capacity`]: orbit capacity, the small-boundary check, partitions of
//!   unity and the compatible embedding map.
//! * [`gluing`]: orbit sequences, tracing, gluing-orbit diagnostics and the
//!   positive-entropy construction.
//! * [`gallery`], [`config`], [`report`]: curated systems, file formats and the
//!   report runner used by the `ifs-mdim` binary.

pub mod capacity;
pub mod complexity;
pub mod config;
pub mod cover;
pub mod error;
pub mod gallery;
pub mod gluing;
pub mod ifs;
pub mod metric;
pub mod orbit;
pub mod report;

pub use error::{Error, Result};
pub use ifs::{AdmissibilityGraph, FunctionSystem, PartialMap};
pub use metric::MetricSpace;
pub use orbit::SigmaGenerator;

/// Global comparison tolerance for distances.
pub const TOL: f64 = 1e-9;

/// `a < b` up to [`TOL`].
#[inline]
pub fn lt(a: f64, b: f64) -> bool {
    a < b - TOL
}

/// `a >= b` up to [`TOL`]; the exact complement of [`lt`].
#[inline]
pub fn ge(a: f64, b: f64) -> bool {
    !lt(a, b)
}

/// `a <= b` up to [`TOL`].
#[inline]
pub fn le(a: f64, b: f64) -> bool {
    a <= b + TOL
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}
