//! Seeded generators for the point patterns and random curve sets used in experiments.
//!
//! Every random entity (point, curve, cluster centre) draws from its own stream keyed by
//! `(seed, domain, index)`, so adding entities never perturbs earlier ones.

mod curves;
mod field;
mod points;
pub mod rng;

pub use curves::{gen_curveset, CurvePreset, CurveSetSpec, SeedDistribution};
pub use field::{gradient_flow_curve, FlowParams, QuadraticField};
pub use points::{gen_points, PointPattern};
