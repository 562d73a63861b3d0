//! Ripley's K-function for point patterns and three generalizations to sets of curves.
//!
//! - [`point_k`]: the sorting estimator for point sets, with guard ("blue") points and the
//!   complete-spatial-randomness reference.
//! - [`fiber_k`]: the fiber-process K-function, estimated directly on an eroded window or by
//!   Monte Carlo through a Cox process of points scattered along the fibers.
//! - [`morph_k`]: a K-function built from dilation neighbourhoods of curves.
//! - [`current_k`]: a K-function built from the currents (reproducing-kernel) distance between
//!   oriented curves.
//! - [`synth`]: seeded generators for point patterns and gradient-flow curve sets.
//!
//! Curves are polylines throughout. Heavy pairwise loops run on rayon when the `parallel`
//! feature is enabled (the default); every kernel returns bit-identical results with or
//! without it.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod current_k;
pub mod error;
pub mod estimate;
pub mod exec;
pub mod fiber_k;
pub mod geometry;
pub mod morph_k;
pub mod point_k;
pub mod synth;

mod spatial;

pub use error::{Error, Result};
pub use estimate::{EstimateCurve, KSample, StepCounts};
pub use exec::Execution;
pub use geometry::{ArcSample, CurveSet, Point, Polyline, Window};
