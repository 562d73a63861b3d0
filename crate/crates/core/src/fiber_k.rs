//! The fiber-process K-function `K_f`.
//!
//! `K_f(r)` is the expected fiber length inside `b(u, r)` around a typical fiber point `u`,
//! scaled by the length intensity `ρ`. Two estimators:
//!
//! - [`kf_direct`]: `K̂_f(r) = 1 / (ρ̂² |W ⊖ r|) ∫_{Φ ∩ W⊖r} L(b(u, r)) du`, where the outer
//!   integral is a midpoint rule along the fibers and `L(b(u, r))` is computed exactly from
//!   segment/ball intersections. The ball around `u` includes `u`'s own fiber.
//! - [`kf_via_cox`]: scatter Poisson points along the fibers and apply the point-pattern
//!   estimator; both estimate the same function.

use rand_distr::{Distribution, Exp};

use crate::error::{invalid, Error, Result};
use crate::estimate::EstimateCurve;
use crate::exec::{self, Execution};
use crate::geometry::polyline::resample_by_spacing;
use crate::geometry::region::ball_interval;
use crate::geometry::{clip_to_window, CurveSet, Point, Polyline, Window};
use crate::point_k::{check_radii, ripley_k_points_at, LabeledPointSet};
use crate::spatial::SegmentIndex;
use crate::synth::rng::stream_rng;

/// Fibers observed through a window. Same data as a [`CurveSet`].
pub type FiberSet = CurveSet;

/// Length intensity: fiber length per unit volume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntensityEstimate {
    pub rho: f64,
}

/// `ρ̂ = Σ_i |γ_i ∩ W| / |W|`.
pub fn estimate_rho(fs: &FiberSet) -> Result<IntensityEstimate> {
    let total = fs.total_clipped_length();
    if !(total > 0.0) {
        return Err(invalid("fibers have zero total length inside the window"));
    }
    Ok(IntensityEstimate { rho: total / fs.window().volume() })
}

/// Quadrature and execution settings for [`kf_direct`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KfConfig {
    /// Outer arc-sample spacing. Defaults to `min(r_min / 10, L_total / 1e4)`.
    pub spacing: Option<f64>,
    pub execution: Execution,
}

/// Result of [`kf_direct`].
#[derive(Clone, Debug, PartialEq)]
pub struct FiberKEstimate {
    pub curve: EstimateCurve,
    /// First requested radius whose erosion was empty; it and all larger radii were dropped.
    pub truncated_at: Option<f64>,
}

/// `n` uniformly spaced radii up to (but short of) the largest radius with a non-empty
/// erosion of `w`.
pub fn default_radii(w: &Window, n: usize) -> Vec<f64> {
    let lim = 0.5 * w.min_side() * (1.0 - 1e-6);
    (1..=n).map(|k| lim * k as f64 / n as f64).collect()
}

fn default_spacing(radii: &[f64], total_len: f64) -> f64 {
    let r_min = radii.iter().copied().find(|&r| r > 0.0).unwrap_or(1.0);
    (r_min / 10.0).min(total_len / 1e4)
}

/// Total fiber length in the closed ball `b(u, r)`, over candidate segments of `index`.
fn ball_length(index: &SegmentIndex, u: &Point, r: f64) -> f64 {
    let mut acc = 0.0;
    index.for_each_near(u, r, |k| {
        if let Some((t0, t1)) = ball_interval(&index.starts[k], &index.ends[k], u, r) {
            acc += (t1 - t0) * index.lengths[k];
        }
    });
    acc
}

/// Length of `c` in `b(u, r)`, exact per segment.
fn curve_ball_length(c: &Polyline, u: &Point, r: f64) -> f64 {
    c.segments()
        .enumerate()
        .filter_map(|(k, (a, b))| ball_interval(a, b, u, r).map(|(t0, t1)| (t1 - t0) * c.segment_length(k)))
        .sum()
}

/// Midpoint-rule nodes `(point, weight)` on `c ∩ a`.
fn outer_nodes(c: &Polyline, a: &Window, h: f64) -> Vec<(Point, f64)> {
    clip_to_window(c, a).iter().flat_map(|piece| resample_by_spacing(piece, h)).map(|s| (s.point, s.weight)).collect()
}

/// Direct erosion-window estimator of `K_f` at the given ascending radii.
pub fn kf_direct(fs: &FiberSet, radii: &[f64], cfg: &KfConfig) -> Result<FiberKEstimate> {
    check_radii(radii)?;
    let rho = estimate_rho(fs)?.rho;
    let w = fs.window();
    let h = match cfg.spacing {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(invalid(format!("quadrature spacing must be positive, got {h}"))),
        None => default_spacing(radii, fs.total_clipped_length()),
    };

    let mut usable = Vec::with_capacity(radii.len());
    let mut truncated_at = None;
    for &r in radii {
        match w.erode(r) {
            Ok(e) => usable.push((r, e)),
            Err(Error::EmptyErosion { .. }) => {
                truncated_at = Some(r);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let r_max = usable.last().map(|(r, _)| *r).unwrap_or(0.0);
    let index = SegmentIndex::build(fs.curves(), (r_max / 2.0).max(1e-9));

    let mut values = Vec::with_capacity(usable.len());
    for (r, eroded) in &usable {
        let nodes: Vec<(Point, f64)> = fs.curves().iter().flat_map(|c| outer_nodes(c, eroded, h)).collect();
        let contrib = exec::map_range(cfg.execution, nodes.len(), |k| {
            let (u, wgt) = nodes[k];
            wgt * ball_length(&index, &u, *r)
        });
        let integral = exec::tree_sum(&contrib);
        values.push(integral / (rho * rho * eroded.volume()));
    }
    let r_used: Vec<f64> = usable.iter().map(|(r, _)| *r).collect();
    Ok(FiberKEstimate { curve: EstimateCurve::from_parts(&r_used, values)?, truncated_at })
}

/// Association between two fibers:
/// `d_A(γ_i, γ_j) = ∫_{γ_i ∩ A} ∫_{γ_j} 1[‖v − u‖ <= r] dv du`.
///
/// The inner integral is exact; the outer one is a midpoint rule with spacing `h`.
pub fn d_a(gamma_i: &Polyline, gamma_j: &Polyline, a: &Window, r: f64, h: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(invalid(format!("radius must be non-negative, got {r}")));
    }
    if !(h > 0.0) {
        return Err(invalid(format!("quadrature spacing must be positive, got {h}")));
    }
    let terms: Vec<f64> =
        outer_nodes(gamma_i, a, h).iter().map(|(u, wgt)| wgt * curve_ball_length(gamma_j, u, r)).collect();
    Ok(exec::tree_sum(&terms))
}

/// Poisson points of intensity `lambda` (per unit length) along every fiber.
///
/// Fiber `k` draws from its own stream keyed by `(seed, k)`: exponential gaps along its arc
/// length. Points inside the window are interior, the rest are guard points.
pub fn cox_sample(fs: &FiberSet, lambda: f64, seed: u64) -> Result<LabeledPointSet> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid(format!("Poisson intensity must be positive, got {lambda}")));
    }
    let gap = Exp::new(lambda).map_err(|e| invalid(e.to_string()))?;
    let mut points = Vec::new();
    for (k, c) in fs.curves().iter().enumerate() {
        let mut rng = stream_rng(seed, STREAM_COX, k as u64);
        let len = c.length();
        let mut s = gap.sample(&mut rng);
        while s < len {
            points.push(c.point_at_arc(s));
            s += gap.sample(&mut rng);
        }
    }
    LabeledPointSet::from_points(points, *fs.window())
}

const STREAM_COX: u64 = 0xC0C5;

/// Monte Carlo estimate of `K_f`: [`cox_sample`] followed by the point-pattern estimator
/// (evaluated at `radii` by range counting), normalized by the realized interior count.
pub fn kf_via_cox(fs: &FiberSet, lambda: f64, seed: u64, radii: &[f64], exec: Execution) -> Result<EstimateCurve> {
    let ps = cox_sample(fs, lambda, seed)?;
    let n_int = ps.interior().len();
    if n_int == 0 || (n_int == 1 && ps.guard().is_empty()) {
        return Err(Error::TooFewPoints { realized: ps.len() });
    }
    ripley_k_points_at(&ps, radii, exec)
}
