//! The morphological K-function `K_m`.
//!
//! ```text
//! K_m(r) = 1 / (n ρ̂) · Σ_j 1 / |c_j ∩ W| · Σ_{i≠j} |c_i ∩ W ∩ (c_j ⊕ b(0, r))|
//! ```
//!
//! with `ρ̂ = Σ_j |c_j ∩ W| / |W|`. The dilation uses the full extent of `c_j`, while lengths
//! are measured inside the window only. Dilations are exact: the length of a segment inside
//! `c_j ⊕ b(0, r)` is the union of its intervals inside the capsules around the segments of
//! `c_j`.

use crate::error::{invalid, Result};
use crate::estimate::EstimateCurve;
use crate::exec::{self, Execution};
use crate::geometry::region::{capsule_interval, intervals_length, normalize_tail, Interval};
use crate::geometry::set::window_length;
use crate::geometry::{intersection_length, segment_segment_distance, CurveSet, Dilation, Polyline, Region, Window};
use crate::point_k::check_radii;
use crate::spatial::SegmentIndex;

/// Membership in `c ⊕ b(0, r)` (closed: points at distance exactly `r` belong).
pub fn dilation_membership(c: &Polyline, r: f64) -> Result<Dilation<'_>> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(invalid(format!("dilation radius must be finite and non-negative, got {r}")));
    }
    Ok(Dilation { curve: c, radius: r })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KmConfig {
    pub execution: Execution,
}

/// Result of [`km`].
#[derive(Clone, Debug, PartialEq)]
pub struct MorphKEstimate {
    pub curve: EstimateCurve,
    /// Curves with zero length inside the window; they were left out of the outer sum.
    pub skipped: Vec<usize>,
}

/// `n` uniformly spaced radii up to the diameter of the bounding box of the window and all
/// curves, where `K_m` saturates.
pub fn default_radii(cs: &CurveSet, n: usize) -> Vec<f64> {
    let d = cs.extent_diameter();
    (1..=n).map(|k| d * k as f64 / n as f64).collect()
}

/// `|c_i ∩ W ∩ (c_j ⊕ b(0, r))|` through the generic region machinery.
pub fn km_inner_term(c_i: &Polyline, c_j: &Polyline, w: &Window, r: f64, eps_len: f64) -> f64 {
    intersection_length(c_i, &(*w).and(Dilation { curve: c_j, radius: r }), eps_len)
}

/// `K_m` at the given ascending radii.
pub fn km(cs: &CurveSet, radii: &[f64], cfg: &KmConfig) -> Result<MorphKEstimate> {
    cs.require_at_least(2, "K_m")?;
    check_radii(radii)?;
    let n = cs.len();
    let w = cs.window();
    let clipped: Vec<f64> = cs.curves().iter().map(|c| window_length(c, w)).collect();
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return Err(invalid("curves have zero total length inside the window"));
    }
    let rho = total / w.volume();
    let skipped: Vec<usize> = (0..n).filter(|&j| clipped[j] <= 0.0).collect();
    let r_max = radii.last().copied().unwrap_or(0.0);

    let per_j = exec::map_range(cfg.execution, n, |j| {
        if clipped[j] <= 0.0 {
            return vec![0.0; radii.len()];
        }
        let cj = &cs.curves()[j];
        let index = SegmentIndex::build([cj], (r_max / 2.0).max(1e-9));
        let mut sums = vec![0.0; radii.len()];
        let mut scratch = Scratch::default();
        for (i, ci) in cs.curves().iter().enumerate() {
            if i == j || clipped[i] <= 0.0 {
                continue;
            }
            let inner = dilated_lengths(ci, w, &index, radii, &mut scratch);
            for (s, v) in sums.iter_mut().zip(inner) {
                *s += v;
            }
        }
        sums.into_iter().map(|s| s / clipped[j]).collect()
    });

    let norm = 1.0 / (n as f64 * rho);
    let mut column = vec![0.0; n];
    let values = (0..radii.len()).map(|k| {
        for (j, row) in per_j.iter().enumerate() {
            column[j] = row[k];
        }
        exec::tree_sum(&column) * norm
    });
    let values: Vec<f64> = values.collect();
    Ok(MorphKEstimate { curve: EstimateCurve::from_parts(radii, values)?, skipped })
}

#[derive(Default)]
struct Scratch {
    candidates: Vec<(f64, usize)>,
    intervals: Vec<Interval>,
}

/// `|c ∩ W ∩ N_r|` for every radius, where `N_r` is the dilation of the curve in `index`.
fn dilated_lengths(c: &Polyline, w: &Window, index: &SegmentIndex, radii: &[f64], scratch: &mut Scratch) -> Vec<f64> {
    let r_max = *radii.last().expect("non-empty radii");
    let mut out = vec![0.0; radii.len()];
    for (k, (a, b)) in c.segments().enumerate() {
        let Some((t0, t1)) = w.segment_interval(a, b) else { continue };
        if t1 <= t0 {
            continue;
        }
        let seg_len = c.segment_length(k);
        let mid = a.lerp(b, 0.5);
        let cands = &mut scratch.candidates;
        cands.clear();
        index.for_each_near(&mid, r_max + 0.5 * seg_len, |q| {
            let d = segment_segment_distance(a, b, &index.starts[q], &index.ends[q]);
            if d <= r_max {
                cands.push((d, q));
            }
        });
        if cands.is_empty() {
            continue;
        }
        cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let full = t1 - t0;
        for (ri, &r) in radii.iter().enumerate() {
            let ivs = &mut scratch.intervals;
            ivs.clear();
            for &(d, q) in cands.iter() {
                if d > r {
                    break;
                }
                if let Some((s, t)) = capsule_interval(a, b, &index.starts[q], &index.ends[q], r) {
                    ivs.push((s.max(t0), t.min(t1)));
                }
            }
            normalize_tail(ivs, 0);
            let covered = intervals_length(ivs);
            if ivs.len() == 1 && ivs[0] == (t0, t1) {
                // dilations grow with r: covered from here on
                for v in &mut out[ri..] {
                    *v += full * seg_len;
                }
                break;
            }
            out[ri] += covered * seg_len;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use approx::assert_relative_eq;

    fn seg(x0: f64, y0: f64, x1: f64, y1: f64) -> Polyline {
        Polyline::new(vec![Point::xy(x0, y0), Point::xy(x1, y1)]).unwrap()
    }

    #[test]
    fn parallel_segments_example() {
        let w = Window::cube(2, -1.0, 2.0).unwrap();
        let cs = CurveSet::new(vec![seg(0.0, 0.0, 1.0, 0.0), seg(0.0, 0.2, 1.0, 0.2)], w).unwrap();
        let radii = [0.1, 0.19, 0.2, 0.3, 1.0];
        let est = km(&cs, &radii, &KmConfig::default()).unwrap();
        let rho = 2.0 / 9.0;
        let expected = [0.0, 0.0, 1.0 / rho, 1.0 / rho, 1.0 / rho];
        for (s, e) in est.curve.samples().iter().zip(expected) {
            assert_relative_eq!(s.value, e, max_relative = 1e-12);
        }
        assert!(est.skipped.is_empty());
    }

    #[test]
    fn needs_two_curves() {
        let w = Window::cube(2, 0.0, 1.0).unwrap();
        let cs = CurveSet::new(vec![seg(0.0, 0.5, 1.0, 0.5)], w).unwrap();
        assert!(km(&cs, &[0.1], &KmConfig::default()).is_err());
    }

    #[test]
    fn far_apart_curves_give_zero() {
        let w = Window::cube(2, 0.0, 10.0).unwrap();
        let cs = CurveSet::new(vec![seg(1.0, 1.0, 2.0, 1.0), seg(1.0, 8.0, 2.0, 8.0)], w).unwrap();
        let est = km(&cs, &[0.5, 1.0, 5.0], &KmConfig::default()).unwrap();
        assert!(est.curve.values().all(|v| v == 0.0));
    }

    #[test]
    fn curve_outside_window_is_skipped() {
        let w = Window::cube(2, 0.0, 1.0).unwrap();
        let cs =
            CurveSet::new(vec![seg(0.0, 0.5, 1.0, 0.5), seg(0.0, 0.6, 1.0, 0.6), seg(3.0, 3.0, 4.0, 3.0)], w).unwrap();
        let est = km(&cs, &[0.2], &KmConfig::default()).unwrap();
        assert_eq!(est.skipped, vec![2]);
        // two mutually covering unit curves, rho = 2, n = 3
        assert_relative_eq!(est.curve.samples()[0].value, 2.0 / (3.0 * 2.0), max_relative = 1e-12);
    }

    #[test]
    fn dilation_of_outside_part_counts_inside() {
        // c_j lies outside W, but its dilation reaches c_i inside W
        let w = Window::cube(2, 0.0, 1.0).unwrap();
        let ci = seg(0.0, 0.95, 1.0, 0.95);
        let cj = Polyline::new(vec![Point::xy(0.0, 1.02), Point::xy(1.0, 1.02), Point::xy(1.0, 0.5)]).unwrap();
        let inner = km_inner_term(&ci, &cj, &w, 0.1, 1e-9);
        assert_relative_eq!(inner, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn dilation_membership_rejects_negative_radius() {
        let c = seg(0.0, 0.0, 1.0, 0.0);
        assert!(dilation_membership(&c, -0.1).is_err());
        let d = dilation_membership(&c, 0.1).unwrap();
        use crate::geometry::Region;
        assert!(d.contains(&Point::xy(0.5, 0.1)));
    }
}
