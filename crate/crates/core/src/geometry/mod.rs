//! Geometric primitives shared by all estimators.
//!
//! Curves are [`Polyline`]s; every curve integral becomes either an exact sum over
//! segment/region intervals or a midpoint rule over [`ArcSample`]s.

mod point;
pub(crate) mod polyline;
pub mod region;
pub(crate) mod set;
mod window;

pub use point::Point;
pub use polyline::{resample_by_arclength, ArcSample, Polyline};
pub use region::{intersection_length, Ball, Dilation, Everywhere, Region};
pub use set::CurveSet;
pub use window::{clip_to_window, erode_window, Window};

/// Default relative tolerance for adaptive curve integration (times the curve length).
pub const DEFAULT_EPS_LEN_REL: f64 = 1e-6;

/// Distance from `p` to the closed segment `a`–`b`.
pub fn point_to_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let e = *b - *a;
    let len2 = e.norm2();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((*p - *a).dot(&e) / len2).clamp(0.0, 1.0);
    p.dist(&a.lerp(b, t))
}

/// Exact minimum distance from `p` to any segment of `c`.
pub fn point_to_polyline_distance(p: &Point, c: &Polyline) -> f64 {
    c.segments().map(|(a, b)| point_to_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
}

/// Minimum distance between the closed segments `p0`–`p1` and `q0`–`q1`.
pub fn segment_segment_distance(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> f64 {
    let d1 = *p1 - *p0;
    let d2 = *q1 - *q0;
    let r = *p0 - *q0;
    let a = d1.norm2();
    let e = d2.norm2();
    let f = d2.dot(&r);
    let (s, t);
    if a == 0.0 && e == 0.0 {
        return p0.dist(q0);
    }
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    p0.lerp(p1, s).dist(&q0.lerp(q1, t))
}
