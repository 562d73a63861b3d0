//! Regions of space and the length of a curve inside them.
//!
//! A [`Region`] reports, for a segment `a + t (b - a)`, the parameter intervals lying inside
//! it. Boxes, balls and dilations of polylines compute those intervals in closed form;
//! arbitrary predicates fall back to adaptive bisection.

use super::{point_to_polyline_distance, segment_segment_distance, Point, Polyline, Window};

/// Closed parameter interval `[t0, t1]` on a segment.
pub type Interval = (f64, f64);

pub trait Region {
    fn contains(&self, p: &Point) -> bool;

    /// Appends the sorted, disjoint parameter intervals of segment `a`–`b` inside the
    /// region. `tol` is an absolute length tolerance for approximate implementations.
    fn segment_intervals(&self, a: &Point, b: &Point, tol: f64, out: &mut Vec<Interval>) {
        bisect_intervals(self, a, b, tol, out)
    }

    /// Both regions at once.
    fn and<R: Region>(self, other: R) -> And<Self, R>
    where
        Self: Sized,
    {
        And(self, other)
    }
}

impl<R: Region + ?Sized> Region for &R {
    fn contains(&self, p: &Point) -> bool {
        (**self).contains(p)
    }
    fn segment_intervals(&self, a: &Point, b: &Point, tol: f64, out: &mut Vec<Interval>) {
        (**self).segment_intervals(a, b, tol, out)
    }
}

/// Length of `c` inside `region`: `∫_c 1[x ∈ region] ds`.
///
/// `eps_len` bounds the error of bisection-based regions per boundary crossing; exact
/// regions ignore it.
pub fn intersection_length<R: Region + ?Sized>(c: &Polyline, region: &R, eps_len: f64) -> f64 {
    let mut buf = Vec::new();
    c.segments()
        .enumerate()
        .map(|(k, (a, b))| {
            buf.clear();
            region.segment_intervals(a, b, eps_len, &mut buf);
            intervals_length(&buf) * c.segment_length(k)
        })
        .sum()
}

/// Membership from a closure; intervals by bisection.
pub struct Predicate<F>(pub F);

impl<F: Fn(&Point) -> bool> Region for Predicate<F> {
    fn contains(&self, p: &Point) -> bool {
        (self.0)(p)
    }
}

/// All of space.
#[derive(Clone, Copy, Debug, Default)]
pub struct Everywhere;

impl Region for Everywhere {
    fn contains(&self, _: &Point) -> bool {
        true
    }
    fn segment_intervals(&self, _: &Point, _: &Point, _: f64, out: &mut Vec<Interval>) {
        out.push((0.0, 1.0));
    }
}

impl Region for Window {
    fn contains(&self, p: &Point) -> bool {
        Window::contains(self, p)
    }
    fn segment_intervals(&self, a: &Point, b: &Point, _: f64, out: &mut Vec<Interval>) {
        if let Some((t0, t1)) = self.segment_interval(a, b) {
            if t1 > t0 {
                out.push((t0, t1));
            }
        }
    }
}

/// Closed ball `b(center, radius)`.
#[derive(Clone, Copy, Debug)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Region for Ball {
    fn contains(&self, p: &Point) -> bool {
        p.dist2(&self.center) <= self.radius * self.radius
    }
    fn segment_intervals(&self, a: &Point, b: &Point, _: f64, out: &mut Vec<Interval>) {
        if let Some(iv) = ball_interval(a, b, &self.center, self.radius) {
            out.push(iv);
        }
    }
}

/// The dilation `c ⊕ b(0, r)`: points within distance `r` of the curve.
#[derive(Clone, Copy, Debug)]
pub struct Dilation<'a> {
    pub curve: &'a Polyline,
    pub radius: f64,
}

impl Region for Dilation<'_> {
    fn contains(&self, p: &Point) -> bool {
        point_to_polyline_distance(p, self.curve) <= self.radius
    }
    fn segment_intervals(&self, a: &Point, b: &Point, _: f64, out: &mut Vec<Interval>) {
        let start = out.len();
        for (q0, q1) in self.curve.segments() {
            if segment_segment_distance(a, b, q0, q1) > self.radius {
                continue;
            }
            if let Some(iv) = capsule_interval(a, b, q0, q1, self.radius) {
                out.push(iv);
            }
        }
        normalize_tail(out, start);
    }
}

/// Intersection of two regions.
#[derive(Clone, Copy, Debug)]
pub struct And<A, B>(pub A, pub B);

impl<A: Region, B: Region> Region for And<A, B> {
    fn contains(&self, p: &Point) -> bool {
        self.0.contains(p) && self.1.contains(p)
    }
    fn segment_intervals(&self, a: &Point, b: &Point, tol: f64, out: &mut Vec<Interval>) {
        let mut left = Vec::new();
        self.0.segment_intervals(a, b, tol, &mut left);
        if left.is_empty() {
            return;
        }
        let mut right = Vec::new();
        self.1.segment_intervals(a, b, tol, &mut right);
        intersect_sorted(&left, &right, out);
    }
}

const PRE_SPLIT: usize = 64;

/// Adaptive bisection over 64 equal pieces: a piece is accepted whole when its endpoints
/// and midpoint agree on membership, and split at its midpoint once shorter than `tol`.
/// Holes or excursions that fall between three agreeing probes are missed.
pub fn bisect_intervals<R: Region + ?Sized>(region: &R, a: &Point, b: &Point, tol: f64, out: &mut Vec<Interval>) {
    let len = a.dist(b);
    let start = out.len();
    let min_dt = if len > 0.0 { tol / len } else { f64::INFINITY };
    // coarse pass first so short excursions between probe points are not missed
    let mut prev = (0.0, region.contains(a));
    for k in 1..=PRE_SPLIT {
        let t = k as f64 / PRE_SPLIT as f64;
        let p = if k == PRE_SPLIT { *b } else { a.lerp(b, t) };
        let next = (t, region.contains(&p));
        bisect(region, a, b, prev, next, min_dt, out, 0);
        prev = next;
    }
    normalize_tail(out, start);
}

#[allow(clippy::too_many_arguments)]
fn bisect<R: Region + ?Sized>(
    region: &R,
    a: &Point,
    b: &Point,
    (t0, in0): (f64, bool),
    (t1, in1): (f64, bool),
    min_dt: f64,
    out: &mut Vec<Interval>,
    depth: u32,
) {
    let tm = 0.5 * (t0 + t1);
    let inm = region.contains(&a.lerp(b, tm));
    if in0 == inm && inm == in1 {
        if in0 {
            out.push((t0, t1));
        }
        return;
    }
    if t1 - t0 < min_dt || depth >= 60 {
        if in0 {
            out.push((t0, tm));
        }
        if in1 {
            out.push((tm, t1));
        }
        return;
    }
    bisect(region, a, b, (t0, in0), (tm, inm), min_dt, out, depth + 1);
    bisect(region, a, b, (tm, inm), (t1, in1), min_dt, out, depth + 1);
}

/// Parameter interval of segment `a`–`b` inside the closed ball `b(c, r)`.
pub(crate) fn ball_interval(a: &Point, b: &Point, c: &Point, r: f64) -> Option<Interval> {
    let e = *b - *a;
    let f = *a - *c;
    let qa = e.norm2();
    let qb = 2.0 * e.dot(&f);
    let qc = f.norm2() - r * r;
    solve_le_zero(qa, qb, qc).and_then(clamp_unit)
}

/// Parameter interval of segment `a`–`b` inside the capsule of radius `r` around `q0`–`q1`.
///
/// The capsule is convex and covered by its two end balls and its cylinder, so the hull of
/// the three intervals is exact.
pub(crate) fn capsule_interval(a: &Point, b: &Point, q0: &Point, q1: &Point, r: f64) -> Option<Interval> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut absorb = |iv: Option<Interval>| {
        if let Some((s, t)) = iv {
            lo = lo.min(s);
            hi = hi.max(t);
        }
    };
    absorb(ball_interval(a, b, q0, r));
    absorb(ball_interval(a, b, q1, r));
    absorb(cylinder_interval(a, b, q0, q1, r));
    (lo <= hi).then_some((lo, hi))
}

fn cylinder_interval(a: &Point, b: &Point, q0: &Point, q1: &Point, r: f64) -> Option<Interval> {
    let axis = *q1 - *q0;
    let len = axis.norm();
    let u = axis * (1.0 / len);
    let e = *b - *a;
    let f = *a - *q0;
    // axial coordinate s(t) = s0 + s1 t must stay in [0, len]
    let s0 = f.dot(&u);
    let s1 = e.dot(&u);
    let (mut t0, mut t1) = if s1 == 0.0 {
        if s0 < 0.0 || s0 > len {
            return None;
        }
        (0.0, 1.0)
    } else {
        let (x, y) = (-s0 / s1, (len - s0) / s1);
        (x.min(y).max(0.0), x.max(y).min(1.0))
    };
    if t0 > t1 {
        return None;
    }
    // squared radial distance |f + t e|^2 - s(t)^2 <= r^2
    let qa = (e.norm2() - s1 * s1).max(0.0);
    let qb = 2.0 * (f.dot(&e) - s0 * s1);
    let qc = f.norm2() - s0 * s0 - r * r;
    let (ra, rb) = solve_le_zero(qa, qb, qc)?;
    t0 = t0.max(ra);
    t1 = t1.min(rb);
    (t0 <= t1).then_some((t0, t1))
}

/// `{t : qa t² + qb t + qc <= 0}` for `qa >= 0`, as one (possibly unbounded) interval.
fn solve_le_zero(qa: f64, qb: f64, qc: f64) -> Option<Interval> {
    let scale = qa.max(qb.abs()).max(qc.abs());
    if qa <= 1e-14 * scale || qa == 0.0 {
        if qb == 0.0 {
            return (qc <= 0.0).then_some((f64::NEG_INFINITY, f64::INFINITY));
        }
        let root = -qc / qb;
        return Some(if qb > 0.0 { (f64::NEG_INFINITY, root) } else { (root, f64::INFINITY) });
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // numerically stable pair of roots
    let q = -0.5 * (qb + qb.signum() * sq);
    let (x, y) = if q == 0.0 { (0.0, 0.0) } else { (q / qa, qc / q) };
    Some((x.min(y), x.max(y)))
}

fn clamp_unit((t0, t1): Interval) -> Option<Interval> {
    let (t0, t1) = (t0.max(0.0), t1.min(1.0));
    (t0 <= t1).then_some((t0, t1))
}

/// Sorts and merges `out[start..]` in place, dropping empty intervals.
pub(crate) fn normalize_tail(out: &mut Vec<Interval>, start: usize) {
    let tail = &mut out[start..];
    tail.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut w = start;
    for k in start..out.len() {
        let (s, t) = out[k];
        if t <= s {
            continue;
        }
        if w > start && s <= out[w - 1].1 {
            out[w - 1].1 = out[w - 1].1.max(t);
        } else {
            out[w] = (s, t);
            w += 1;
        }
    }
    out.truncate(w);
}

/// Total length of sorted disjoint intervals.
pub(crate) fn intervals_length(ivs: &[Interval]) -> f64 {
    ivs.iter().map(|(s, t)| t - s).sum()
}

fn intersect_sorted(x: &[Interval], y: &[Interval], out: &mut Vec<Interval>) {
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let s = x[i].0.max(y[j].0);
        let t = x[i].1.min(y[j].1);
        if t > s {
            out.push((s, t));
        }
        if x[i].1 < y[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
}
