use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Window};
use crate::point_k::LabeledPointSet;

use super::rng::stream_rng;

/// Point-pattern families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointPattern {
    /// `n` independent uniform points in the window, plus guard points at the same
    /// intensity in the margin.
    Uniform { n: usize },
    /// Uniform mother points in the enlarged window, each with `children` isotropic normal
    /// offsets of standard deviation `sd`. Mothers themselves are not emitted.
    MotherChild { mothers: usize, children: usize, sd: f64 },
    /// `k` lattice points per axis spanning the window (corners included), continued into
    /// the margin at the same spacing.
    Grid { k: usize },
    /// The lattice of `Grid` with isotropic normal jitter of standard deviation `sd`.
    NoisyGrid { k: usize, sd: f64 },
}

const STREAM_UNIFORM: u64 = 1;
const STREAM_GUARD: u64 = 2;
const STREAM_MOTHER: u64 = 3;
const STREAM_CHILD: u64 = 4;
const STREAM_JITTER: u64 = 5;

fn uniform_in<R: Rng>(w: &Window, rng: &mut R) -> Point {
    let c: Vec<f64> = (0..w.dim()).map(|k| rng.random_range(w.lo().coords()[k]..w.hi().coords()[k])).collect();
    Point::new(&c).expect("finite")
}

fn jitter<R: Rng>(p: &Point, normal: &Normal<f64>, rng: &mut R) -> Point {
    let c: Vec<f64> = p.coords().iter().map(|x| x + normal.sample(rng)).collect();
    Point::new(&c).expect("finite")
}

/// Generates `pattern` for `window`; points outside the window (within `margin`) become
/// guard points.
pub fn gen_points(pattern: &PointPattern, window: &Window, margin: f64, seed: u64) -> Result<LabeledPointSet> {
    if !(margin >= 0.0) || !margin.is_finite() {
        return Err(invalid(format!("margin must be finite and non-negative, got {margin}")));
    }
    let outer = window.dilate(margin);
    let points: Vec<Point> =
        match *pattern {
            PointPattern::Uniform { n } => {
                if n == 0 {
                    return Err(invalid("uniform pattern needs n > 0"));
                }
                let mut pts: Vec<Point> =
                    (0..n).map(|k| uniform_in(window, &mut stream_rng(seed, STREAM_UNIFORM, k as u64))).collect();
                let rim = outer.volume() - window.volume();
                let n_guard = (n as f64 * rim / window.volume()).round() as usize;
                for g in 0..n_guard {
                    let mut rng = stream_rng(seed, STREAM_GUARD, g as u64);
                    let p = loop {
                        let p = uniform_in(&outer, &mut rng);
                        if !window.contains(&p) {
                            break p;
                        }
                    };
                    pts.push(p);
                }
                pts
            }
            PointPattern::MotherChild { mothers, children, sd } => {
                if mothers == 0 || children == 0 {
                    return Err(invalid("mother-child pattern needs mothers > 0 and children > 0"));
                }
                let normal = normal(sd)?;
                let mut pts = Vec::with_capacity(mothers * children);
                for m in 0..mothers {
                    let mother = uniform_in(&outer, &mut stream_rng(seed, STREAM_MOTHER, m as u64));
                    for c in 0..children {
                        let idx = (m * children + c) as u64;
                        pts.push(jitter(&mother, &normal, &mut stream_rng(seed, STREAM_CHILD, idx)));
                    }
                }
                // children straying beyond the enlarged window are dropped
                pts.retain(|p| outer.contains(p));
                pts
            }
            PointPattern::Grid { k } => lattice(window, margin, k)?,
            PointPattern::NoisyGrid { k, sd } => {
                let normal = normal(sd)?;
                lattice(window, margin, k)?
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        if sd == 0.0 {
                            *p
                        } else {
                            jitter(p, &normal, &mut stream_rng(seed, STREAM_JITTER, i as u64))
                        }
                    })
                    .collect()
            }
        };
    LabeledPointSet::from_points(points, *window)
}

fn normal(sd: f64) -> Result<Normal<f64>> {
    if !(sd >= 0.0) || !sd.is_finite() {
        return Err(invalid(format!("standard deviation must be finite and non-negative, got {sd}")));
    }
    Normal::new(0.0, sd).map_err(|e| invalid(e.to_string()))
}

fn lattice(window: &Window, margin: f64, k: usize) -> Result<Vec<Point>> {
    if k == 0 {
        return Err(invalid("grid needs k > 0"));
    }
    let dim = window.dim();
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|a| {
            let lo = window.lo().coords()[a];
            let side = window.side(a);
            if k == 1 {
                return vec![lo + 0.5 * side];
            }
            let s = side / (k - 1) as f64;
            let extra = (margin / s + 1e-9).floor() as i64;
            (-extra..(k as i64 + extra)).map(|i| lo + i as f64 * s).collect()
        })
        .collect();
    let mut pts = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let c: Vec<f64> = (0..dim).map(|a| axes[a][idx[a]]).collect();
        pts.push(Point::new(&c)?);
        let mut a = 0;
        loop {
            if a == dim {
                return Ok(pts);
            }
            idx[a] += 1;
            if idx[a] < axes[a].len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}
