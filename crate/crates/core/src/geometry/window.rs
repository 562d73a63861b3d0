use crate::error::{invalid, Error, Result};

use super::{Point, Polyline};

/// Axis-aligned observation box `[lo, hi]` (closed).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    lo: Point,
    hi: Point,
}

impl Window {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch { expected: lo.dim(), found: hi.dim() });
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(invalid("window corners must be finite"));
        }
        if lo.coords().iter().zip(hi.coords()).any(|(l, h)| l >= h) {
            return Err(invalid(format!("window needs lo < hi on every axis: {lo:?} {hi:?}")));
        }
        Ok(Window { lo, hi })
    }

    /// The square (cube) `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        let l = vec![lo; dim];
        let h = vec![hi; dim];
        Window::new(Point::new(&l)?, Point::new(&h)?)
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.hi.raw()[axis] - self.lo.raw()[axis]
    }

    pub fn min_side(&self) -> f64 {
        (0..self.dim()).map(|k| self.side(k)).fold(f64::INFINITY, f64::min)
    }

    /// Lebesgue measure `|W|`.
    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|k| self.side(k)).product()
    }

    pub fn diameter(&self) -> f64 {
        self.lo.dist(&self.hi)
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|k| p.raw()[k] >= self.lo.raw()[k] && p.raw()[k] <= self.hi.raw()[k])
    }

    /// The box grown by `margin` on every side.
    pub fn dilate(&self, margin: f64) -> Window {
        let m = Point::new(&vec![margin; self.dim()]).expect("finite margin");
        Window { lo: self.lo - m, hi: self.hi + m }
    }

    /// The erosion `W ⊖ r = [lo + r, hi - r]`.
    pub fn erode(&self, r: f64) -> Result<Window> {
        if !(r >= 0.0) {
            return Err(invalid(format!("erosion radius must be non-negative, got {r}")));
        }
        if r == 0.0 {
            return Ok(*self);
        }
        if 2.0 * r >= self.min_side() {
            return Err(Error::EmptyErosion { r });
        }
        let m = Point::new(&vec![r; self.dim()])?;
        Ok(Window { lo: self.lo + m, hi: self.hi - m })
    }

    /// Parameter interval `[t0, t1] ⊂ [0, 1]` of the segment `a + t (b - a)` inside the box
    /// (Liang–Barsky).
    pub fn segment_interval(&self, a: &Point, b: &Point) -> Option<(f64, f64)> {
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for k in 0..self.dim() {
            let p = a.raw()[k];
            let d = b.raw()[k] - p;
            let (lo, hi) = (self.lo.raw()[k], self.hi.raw()[k]);
            if d == 0.0 {
                if p < lo || p > hi {
                    return None;
                }
                continue;
            }
            let (mut ta, mut tb) = ((lo - p) / d, (hi - p) / d);
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }
}

/// Erodes `w` by `r`; errors when the result is empty.
pub fn erode_window(w: &Window, r: f64) -> Result<Window> {
    w.erode(r)
}

/// Maximal sub-polylines of `c` inside `w`, in curve order and orientation.
///
/// Segments crossing the boundary are cut at the exact box intersection points. Pieces of
/// zero length (grazing contacts) are dropped.
pub fn clip_to_window(c: &Polyline, w: &Window) -> Vec<Polyline> {
    let mut pieces = Vec::new();
    let mut current: Vec<Point> = Vec::new();
    let mut flush = |current: &mut Vec<Point>| {
        if current.len() >= 2 {
            if let Ok(p) = Polyline::new(std::mem::take(current)) {
                pieces.push(p);
            }
        }
        current.clear();
    };
    for (a, b) in c.segments() {
        match w.segment_interval(a, b) {
            Some((t0, t1)) if t1 > t0 => {
                let start = a.lerp(b, t0);
                let end = a.lerp(b, t1);
                if t0 > 0.0 || current.is_empty() {
                    flush(&mut current);
                    current.push(start);
                }
                if current.last() != Some(&end) {
                    current.push(end);
                }
                if t1 < 1.0 {
                    flush(&mut current);
                }
            }
            _ => flush(&mut current),
        }
    }
    flush(&mut current);
    pieces
}
