use crate::error::{invalid, Error, Result};

use super::Point;

/// An oriented curve given by an ordered vertex list.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
    /// Arc length at each vertex; `cum[0] = 0`.
    cum: Vec<f64>,
}

impl Polyline {
    /// Validates and builds a polyline: at least two finite vertices of one dimension, no
    /// repeated consecutive vertices.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(invalid(format!("a polyline needs at least 2 vertices, got {}", vertices.len())));
        }
        let dim = vertices[0].dim();
        let mut cum = Vec::with_capacity(vertices.len());
        cum.push(0.0);
        for (k, w) in vertices.windows(2).enumerate() {
            if w[1].dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: w[1].dim() });
            }
            if !w[0].is_finite() || !w[1].is_finite() {
                return Err(invalid("polyline vertices must be finite"));
            }
            let len = w[0].dist(&w[1]);
            if len == 0.0 {
                return Err(invalid(format!("vertices {k} and {} coincide", k + 1)));
            }
            cum.push(cum[k] + len);
        }
        Ok(Polyline { vertices, cum })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn num_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segments(&self) -> impl ExactSizeIterator<Item = (&Point, &Point)> + '_ {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn segment_length(&self, k: usize) -> f64 {
        self.cum[k + 1] - self.cum[k]
    }

    /// Sum of segment lengths.
    pub fn length(&self) -> f64 {
        *self.cum.last().expect("non-empty")
    }

    /// Same curve with opposite orientation.
    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline::new(v).expect("reversal of a valid polyline is valid")
    }

    /// Applies `f` to every vertex.
    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Result<Polyline> {
        Polyline::new(self.vertices.iter().map(f).collect())
    }

    /// Index of the segment containing arc position `s` (clamped to the curve).
    fn segment_at(&self, s: f64) -> usize {
        let k = self.cum.partition_point(|&c| c <= s);
        k.clamp(1, self.vertices.len() - 1) - 1
    }

    /// Point at arc length `s` from the first vertex, clamped to `[0, length]`.
    pub fn point_at_arc(&self, s: f64) -> Point {
        let s = s.clamp(0.0, self.length());
        let k = self.segment_at(s);
        let t = ((s - self.cum[k]) / self.segment_length(k)).clamp(0.0, 1.0);
        self.vertices[k].lerp(&self.vertices[k + 1], t)
    }

    /// Unit direction of the segment containing arc position `s`.
    pub fn tangent_at_arc(&self, s: f64) -> Point {
        let k = self.segment_at(s.clamp(0.0, self.length()));
        (self.vertices[k + 1] - self.vertices[k]) * (1.0 / self.segment_length(k))
    }

    /// Lower/upper corners of the vertex bounding box.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo = Point::xyz(lo.x().min(v.x()), lo.y().min(v.y()), lo.z().min(v.z()));
            hi = Point::xyz(hi.x().max(v.x()), hi.y().max(v.y()), hi.z().max(v.z()));
        }
        // keep the dimension tag of the curve
        let d = self.dim();
        (Point::new(&lo.raw()[..d]).expect("finite"), Point::new(&hi.raw()[..d]).expect("finite"))
    }
}

/// One node of a midpoint-rule discretization of a curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcSample {
    /// Curve point at the arc-length midpoint of the piece.
    pub point: Point,
    /// Unit direction of the piece chord.
    pub tangent: Point,
    /// Arc-length measure of the piece.
    pub weight: f64,
    /// Chord vector of the piece, i.e. the integral of the unit tangent over it.
    pub chord: Point,
}

/// Splits `c` into `m` pieces of equal arc length and samples each at its arc midpoint.
pub fn resample_by_arclength(c: &Polyline, m: usize) -> Result<Vec<ArcSample>> {
    if m == 0 {
        return Err(invalid("resampling needs at least one sample"));
    }
    let len = c.length();
    let w = len / m as f64;
    let mut out = Vec::with_capacity(m);
    let mut start = c.point_at_arc(0.0);
    for k in 0..m {
        let s0 = k as f64 * w;
        let s1 = if k + 1 == m { len } else { (k + 1) as f64 * w };
        let end = c.point_at_arc(s1);
        let mid = 0.5 * (s0 + s1);
        let chord = end - start;
        let tangent = chord.normalized().unwrap_or_else(|| c.tangent_at_arc(mid));
        out.push(ArcSample { point: c.point_at_arc(mid), tangent, weight: w, chord });
        start = end;
    }
    Ok(out)
}

/// Midpoint-rule samples with spacing at most `h`.
pub(crate) fn resample_by_spacing(c: &Polyline, h: f64) -> Vec<ArcSample> {
    let m = ((c.length() / h).ceil() as usize).max(1);
    resample_by_arclength(c, m).expect("m >= 1")
}
