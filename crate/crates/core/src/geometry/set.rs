use crate::error::{invalid, Error, Result};

use super::{Polyline, Window};

/// A finite set of curves observed through a window.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSet {
    curves: Vec<Polyline>,
    window: Window,
}

impl CurveSet {
    /// Requires every curve to share the window's dimension. Curves may be empty as a
    /// set, individual estimators state their own minimum counts.
    pub fn new(curves: Vec<Polyline>, window: Window) -> Result<Self> {
        if let Some(c) = curves.iter().find(|c| c.dim() != window.dim()) {
            return Err(Error::DimensionMismatch { expected: window.dim(), found: c.dim() });
        }
        Ok(CurveSet { curves, window })
    }

    pub fn curves(&self) -> &[Polyline] {
        &self.curves
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    /// Length of curve `k` inside the window.
    pub fn clipped_length(&self, k: usize) -> f64 {
        window_length(&self.curves[k], &self.window)
    }

    /// Total curve length inside the window.
    pub fn total_clipped_length(&self) -> f64 {
        (0..self.len()).map(|k| self.clipped_length(k)).sum()
    }

    /// Diameter of the bounding box of the window and all curve vertices.
    pub fn extent_diameter(&self) -> f64 {
        let (mut lo, mut hi) = (*self.window.lo(), *self.window.hi());
        for c in &self.curves {
            let (a, b) = c.bounds();
            lo = super::Point::new(&lo.coords().iter().zip(a.coords()).map(|(x, y)| x.min(*y)).collect::<Vec<_>>())
                .expect("finite");
            hi = super::Point::new(&hi.coords().iter().zip(b.coords()).map(|(x, y)| x.max(*y)).collect::<Vec<_>>())
                .expect("finite");
        }
        lo.dist(&hi)
    }

    pub(crate) fn require_at_least(&self, n: usize, what: &str) -> Result<()> {
        if self.len() < n {
            return Err(invalid(format!("{what} needs at least {n} curves, got {}", self.len())));
        }
        Ok(())
    }
}

/// Length of `c` inside `w`, as a sum of exact per-segment window intervals.
pub(crate) fn window_length(c: &Polyline, w: &Window) -> f64 {
    c.segments()
        .enumerate()
        .map(|(k, (a, b))| match w.segment_interval(a, b) {
            Some((t0, t1)) if t1 > t0 => (t1 - t0) * c.segment_length(k),
            _ => 0.0,
        })
        .sum()
}
