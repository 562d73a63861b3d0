use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::geometry::{Point, Polyline, Window};

use super::rng::stream_rng;

/// `f(x, y) = a0 + a1 x + a2 y + a3 x² + a4 x y + a5 y²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticField {
    a: [f64; 6],
}

const STREAM_FIELD: u64 = 0xF1E1D;

impl QuadraticField {
    pub fn new(a: [f64; 6]) -> Result<Self> {
        if a.iter().any(|c| !c.is_finite()) {
            return Err(invalid("field coefficients must be finite"));
        }
        if a[1..].iter().all(|&c| c == 0.0) {
            return Err(invalid("field is constant"));
        }
        Ok(QuadraticField { a })
    }

    /// Coefficients drawn iid standard normal from `field_seed`.
    pub fn random(field_seed: u64) -> Self {
        let mut rng = stream_rng(field_seed, STREAM_FIELD, 0);
        let a = [(); 6].map(|_| StandardNormal.sample(&mut rng));
        QuadraticField::new(a).expect("normal draws are not all zero")
    }

    pub fn coefficients(&self) -> &[f64; 6] {
        &self.a
    }

    pub fn value(&self, p: &Point) -> f64 {
        let (x, y) = (p.x(), p.y());
        let a = &self.a;
        a[0] + a[1] * x + a[2] * y + a[3] * x * x + a[4] * x * y + a[5] * y * y
    }

    pub fn gradient(&self, p: &Point) -> Point {
        let (x, y) = (p.x(), p.y());
        let a = &self.a;
        Point::xy(a[1] + 2.0 * a[3] * x + a[4] * y, a[2] + a[4] * x + 2.0 * a[5] * y)
    }
}

/// Integration settings for [`gradient_flow_curve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowParams {
    /// RK4 step in arc length.
    pub step: f64,
    /// Maximum total curve length (split evenly between the two directions).
    pub max_len: f64,
    /// Keep every `emit_every`-th integration point as a vertex (ends are always kept).
    pub emit_every: usize,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams { step: 1e-3, max_len: 4.0, emit_every: 1 }
    }
}

const CRITICAL: f64 = 1e-8;

fn unit_gradient(field: &QuadraticField, p: &Point, sign: f64) -> Option<Point> {
    let g = field.gradient(p);
    let n = g.norm();
    (n >= CRITICAL).then(|| g * (sign / n))
}

/// One direction of the flow from `start`; excludes `start` itself.
fn trace(field: &QuadraticField, start: Point, sign: f64, p: &FlowParams, bounds: &Window) -> Vec<Point> {
    let h = p.step;
    let steps = ((0.5 * p.max_len / h).round() as usize).max(1);
    let mut out = Vec::new();
    let mut x = start;
    let mut fx = field.value(&x);
    let mut last_emitted = true;
    for k in 1..=steps {
        let Some(k1) = unit_gradient(field, &x, sign) else { break };
        let Some(k2) = unit_gradient(field, &(x + k1 * (0.5 * h)), sign) else { break };
        let Some(k3) = unit_gradient(field, &(x + k2 * (0.5 * h)), sign) else { break };
        let Some(k4) = unit_gradient(field, &(x + k3 * h), sign) else { break };
        let next = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let fn_ = field.value(&next);
        // f must keep moving in the flow direction; otherwise a critical point was crossed
        if !bounds.contains(&next) || (fn_ - fx) * sign <= 0.0 {
            break;
        }
        x = next;
        fx = fn_;
        last_emitted = k % p.emit_every == 0;
        if last_emitted {
            out.push(x);
        }
    }
    if !last_emitted {
        out.push(x);
    }
    out
}

/// The gradient-flow line of `field` through `start`, traced in both directions at unit
/// speed with fixed-step RK4 and ordered so that `f` increases along the curve.
///
/// Each direction stops after `max_len / 2` of arc length, before leaving `bounds`, or at a
/// critical point of `f`.
pub fn gradient_flow_curve(
    field: &QuadraticField,
    start: Point,
    params: &FlowParams,
    bounds: &Window,
) -> Result<Polyline> {
    if !(params.step > 0.0) || !(params.max_len > 0.0) || params.emit_every == 0 {
        return Err(invalid(format!("invalid flow parameters {params:?}")));
    }
    if start.dim() != 2 || bounds.dim() != 2 {
        return Err(invalid("gradient flow curves are planar"));
    }
    if field.gradient(&start).norm() < CRITICAL {
        return Err(Error::Generation(format!("start {start:?} is a critical point")));
    }
    let mut vertices = trace(field, start, -1.0, params, bounds);
    vertices.reverse();
    vertices.push(start);
    vertices.extend(trace(field, start, 1.0, params, bounds));
    if vertices.len() < 2 {
        return Err(Error::Generation(format!("flow from {start:?} produced a single point")));
    }
    Polyline::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big() -> Window {
        Window::cube(2, -5.0, 5.0).unwrap()
    }

    #[test]
    fn radial_field_gives_axis_line() {
        let f = QuadraticField::new([0.0, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        let c = gradient_flow_curve(&f, Point::xy(1.0, 0.0), &FlowParams::default(), &big()).unwrap();
        assert!(c.vertices().iter().all(|v| v.y().abs() < 1e-9));
        assert!(c.vertices().iter().all(|v| v.x() > 0.0));
        // forward half reaches x = 1 + max_len / 2
        assert!((c.vertices().last().unwrap().x() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn linear_field_gives_horizontal_lines() {
        let f = QuadraticField::new([0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for y in [-0.3, 0.0, 0.8] {
            let c = gradient_flow_curve(&f, Point::xy(0.2, y), &FlowParams::default(), &big()).unwrap();
            assert!(c.vertices().iter().all(|v| (v.y() - y).abs() < 1e-12));
            assert!((c.length() - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn chords_follow_gradient() {
        let f = QuadraticField::new([0.3, 0.5, -0.2, 0.7, -0.4, 0.2]).unwrap();
        let c = gradient_flow_curve(&f, Point::xy(0.1, 0.4), &FlowParams::default(), &big()).unwrap();
        let mut worst: f64 = 0.0;
        for (a, b) in c.segments() {
            let chord = (*b - *a).normalized().unwrap();
            let g = f.gradient(&a.lerp(b, 0.5)).normalized().unwrap();
            worst = worst.max(chord.dot(&g).clamp(-1.0, 1.0).acos());
        }
        assert!(worst < 1e-3, "max angle {worst}");
    }

    #[test]
    fn field_increases_along_curve() {
        for seed in 0..10 {
            let f = QuadraticField::random(seed);
            let Ok(c) = gradient_flow_curve(
                &f,
                Point::xy(0.1, -0.2),
                &FlowParams { emit_every: 7, ..Default::default() },
                &Window::cube(2, -1.5, 1.5).unwrap(),
            ) else {
                continue;
            };
            let vals: Vec<f64> = c.vertices().iter().map(|v| f.value(v)).collect();
            assert!(vals.windows(2).all(|w| w[0] < w[1]), "seed {seed}");
        }
    }

    #[test]
    fn critical_start_errors() {
        let f = QuadraticField::new([0.0, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            gradient_flow_curve(&f, Point::xy(0.0, 0.0), &FlowParams::default(), &big()),
            Err(Error::Generation(_))
        ));
        assert!(QuadraticField::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn emission_keeps_endpoints() {
        let f = QuadraticField::new([0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let p = FlowParams { step: 1e-3, max_len: 1.0, emit_every: 30 };
        let c = gradient_flow_curve(&f, Point::xy(0.0, 0.0), &p, &big()).unwrap();
        assert!((c.vertices()[0].x() + 0.5).abs() < 1e-9);
        assert!((c.vertices().last().unwrap().x() - 0.5).abs() < 1e-9);
    }
}
