//! Currents distance between oriented curves and the K-function `K_c` built on it.
//!
//! A curve is discretized into Dirac currents `δ_p^α`: one per equal-arc-length piece, with
//! `p` the piece's arc midpoint and `α` the integral of the unit tangent over the piece (its
//! chord vector). Under the Gaussian kernel `G(x, y) = a exp(-|x - y|² / 2σ²) Id`,
//!
//! ```text
//! ⟨δ_p^α, δ_q^β⟩ = a exp(-|p - q|² / 2σ²) α·β
//! d_c(c1, c2)   = sqrt(⟨c1, c1⟩ + ⟨c2, c2⟩ - 2 ⟨c1, c2⟩)
//! ```
//!
//! The orientation-free distance takes the smaller of `d_c(c1, c2)` and `d_c(c1, -c2)`.

use std::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::estimate::EstimateCurve;
use crate::exec::{self, Execution};
use crate::geometry::{resample_by_arclength, CurveSet, Point, Polyline};
use crate::point_k::{ripley_k_generic, Pairing};

/// Default number of Dirac currents per curve.
pub const DEFAULT_SAMPLES: usize = 50;

/// Gaussian reproducing kernel `a exp(-|x - y|² / 2σ²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    amplitude: f64,
    sigma: f64,
}

impl KernelSpec {
    pub fn new(amplitude: f64, sigma: f64) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(invalid(format!("kernel amplitude must be positive, got {amplitude}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid(format!("kernel bandwidth must be positive, got {sigma}")));
        }
        Ok(KernelSpec { amplitude, sigma })
    }

    /// Unit amplitude.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        KernelSpec::new(1.0, sigma)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn eval(&self, p: &Point, q: &Point) -> f64 {
        self.amplitude * (-p.dist2(q) / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// A Dirac current `δ_point^alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dirac {
    pub point: Point,
    pub alpha: Point,
}

/// A finite sum of Dirac currents.
///
/// Samples are kept sorted by position, so two representations of the same set of Diracs
/// produce bit-identical Gram sums.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentRepr {
    samples: Vec<Dirac>,
}

impl CurrentRepr {
    pub fn new(samples: Vec<Dirac>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(invalid("a current needs at least one Dirac sample"));
        };
        let dim = first.point.dim();
        if let Some(s) = samples.iter().find(|s| s.point.dim() != dim || s.alpha.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: s.point.dim() });
        }
        let mut samples = samples;
        samples.sort_by(dirac_cmp);
        Ok(CurrentRepr { samples })
    }

    pub fn samples(&self) -> &[Dirac] {
        &self.samples
    }

    pub fn dim(&self) -> usize {
        self.samples[0].point.dim()
    }

    /// The current of the reversed curve: same points, negated directions.
    pub fn reversed(&self) -> CurrentRepr {
        CurrentRepr::new(self.samples.iter().map(|s| Dirac { point: s.point, alpha: -s.alpha }).collect())
            .expect("same samples")
    }

    /// `Σ |α|`: the discretized curve mass.
    pub fn mass(&self) -> f64 {
        self.samples.iter().map(|s| s.alpha.norm()).sum()
    }
}

/// Discretizes `c` into `m` Dirac currents, preserving orientation.
///
/// The curve is always resampled in one canonical direction, so `to_current(&c.reversed(), m)`
/// is exactly `to_current(&c, m).reversed()`.
pub fn to_current(c: &Polyline, m: usize) -> Result<CurrentRepr> {
    let v = c.vertices();
    let forward = v
        .iter()
        .zip(v.iter().rev())
        .flat_map(|(p, q)| p.coords().iter().zip(q.coords()).map(|(x, y)| x.total_cmp(y)))
        .find(|o| o.is_ne())
        .is_none_or(|o| o.is_lt());
    let (src, sign) = if forward { (c.clone(), 1.0) } else { (c.reversed(), -1.0) };
    let samples =
        resample_by_arclength(&src, m)?.into_iter().map(|s| Dirac { point: s.point, alpha: s.chord * sign }).collect();
    CurrentRepr::new(samples)
}

/// RKHS inner product `Σ_i Σ_j α_iᵀ G(p_i, q_j) β_j`.
pub fn gram_inner(a: &CurrentRepr, b: &CurrentRepr, k: &KernelSpec) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(gram(a, b, k))
}

/// Sums in an argument-independent order, so `gram(a, b)` and `gram(b, a)` agree bit for bit.
fn gram(a: &CurrentRepr, b: &CurrentRepr, k: &KernelSpec) -> f64 {
    let (a, b) = if sample_order(a, b).is_gt() { (b, a) } else { (a, b) };
    let inv = -1.0 / (2.0 * k.sigma * k.sigma);
    let mut acc = 0.0;
    for s in &a.samples {
        let mut row = 0.0;
        for t in &b.samples {
            row += (s.point.dist2(&t.point) * inv).exp() * s.alpha.dot(&t.alpha);
        }
        acc += row;
    }
    k.amplitude * acc
}

fn dirac_cmp(x: &Dirac, y: &Dirac) -> Ordering {
    let key = |d: &Dirac| -> [f64; 6] {
        let (p, a) = (d.point.raw(), d.alpha.raw());
        [p[0], p[1], p[2], a[0], a[1], a[2]]
    };
    lex_cmp(key(x).into_iter(), key(y).into_iter())
}

fn lex_cmp(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> Ordering {
    a.zip(b).map(|(x, y)| x.total_cmp(&y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

fn flat_samples(c: &CurrentRepr) -> impl Iterator<Item = f64> + '_ {
    c.samples.iter().flat_map(|d| d.point.raw().iter().chain(d.alpha.raw()).copied())
}

fn sample_order(a: &CurrentRepr, b: &CurrentRepr) -> Ordering {
    lex_cmp(flat_samples(a), flat_samples(b)).then(a.samples.len().cmp(&b.samples.len()))
}

fn distance_from_grams(aa: f64, bb: f64, ab: f64) -> f64 {
    (aa + bb - 2.0 * ab).max(0.0).sqrt()
}

/// Currents norm distance `d_c(a, b)`, orientation-sensitive.
pub fn current_norm_distance(a: &CurrentRepr, b: &CurrentRepr, k: &KernelSpec) -> Result<f64> {
    Ok(distance_from_grams(gram_inner(a, a, k)?, gram_inner(b, b, k)?, gram_inner(a, b, k)?))
}

/// `min(d_c(c1, c2), d_c(c1, -c2))` with `m` Dirac currents per curve.
pub fn current_distance(c1: &Polyline, c2: &Polyline, k: &KernelSpec, m: usize) -> Result<f64> {
    let a = to_current(c1, m)?;
    let b = to_current(c2, m)?;
    let (aa, bb, ab) = (gram_inner(&a, &a, k)?, gram_inner(&b, &b, k)?, gram_inner(&a, &b, k)?);
    Ok(distance_from_grams(aa, bb, ab).min(distance_from_grams(aa, bb, -ab)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KcConfig {
    pub kernel: KernelSpec,
    /// Dirac currents per curve.
    pub samples: usize,
    pub execution: Execution,
}

impl KcConfig {
    pub fn new(kernel: KernelSpec) -> Self {
        KcConfig { kernel, samples: DEFAULT_SAMPLES, execution: Execution::default() }
    }
}

/// `K_c`: the sorting estimator over curves with the orientation-free currents distance,
/// normalized to the empirical distribution of ordered-pair distances (`1 / (n (n - 1))`).
///
/// The abscissa is a currents distance, not a spatial radius.
pub fn kc(cs: &CurveSet, cfg: &KcConfig) -> Result<EstimateCurve> {
    cs.require_at_least(2, "K_c")?;
    let n = cs.len();
    let reprs = exec::map_range(cfg.execution, n, |i| to_current(&cs.curves()[i], cfg.samples))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let selfs = exec::map_range(cfg.execution, n, |i| gram(&reprs[i], &reprs[i], &cfg.kernel));
    let items: Vec<(usize, &CurrentRepr)> = reprs.iter().enumerate().collect();
    let k = cfg.kernel;
    // <a, -b> = -<a, b>, so both orientations come from one cross Gram
    ripley_k_generic(&items, Pairing::Symmetric, 1.0 / (n * (n - 1)) as f64, cfg.execution, |x, y| {
        let ab = gram(x.1, y.1, &k);
        distance_from_grams(selfs[x.0], selfs[y.0], ab).min(distance_from_grams(selfs[x.0], selfs[y.0], -ab))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;
    use approx::assert_relative_eq;

    fn delta(x: f64, y: f64, ax: f64, ay: f64) -> CurrentRepr {
        CurrentRepr::new(vec![Dirac { point: Point::xy(x, y), alpha: Point::xy(ax, ay) }]).unwrap()
    }

    fn unit_kernel() -> KernelSpec {
        KernelSpec::new(1.0, 0.5).unwrap()
    }

    #[test]
    fn kernel_validation() {
        assert!(KernelSpec::new(0.0, 1.0).is_err());
        assert!(KernelSpec::new(1.0, -1.0).is_err());
        assert!(KernelSpec::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn to_current_unit_segment() {
        let c = Polyline::new(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)]).unwrap();
        let cur = to_current(&c, 1).unwrap();
        assert_eq!(cur.samples(), &[Dirac { point: Point::xy(0.5, 0.0), alpha: Point::xy(1.0, 0.0) }]);
        assert!(to_current(&c, 0).is_err());
    }

    #[test]
    fn reversal_negates_alphas() {
        let c = Polyline::new(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.3), Point::xy(1.5, 1.0)]).unwrap();
        let fwd = to_current(&c, 7).unwrap();
        let back = to_current(&c.reversed(), 7).unwrap();
        for (f, b) in fwd.samples().iter().zip(back.samples()) {
            assert_eq!(f.alpha, -b.alpha);
            assert_eq!(f.point, b.point);
        }
        assert_eq!(back, fwd.reversed());
    }

    #[test]
    fn alpha_sum_telescopes() {
        let c = Polyline::new(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.3), Point::xy(1.5, 1.0), Point::xy(0.2, 1.4)])
            .unwrap();
        for m in [1, 3, 7, 50] {
            let cur = to_current(&c, m).unwrap();
            let sum = cur.samples().iter().fold(Point::xy(0.0, 0.0), |acc, s| acc + s.alpha);
            let chord = *c.vertices().last().unwrap() - c.vertices()[0];
            assert!((sum - chord).norm() < 1e-9, "m = {m}");
            assert!(cur.mass() <= c.length() + 1e-12);
        }
    }

    #[test]
    fn gram_examples() {
        let k = KernelSpec::new(1.0, 0.7).unwrap();
        assert_eq!(gram_inner(&delta(0.0, 0.0, 1.0, 0.0), &delta(0.0, 0.0, 0.0, 1.0), &k).unwrap(), 0.0);
        assert_eq!(gram_inner(&delta(0.0, 0.0, 1.0, 0.0), &delta(0.0, 0.0, 1.0, 0.0), &k).unwrap(), 1.0);
        let s = 0.7 * 2f64.sqrt();
        assert_relative_eq!(
            gram_inner(&delta(0.0, 0.0, 1.0, 0.0), &delta(s, 0.0, 1.0, 0.0), &k).unwrap(),
            (-1f64).exp(),
            max_relative = 1e-14
        );
        let k2 = KernelSpec::new(2.5, 0.7).unwrap();
        assert_eq!(gram_inner(&delta(0.0, 0.0, 1.0, 0.0), &delta(0.0, 0.0, 1.0, 0.0), &k2).unwrap(), 2.5);
    }

    #[test]
    fn distance_examples() {
        let k = unit_kernel();
        let c = Polyline::new(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.2), Point::xy(1.3, 0.9)]).unwrap();
        assert!(current_distance(&c, &c, &k, 50).unwrap() < 1e-9);
        assert!(current_distance(&c, &c.reversed(), &k, 50).unwrap() < 1e-9);
        // orthogonal unit deltas at one point: sqrt(1 + 1 - 0) either way
        let a = delta(0.0, 0.0, 1.0, 0.0);
        let b = delta(0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(current_norm_distance(&a, &b, &k).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(current_norm_distance(&a, &b.reversed(), &k).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn kc_identical_and_distinct() {
        let w = Window::cube(2, -1.0, 1.0).unwrap();
        let c = Polyline::new(vec![Point::xy(-0.5, 0.0), Point::xy(0.5, 0.1)]).unwrap();
        let same = CurveSet::new(vec![c.clone(), c.clone(), c.clone(), c.clone()], w).unwrap();
        let k = kc(&same, &KcConfig::new(unit_kernel())).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k.samples()[0].r, 0.0);
        assert_relative_eq!(k.samples()[0].value, 1.0, max_relative = 1e-15);

        let three = CurveSet::new(
            vec![
                c.clone(),
                Polyline::new(vec![Point::xy(-0.5, 0.3), Point::xy(0.5, 0.3)]).unwrap(),
                Polyline::new(vec![Point::xy(0.0, -0.9), Point::xy(0.1, 0.4)]).unwrap(),
            ],
            w,
        )
        .unwrap();
        let k = kc(&three, &KcConfig::new(unit_kernel())).unwrap();
        // three distinct unordered distances, each an ordered pair twice
        assert_eq!(k.len(), 3);
        let v: Vec<f64> = k.values().collect();
        assert_relative_eq!(v[0], 2.0 / 6.0);
        assert_relative_eq!(v[2], 1.0);
        assert!(kc(&CurveSet::new(vec![c], w).unwrap(), &KcConfig::new(unit_kernel())).is_err());
    }
}
