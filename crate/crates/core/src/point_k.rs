//! Ripley's K-function for point patterns by sorting pair distances.
//!
//! Pairs are ordered: `i` runs over the interior ("red") points and `j` over interior and
//! guard ("blue") points, `j != i`. With `n` interior points in window `W` the estimate is
//!
//! ```text
//! K(r) = |W| / n² · #{(i, j) : d(p_i, p_j) <= r}
//! ```
//!
//! which saturates at `|W| (n - 1) / n` without guard points.

use crate::error::{invalid, Error, Result};
use crate::estimate::{EstimateCurve, StepCounts};
use crate::exec::{self, Execution};
use crate::geometry::{Point, Window};
use crate::spatial::Grid;

/// Volume of the `dim`-ball of radius `r`: the K-function of a homogeneous Poisson process.
pub fn csr_reference(r: f64, dim: usize) -> f64 {
    use std::f64::consts::PI;
    match dim {
        2 => PI * r * r,
        3 => 4.0 / 3.0 * PI * r * r * r,
        1 => 2.0 * r,
        d => {
            // general d-ball: pi^{d/2} / Gamma(d/2 + 1) r^d, via the two-step recurrence
            let (mut v, mut k) = if d % 2 == 0 { (1.0, 0) } else { (2.0, 1) };
            while k < d {
                k += 2;
                v *= 2.0 * PI / k as f64;
            }
            v * r.powi(d as i32)
        }
    }
}

/// Interior ("red") points inside the window plus guard ("blue") points that only act as
/// neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPointSet {
    interior: Vec<Point>,
    guard: Vec<Point>,
    window: Window,
}

impl LabeledPointSet {
    pub fn new(interior: Vec<Point>, guard: Vec<Point>, window: Window) -> Result<Self> {
        let dim = window.dim();
        if let Some(p) = interior.iter().chain(&guard).find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        if let Some(p) = interior.iter().find(|p| !window.contains(p)) {
            return Err(invalid(format!("interior point {p:?} lies outside the window")));
        }
        Ok(LabeledPointSet { interior, guard, window })
    }

    /// Splits `points` into interior and guard by window membership.
    pub fn from_points(points: impl IntoIterator<Item = Point>, window: Window) -> Result<Self> {
        let (interior, guard) = points.into_iter().partition(|p| window.contains(p));
        LabeledPointSet::new(interior, guard, window)
    }

    pub fn interior(&self) -> &[Point] {
        &self.interior
    }

    pub fn guard(&self) -> &[Point] {
        &self.guard
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.interior.len() + self.guard.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|W| / n_int²`.
    pub fn normalization(&self) -> f64 {
        let n = self.interior.len() as f64;
        self.window.volume() / (n * n)
    }

    fn check_estimable(&self) -> Result<()> {
        let n = self.interior.len();
        if n == 0 {
            return Err(invalid("point set has no interior points"));
        }
        if n == 1 && self.guard.is_empty() {
            return Err(invalid("a single interior point without guard points has no pairs"));
        }
        Ok(())
    }
}

/// All ordered pair distances, ascending.
fn sorted_pair_distances(ps: &LabeledPointSet, exec: Execution) -> Vec<f64> {
    let int = &ps.interior;
    let rows = exec::map_range(exec, int.len(), |i| {
        let p = &int[i];
        let mut row = Vec::with_capacity(int.len() - 1 + ps.guard.len());
        row.extend(int.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| p.dist(q)));
        row.extend(ps.guard.iter().map(|q| p.dist(q)));
        row
    });
    let mut d: Vec<f64> = rows.concat();
    exec::sort_f64(exec, &mut d);
    d
}

/// Raw cumulative pair counts of the sorting estimator.
pub fn ripley_k_counts(ps: &LabeledPointSet, exec: Execution) -> Result<StepCounts> {
    ps.check_estimable()?;
    Ok(StepCounts::from_sorted(&sorted_pair_distances(ps, exec)))
}

/// The sorting estimator: one sample per distinct pair distance.
pub fn ripley_k_points(ps: &LabeledPointSet) -> Result<EstimateCurve> {
    ripley_k_points_with(ps, Execution::default())
}

pub fn ripley_k_points_with(ps: &LabeledPointSet, exec: Execution) -> Result<EstimateCurve> {
    Ok(ripley_k_counts(ps, exec)?.scaled(ps.normalization()))
}

/// The sorting estimator's step function evaluated at the given radii, by grid range
/// counting instead of a full sort. Equal to `ripley_k_points(ps).value_at(r)` for every `r`.
pub fn ripley_k_points_at(ps: &LabeledPointSet, radii: &[f64], exec: Execution) -> Result<EstimateCurve> {
    ps.check_estimable()?;
    check_radii(radii)?;
    let Some(&r_max) = radii.last() else {
        return EstimateCurve::new(vec![]);
    };
    let all: Vec<Point> = ps.interior.iter().chain(&ps.guard).copied().collect();
    // cells of r_max / 4 cut candidate checks to about 1.6x the disk area
    let grid = Grid::build(&all, (r_max / 4.0).max(1e-12));
    // coordinates in slot order so that every cell row is a contiguous scan
    let slots: Vec<[f64; 3]> = grid.order().iter().map(|&k| *all[k as usize].raw()).collect();
    let thresholds: Vec<f64> = radii.iter().map(|&r| squared_threshold(r)).collect();
    let t_max = *thresholds.last().expect("non-empty");
    let rows = exec::map_range(exec, ps.interior.len(), |i| {
        let p = all[i].raw();
        let mut hist = vec![0u64; radii.len()];
        grid.for_each_slot_range(&all[i], r_max, |range| {
            for q in &slots[range] {
                let (dx, dy, dz) = (p[0] - q[0], p[1] - q[1], p[2] - q[2]);
                let d2 = dx * dx + dy * dy + dz * dz;
                if d2 <= t_max {
                    hist[thresholds.partition_point(|&t| t < d2)] += 1;
                }
            }
        });
        // the point itself sits at distance zero
        hist[0] -= 1;
        hist
    });
    let mut cum = vec![0u64; radii.len()];
    for row in rows {
        for (c, h) in cum.iter_mut().zip(row) {
            *c += h;
        }
    }
    let mut acc = 0u64;
    let norm = ps.normalization();
    EstimateCurve::from_parts(
        radii,
        cum.into_iter().map(|c| {
            acc += c;
            acc as f64 * norm
        }),
    )
}

/// Largest `t` with `sqrt(t) <= r`, so that `d2 <= t` agrees exactly with `sqrt(d2) <= r`.
fn squared_threshold(r: f64) -> f64 {
    let mut t = r * r;
    while t.sqrt() > r {
        t = t.next_down();
    }
    while t.next_up().sqrt() <= r {
        t = t.next_up();
    }
    t
}

/// How a generic distance is evaluated over item pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Pairing {
    /// `dist(a, b) == dist(b, a)`: evaluate once per unordered pair, count it twice.
    #[default]
    Symmetric,
    /// Evaluate every ordered pair separately.
    Ordered,
}

/// The sorting estimator over arbitrary items and an arbitrary (pseudo-)distance.
///
/// Value at each step is the cumulative ordered-pair count times `norm`.
pub fn ripley_k_generic<T, F>(
    items: &[T],
    pairing: Pairing,
    norm: f64,
    exec: Execution,
    dist: F,
) -> Result<EstimateCurve>
where
    T: Sync,
    F: Fn(&T, &T) -> f64 + Sync + Send,
{
    Ok(ripley_k_generic_counts(items, pairing, exec, dist)?.scaled(norm))
}

/// Raw cumulative ordered-pair counts behind [`ripley_k_generic`].
pub fn ripley_k_generic_counts<T, F>(items: &[T], pairing: Pairing, exec: Execution, dist: F) -> Result<StepCounts>
where
    T: Sync,
    F: Fn(&T, &T) -> f64 + Sync + Send,
{
    let n = items.len();
    if n < 2 {
        return Err(invalid(format!("the sorting estimator needs at least 2 items, got {n}")));
    }
    let rows = exec::map_range(exec, n, |i| match pairing {
        Pairing::Symmetric => ((i + 1)..n)
            .flat_map(|j| {
                let d = dist(&items[i], &items[j]);
                [d, d]
            })
            .collect::<Vec<_>>(),
        Pairing::Ordered => (0..n).filter(|&j| j != i).map(|j| dist(&items[i], &items[j])).collect(),
    });
    let mut d = rows.concat();
    if let Some(bad) = d.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(invalid(format!("distance must be finite and non-negative, got {bad}")));
    }
    exec::sort_f64(exec, &mut d);
    Ok(StepCounts::from_sorted(&d))
}

pub(crate) fn check_radii(radii: &[f64]) -> Result<()> {
    for (k, &r) in radii.iter().enumerate() {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(invalid(format!("radius {k} must be finite and non-negative, got {r}")));
        }
        if k > 0 && radii[k - 1] >= r {
            return Err(invalid(format!("radii must be strictly increasing at index {k}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit() -> Window {
        Window::cube(2, 0.0, 1.0).unwrap()
    }

    #[test]
    fn csr_reference_examples() {
        assert_eq!(csr_reference(1.0, 2), PI);
        assert_eq!(csr_reference(0.0, 2), 0.0);
        assert_relative_eq!(csr_reference(0.5, 3), PI / 6.0, max_relative = 1e-15);
        assert_relative_eq!(csr_reference(1.0, 4), PI * PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(csr_reference(1.0, 5), 8.0 * PI * PI / 15.0, max_relative = 1e-14);
    }

    #[test]
    fn two_point_example() {
        let ps = LabeledPointSet::new(vec![Point::xy(0.0, 0.0), Point::xy(0.5, 0.0)], vec![], unit()).unwrap();
        let k = ripley_k_points(&ps).unwrap();
        assert_eq!(k.samples().len(), 1);
        assert_eq!(k.samples()[0].r, 0.5);
        assert_eq!(k.samples()[0].value, 0.5);
        assert_eq!(k.value_at(0.49), 0.0);
    }

    #[test]
    fn degenerate_sets_error() {
        let single = LabeledPointSet::new(vec![Point::xy(0.5, 0.5)], vec![], unit()).unwrap();
        assert!(ripley_k_points(&single).is_err());
        let empty = LabeledPointSet::new(vec![], vec![Point::xy(2.0, 2.0)], unit()).unwrap();
        assert!(ripley_k_points(&empty).is_err());
        // one interior point with a guard neighbour is estimable
        let guarded = LabeledPointSet::new(vec![Point::xy(0.5, 0.5)], vec![Point::xy(1.5, 0.5)], unit()).unwrap();
        let k = ripley_k_points(&guarded).unwrap();
        assert_eq!(k.samples().len(), 1);
        assert_eq!(k.samples()[0].value, 1.0);
    }

    #[test]
    fn interior_outside_window_rejected() {
        assert!(LabeledPointSet::new(vec![Point::xy(2.0, 0.5)], vec![], unit()).is_err());
    }

    #[test]
    fn guard_points_are_targets_only() {
        // two interior points and one guard point far from both: guard adds 2 pairs
        let ps =
            LabeledPointSet::new(vec![Point::xy(0.2, 0.5), Point::xy(0.8, 0.5)], vec![Point::xy(1.2, 0.5)], unit())
                .unwrap();
        let c = ripley_k_counts(&ps, Execution::Sequential).unwrap();
        // ordered pairs: (0,1),(1,0) at 0.6; (1,g) at 0.4; (0,g) at 1.0
        assert_eq!(c.counts(), &[1, 3, 4]);
        assert_relative_eq!(c.radii().next().unwrap(), 0.4, max_relative = 1e-12);
    }

    #[test]
    fn generic_counting_examples() {
        let items = [0.0f64, 1.0, 3.0];
        let k = ripley_k_generic(&items, Pairing::Symmetric, 0.5, Execution::Sequential, |a, b| (a - b).abs()).unwrap();
        // distinct unordered distances 1, 2, 3, each counted twice
        assert_eq!(k.values().collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);

        let k = ripley_k_generic(&[(); 3], Pairing::Ordered, 1.0, Execution::Sequential, |_, _| 0.7).unwrap();
        assert_eq!(k.samples(), &[crate::KSample { r: 0.7, value: 6.0 }]);

        assert!(
            ripley_k_generic(&[1.0f64], Pairing::Symmetric, 1.0, Execution::Sequential, |a, b| (a - b).abs()).is_err()
        );
    }

    #[test]
    fn six_distinct_ordered_distances() {
        // asymmetric pseudo-distance with six distinct ordered values
        let items = [1.0f64, 2.0, 4.0];
        let k = ripley_k_generic(&items, Pairing::Ordered, 0.25, Execution::Sequential, |a, b| a * 10.0 + b).unwrap();
        assert_eq!(k.len(), 6);
        assert_eq!(k.values().collect::<Vec<_>>(), vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5]);
    }

    #[test]
    fn range_counting_matches_sorted_steps() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let w = Window::cube(2, -1.0, 1.0).unwrap();
        let pts: Vec<Point> =
            (0..300).map(|_| Point::xy(rng.random_range(-1.4..1.4), rng.random_range(-1.4..1.4))).collect();
        let ps = LabeledPointSet::from_points(pts, w).unwrap();
        let full = ripley_k_points(&ps).unwrap();
        let mut radii: Vec<f64> = (1..=40).map(|k| k as f64 * 0.03).collect();
        // include radii that coincide exactly with pair distances
        radii.push(full.samples()[full.len() / 2].r);
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let at = ripley_k_points_at(&ps, &radii, Execution::Sequential).unwrap();
        for s in at.samples() {
            assert_eq!(s.value, full.value_at(s.r), "r = {}", s.r);
        }
    }
}
