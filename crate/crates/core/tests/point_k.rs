use curvestat::point_k::{
    csr_reference, ripley_k_counts, ripley_k_points, ripley_k_points_at, ripley_k_points_with, LabeledPointSet,
};
use curvestat::synth::{gen_points, PointPattern};
use curvestat::{Execution, Point, Window};
use proptest::prelude::*;

fn unit() -> Window {
    Window::cube(2, 0.0, 1.0).unwrap()
}

fn point_set(coords: &[(f64, f64)], guard: &[(f64, f64)]) -> LabeledPointSet {
    let int = coords.iter().map(|&(x, y)| Point::xy(x, y)).collect();
    let g = guard.iter().map(|&(x, y)| Point::xy(1.0 + x, y)).collect();
    LabeledPointSet::new(int, g, unit()).unwrap()
}

fn pts(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), n)
}

/// Eq.-1-style direct count: ordered pairs (interior, interior ∪ guard) with d <= r.
fn direct(ps: &LabeledPointSet, r: f64) -> f64 {
    let all: Vec<&Point> = ps.interior().iter().chain(ps.guard()).collect();
    let mut count = 0u64;
    for (i, p) in ps.interior().iter().enumerate() {
        for (j, q) in all.iter().enumerate() {
            if i != j && p.dist(q) <= r {
                count += 1;
            }
        }
    }
    count as f64 * ps.normalization()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sorted_estimate_equals_direct_count(int in pts(2..40), guard in pts(0..20)) {
        let ps = point_set(&int, &guard);
        let k = ripley_k_points(&ps).unwrap();
        for s in k.samples() {
            prop_assert_eq!(s.value, direct(&ps, s.r));
        }
        prop_assert!(k.is_monotone());
    }

    #[test]
    fn range_counting_equals_step_function(int in pts(2..60), guard in pts(0..30), radii in prop::collection::vec(0.0..1.5f64, 1..10)) {
        let ps = point_set(&int, &guard);
        let mut radii = radii;
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        // probe exact pair distances too
        radii.push(ps.interior()[0].dist(&ps.interior()[1]));
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let k = ripley_k_points(&ps).unwrap();
        let at = ripley_k_points_at(&ps, &radii, Execution::default()).unwrap();
        for s in at.samples() {
            prop_assert_eq!(s.value, k.value_at(s.r));
        }
    }

    #[test]
    fn rigid_motion_invariance(int in pts(2..40), dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
        let ps = point_set(&int, &[]);
        // quarter turn plus translation keeps the window axis-aligned
        let f = |p: &Point| Point::xy(-p.y() + dx, p.x() + dy);
        let w = Window::new(Point::xy(dx - 1.0, dy), Point::xy(dx, dy + 1.0)).unwrap();
        let moved = LabeledPointSet::new(ps.interior().iter().map(f).collect(), vec![], w).unwrap();
        let (a, b) = (ripley_k_points(&ps).unwrap(), ripley_k_points(&moved).unwrap());
        prop_assert_eq!(a.len(), b.len());
        for (s, t) in a.samples().iter().zip(b.samples()) {
            prop_assert!((s.r - t.r).abs() <= 1e-12 * (1.0 + s.r.abs()));
            prop_assert!((s.value - t.value).abs() <= 1e-12 * (1.0 + s.value.abs()));
        }
    }

    #[test]
    fn scaling_covariance(int in pts(2..40), s in 0.1..10.0f64) {
        let ps = point_set(&int, &[]);
        let w = Window::cube(2, 0.0, s).unwrap();
        let scaled = LabeledPointSet::new(ps.interior().iter().map(|p| *p * s).collect(), vec![], w).unwrap();
        let (a, b) = (ripley_k_points(&ps).unwrap(), ripley_k_points(&scaled).unwrap());
        prop_assert_eq!(a.len(), b.len());
        for (u, v) in a.samples().iter().zip(b.samples()) {
            prop_assert!((u.r * s - v.r).abs() <= 1e-9 * v.r.max(1e-300));
            prop_assert!((u.value * s * s - v.value).abs() <= 1e-9 * v.value);
        }
    }

    #[test]
    fn saturates_at_window_area(int in pts(2..80)) {
        let ps = point_set(&int, &[]);
        let n = int.len() as f64;
        let last = ripley_k_points(&ps).unwrap().last().unwrap().value;
        prop_assert!((last - (n - 1.0) / n).abs() <= 1e-12);
    }
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    let ps = gen_points(&PointPattern::Uniform { n: 300 }, &Window::cube(2, -1.0, 1.0).unwrap(), 0.3, 5).unwrap();
    let radii: Vec<f64> = (1..=30).map(|k| 0.02 * k as f64).collect();
    assert_eq!(
        ripley_k_points_with(&ps, Execution::Sequential).unwrap(),
        ripley_k_points_with(&ps, Execution::Parallel).unwrap()
    );
    assert_eq!(
        ripley_k_points_at(&ps, &radii, Execution::Sequential).unwrap(),
        ripley_k_points_at(&ps, &radii, Execution::Parallel).unwrap()
    );
}

#[test]
fn counts_are_recoverable_from_values() {
    let ps = point_set(&[(0.1, 0.1), (0.4, 0.5), (0.9, 0.2)], &[(0.05, 0.5)]);
    let counts = ripley_k_counts(&ps, Execution::default()).unwrap();
    let k = ripley_k_points(&ps).unwrap();
    for ((r, c), s) in counts.radii().zip(counts.counts()).zip(k.samples()) {
        assert_eq!(r, s.r);
        assert_eq!(*c as f64 * ps.normalization(), s.value);
    }
    assert_eq!(*counts.counts().last().unwrap(), 3 * 3);
}

#[test]
fn three_dimensional_points() {
    let w = Window::cube(3, 0.0, 1.0).unwrap();
    let ps = LabeledPointSet::new(vec![Point::xyz(0.1, 0.1, 0.1), Point::xyz(0.1, 0.1, 0.6)], vec![], w).unwrap();
    let k = ripley_k_points(&ps).unwrap();
    assert_eq!(k.value_at(0.49), 0.0);
    assert_eq!(k.value_at(0.5), 0.5);
    assert!((csr_reference(0.5, 3) - std::f64::consts::PI / 6.0).abs() < 1e-15);
}
