use curvestat::fiber_k::{cox_sample, d_a, estimate_rho, kf_direct, kf_via_cox, KfConfig};
use curvestat::synth::CurvePreset;
use curvestat::{CurveSet, Execution, Point, Polyline, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seg(x0: f64, y0: f64, x1: f64, y1: f64) -> Polyline {
    Polyline::new(vec![Point::xy(x0, y0), Point::xy(x1, y1)]).unwrap()
}

fn random_polyline(rng: &mut ChaCha8Rng, segments: usize) -> Polyline {
    let mut v = vec![Point::xy(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))];
    for _ in 0..segments {
        let last = *v.last().unwrap();
        v.push(last + Point::xy(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6)));
    }
    Polyline::new(v).unwrap()
}

#[test]
fn sum_decomposition_over_fiber_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let w = Window::cube(2, -1.0, 1.0).unwrap();
    for _ in 0..10 {
        let n = rng.random_range(2..5);
        let fs = CurveSet::new((0..n).map(|_| random_polyline(&mut rng, 3)).collect(), w).unwrap();
        if fs.total_clipped_length() == 0.0 {
            continue;
        }
        let (r, h) = (0.3, 1e-3);
        let k = kf_direct(&fs, &[r], &KfConfig { spacing: Some(h), ..KfConfig::default() }).unwrap();
        let a = w.erode(r).unwrap();
        let rho = estimate_rho(&fs).unwrap().rho;
        let lhs = rho * k.curve.value_at(r) * rho * a.volume();
        let rhs: f64 =
            fs.curves().iter().flat_map(|gi| fs.curves().iter().map(move |gj| d_a(gi, gj, &a, r, h).unwrap())).sum();
        assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1e-12), "{lhs} vs {rhs}");
    }
}

#[test]
fn poisson_mean_count() {
    let w = Window::cube(2, 0.0, 1.0).unwrap();
    let fs = CurveSet::new(vec![seg(0.0, 0.5, 1.0, 0.5)], w).unwrap();
    let seeds = 10_000;
    let total: usize = (0..seeds).map(|s| cox_sample(&fs, 10.0, s).unwrap().len()).sum();
    let mean = total as f64 / seeds as f64;
    assert!((mean - 10.0).abs() <= 3.0 * 10f64.sqrt() / 100.0, "{mean}");
}

#[test]
fn poisson_points_uniform_in_arc_length() {
    let w = Window::cube(2, 0.0, 1.0).unwrap();
    let fs = CurveSet::new(vec![seg(0.0, 0.5, 1.0, 0.5)], w).unwrap();
    let mut xs = Vec::new();
    let mut seed = 0;
    while xs.len() < 10_000 {
        let ps = cox_sample(&fs, 100.0, seed).unwrap();
        xs.extend(ps.interior().iter().map(|p| p.x()));
        seed += 1;
    }
    xs.truncate(10_000);
    let mut bins = [0f64; 20];
    for x in &xs {
        bins[((x * 20.0) as usize).min(19)] += 1.0;
    }
    let e = xs.len() as f64 / 20.0;
    let chi2: f64 = bins.iter().map(|o| (o - e).powi(2) / e).sum();
    // 0.999 quantile of chi-square with 19 degrees of freedom
    assert!(chi2 < 43.82, "chi2 = {chi2}");
}

#[test]
fn cox_points_lie_on_fibers_and_are_deterministic() {
    let fs = CurvePreset::Wide.generate(10, 3).unwrap();
    let a = cox_sample(&fs, 50.0, 9).unwrap();
    assert_eq!(a, cox_sample(&fs, 50.0, 9).unwrap());
    assert_ne!(a, cox_sample(&fs, 50.0, 10).unwrap());
    for p in a.interior().iter().chain(a.guard()) {
        let d =
            fs.curves().iter().map(|c| curvestat::geometry::point_to_polyline_distance(p, c)).fold(f64::MAX, f64::min);
        assert!(d < 1e-12);
    }
    let radii = [0.1, 0.2];
    assert_eq!(
        kf_via_cox(&fs, 50.0, 9, &radii, Execution::Sequential).unwrap(),
        kf_via_cox(&fs, 50.0, 9, &radii, Execution::Parallel).unwrap()
    );
}

#[test]
fn straight_fiber_closed_forms() {
    // Cox: guard points past the window give every interior point 2rλ neighbours, so 2r.
    // Direct: length (1 - 2r) in the erosion over ρ²|W ⊖ r| = (1 - 2r)², so 2r / (1 - 2r).
    let w = Window::cube(2, 0.0, 1.0).unwrap();
    let fs = CurveSet::new(vec![seg(-1.0, 0.5, 2.0, 0.5)], w).unwrap();
    let radii = [0.05, 0.1, 0.2];
    let direct = kf_direct(&fs, &radii, &KfConfig::default()).unwrap().curve;
    let seeds = 200;
    let mut mean = [0.0; 3];
    for s in 0..seeds {
        let k = kf_via_cox(&fs, 200.0, s, &radii, Execution::default()).unwrap();
        for (m, v) in mean.iter_mut().zip(k.values()) {
            *m += v / seeds as f64;
        }
    }
    for ((&r, d), m) in radii.iter().zip(direct.values()).zip(mean) {
        assert!((d - 2.0 * r / (1.0 - 2.0 * r)).abs() < 1e-9, "{d}");
        assert!((m - 2.0 * r).abs() < 0.03 * 2.0 * r, "r={r}: {m}");
    }
}

#[test]
fn scaling_covariance() {
    let fs = CurvePreset::SevenClusters.generate(15, 1).unwrap();
    let s = 3.0;
    let w = fs.window();
    let scaled = CurveSet::new(
        fs.curves().iter().map(|c| c.map_points(|p| *p * s).unwrap()).collect(),
        Window::new(*w.lo() * s, *w.hi() * s).unwrap(),
    )
    .unwrap();
    let radii = [0.1, 0.25];
    let cfg = KfConfig { spacing: Some(1e-3), ..KfConfig::default() };
    let a = kf_direct(&fs, &radii, &cfg).unwrap().curve;
    let b = kf_direct(&scaled, &radii.map(|r| r * s), &KfConfig { spacing: Some(s * 1e-3), ..cfg }).unwrap().curve;
    for (u, v) in a.values().zip(b.values()) {
        assert!((u * s * s - v).abs() <= 1e-6 * v, "{u} {v}");
    }
}

#[test]
fn direct_estimator_monotone_and_parallel_safe() {
    let fs = CurvePreset::TwoClusters.generate(20, 2).unwrap();
    let radii: Vec<f64> = (1..=10).map(|k| 0.05 * k as f64).collect();
    let seq = kf_direct(&fs, &radii, &KfConfig { execution: Execution::Sequential, ..KfConfig::default() }).unwrap();
    let par = kf_direct(&fs, &radii, &KfConfig { execution: Execution::Parallel, ..KfConfig::default() }).unwrap();
    assert_eq!(seq, par);
    assert!(seq.truncated_at.is_none());
}

#[test]
fn truncates_past_empty_erosion() {
    let fs = CurvePreset::Wide.generate(5, 0).unwrap();
    let k = kf_direct(&fs, &[0.5, 0.9, 1.0, 1.2], &KfConfig::default()).unwrap();
    assert_eq!(k.truncated_at, Some(1.0));
    assert_eq!(k.curve.len(), 2);
}
