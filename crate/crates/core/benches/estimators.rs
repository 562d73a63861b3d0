use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use curvestat::current_k::{kc, KcConfig, KernelSpec};
use curvestat::fiber_k::{kf_direct, kf_via_cox, KfConfig};
use curvestat::morph_k::{default_radii, km, KmConfig};
use curvestat::point_k::ripley_k_points_with;
use curvestat::synth::{gen_points, CurvePreset, PointPattern};
use curvestat::{Execution, Window};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn points(c: &mut Criterion) {
    let ps = gen_points(&PointPattern::Uniform { n: 1000 }, &Window::cube(2, -1.0, 1.0).unwrap(), 0.5, 1).unwrap();
    let mut g = c.benchmark_group("ripley_k_points");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| ripley_k_points_with(&ps, e)));
    }
    g.finish();
}

fn fibers(c: &mut Criterion) {
    let cs = CurvePreset::Wide.generate(30, 1).unwrap();
    let radii: Vec<f64> = (1..=10).map(|k| 0.05 * k as f64).collect();
    let mut g = c.benchmark_group("kf_direct");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = KfConfig { execution: exec, ..KfConfig::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| kf_direct(&cs, &radii, cfg)));
    }
    g.finish();
    let mut g = c.benchmark_group("kf_via_cox");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| kf_via_cox(&cs, 100.0, 3, &radii, e))
        });
    }
    g.finish();
}

fn morph(c: &mut Criterion) {
    let cs = CurvePreset::SevenClusters.generate(50, 1).unwrap();
    let radii = default_radii(&cs, 50);
    let mut g = c.benchmark_group("km");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = KmConfig { execution: exec };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| km(&cs, &radii, cfg)));
    }
    g.finish();
}

fn currents(c: &mut Criterion) {
    let cs = CurvePreset::TwoClusters.generate(50, 1).unwrap();
    let mut g = c.benchmark_group("kc");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = KcConfig { execution: exec, ..KcConfig::new(KernelSpec::gaussian(0.5).unwrap()) };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| kc(&cs, cfg)));
    }
    g.finish();
}

criterion_group!(benches, points, fibers, morph, currents);
criterion_main!(benches);
