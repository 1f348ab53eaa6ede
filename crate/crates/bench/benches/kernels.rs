use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quermass_bench::fixture;
use quermass_core::diagnostics::sphere_deviation;
use quermass_core::flowcore::Scheme;
use quermass_core::measures::{ball_w_inverse, measure_set};
use quermass_core::symfunc::SpeedKind;
use quermass_core::SpeedFunction;

fn speed_derivatives(c: &mut Criterion) {
    let kappa = [1.3, 2.1, 1.7];
    let mut group = c.benchmark_group("speed_derivatives");
    for name in ["Ek_root(2)", "power_mean(2)", "product(Ek_root(1),Ek_root(3),0.5)"] {
        let kind: SpeedKind = name.parse().unwrap();
        let f = SpeedFunction::new(kind, 3, 1.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &f, |b, f| {
            b.iter(|| f.derivatives(black_box(&kappa)).unwrap())
        });
    }
    group.finish();
}

fn flow_kernels(c: &mut Criterion) {
    let cases = [
        ("radial_n1_256", 1, Scheme::RadialGraph, 256),
        ("support_n1_256", 1, Scheme::SupportFunction, 256),
        ("radial_n2_129", 2, Scheme::RadialGraph, 129),
    ];
    let mut group = c.benchmark_group("flow");
    for (label, n, scheme, nodes) in cases {
        let fx = fixture(n, scheme, nodes);
        let eval = fx.flow.evaluate(&fx.state).unwrap();
        let dt = fx.flow.stable_dt(&fx.state, &eval).unwrap();
        group.bench_function(BenchmarkId::new("evaluate", label), |b| {
            b.iter(|| fx.flow.evaluate(black_box(&fx.state)).unwrap())
        });
        group.bench_function(BenchmarkId::new("rk4", label), |b| {
            b.iter(|| fx.flow.rk4(black_box(&fx.state), &eval, dt).unwrap())
        });
    }
    group.finish();
}

fn measures(c: &mut Criterion) {
    let fx = fixture(1, Scheme::RadialGraph, 256);
    c.bench_function("measure_set_n1", |b| b.iter(|| measure_set(black_box(&fx.state), 0.0).unwrap()));
    c.bench_function("sphere_deviation_n1", |b| {
        b.iter(|| sphere_deviation(black_box(&fx.state), 1).unwrap())
    });
    c.bench_function("ball_w_inverse_n3", |b| b.iter(|| ball_w_inverse(3, 2, black_box(12.5)).unwrap()));
}

criterion_group!(benches, speed_derivatives, flow_kernels, measures);
criterion_main!(benches);
