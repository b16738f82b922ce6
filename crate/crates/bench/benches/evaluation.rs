use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use siegel_bench::{pcf_points, zeta_points, TAUS};
use siegel_core::mordell::{phi_quadrature, transform_rhs};
use siegel_core::pcf::pcf_u;
use siegel_core::riemann_siegel::zeta;
use siegel_core::{c64, Method, MordellArgs, PcfArgs, QuadratureConfig};

fn mordell(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let mut group = c.benchmark_group("mordell");
    for tau in TAUS {
        let args = MordellArgs::new(c64(0.0, 0.0), c64(tau, 0.0)).unwrap();
        group.bench_with_input(BenchmarkId::new("direct", tau), &args, |b, a| {
            b.iter(|| phi_quadrature(black_box(*a), &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("transformed", tau), &args, |b, a| {
            b.iter(|| transform_rhs(black_box(*a), &cfg).unwrap())
        });
    }
    group.finish();
}

fn zeta_methods(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let mut group = c.benchmark_group("zeta");
    group.sample_size(10);
    for (label, s) in zeta_points() {
        for method in [Method::Classical, Method::Pcf, Method::Oracle] {
            group.bench_with_input(BenchmarkId::new(method.as_str(), label), &s, |b, s| {
                b.iter(|| zeta(black_box(*s), &cfg, method).unwrap())
            });
        }
    }
    group.finish();
}

fn parabolic_cylinder(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let mut group = c.benchmark_group("pcf_u");
    for (label, a, z) in pcf_points() {
        group.bench_function(label, |b| b.iter(|| pcf_u(black_box(PcfArgs::new(a, z)), &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, mordell, zeta_methods, parabolic_cylinder);
criterion_main!(benches);
