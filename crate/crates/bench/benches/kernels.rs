//! Benchmarks for the evaluation hot paths: theta series, the elliptic
//! gamma double product, terminating very-well-poised sums, intertwiner
//! series coefficients, vertex functions and sampled operator composition.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sklyanin_bench::{bench_context, bench_points};
use sklyanin_core::algebra::{make_generators, Spin};
use sklyanin_core::hyper::{jackson_series_params, omega_series, Truncation};
use sklyanin_core::intertwiner::w_series_coeffs;
use sklyanin_core::vertex::vertex_w;
use sklyanin_core::C64;

fn bench_theta(c: &mut Criterion) {
    let ctx = bench_context();
    let (z, _, _) = bench_points();
    c.bench_function("theta1", |b| {
        b.iter(|| ctx.theta1(black_box(2.0 * z)).unwrap())
    });
}

fn bench_gamma(c: &mut Criterion) {
    let ctx = bench_context();
    let (z, zeta, _) = bench_points();
    c.bench_function("elliptic_gamma", |b| {
        b.iter(|| ctx.gamma(black_box(z + zeta + ctx.eta)).unwrap())
    });
}

fn bench_omega(c: &mut Criterion) {
    let ctx = bench_context();
    let a1 = C64::new(0.31, 0.17);
    let a4 = C64::new(0.11, -0.05);
    let a5 = C64::new(-0.21, 0.09);
    let a6 = C64::new(0.4, 0.02);
    let n = 8usize;
    let a7 = 2.0 * a1 + C64::new(1.0 + n as f64, 0.0) - a4 - a5 - a6;
    let params = jackson_series_params(a1, [a4, a5, a6, a7], n);
    c.bench_function("omega_8w7_terminating_n8", |b| {
        b.iter(|| omega_series(&ctx, black_box(&params), Truncation::Terminating).unwrap())
    });
}

fn bench_w_series(c: &mut Criterion) {
    let ctx = bench_context();
    let (z, _, lam) = bench_points();
    c.bench_function("w_series_coeffs_n12", |b| {
        b.iter(|| w_series_coeffs(&ctx, black_box(lam), black_box(z), 12).unwrap())
    });
}

fn bench_vertex(c: &mut Criterion) {
    let ctx = bench_context();
    let (z, zeta, lam) = bench_points();
    c.bench_function("vertex_w", |b| {
        b.iter(|| vertex_w(&ctx, black_box(z), black_box(zeta), black_box(lam)).unwrap())
    });
}

fn bench_compose(c: &mut Criterion) {
    let ctx = bench_context();
    let gen = make_generators(&ctx, Spin::of_re(0.5));
    let (z, _, _) = bench_points();
    let composed = gen.s[1].compose(&ctx, &gen.s[2]);
    c.bench_function("sklyanin_compose_eval", |b| {
        b.iter(|| {
            let mut acc = C64::new(0.0, 0.0);
            for k in composed.indices() {
                acc += composed.coeff_at(k, black_box(z)).unwrap();
            }
            acc
        })
    });
}

criterion_group!(
    benches,
    bench_theta,
    bench_gamma,
    bench_omega,
    bench_w_series,
    bench_vertex,
    bench_compose
);
criterion_main!(benches);
