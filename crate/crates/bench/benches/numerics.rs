use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gbf_core::asymptotics::{expansion_partial_sum, lomax_cdf, remainder, ExpansionSpec};
use gbf_core::cm_probe::{cm_probe, ProbeConfig};
use gbf_core::glambda::{g_lambda, s_n_limit};
use gbf_core::inequality::{margin_ineq_i, margin_thm_iii, sweep, GridSpec, Inequality, MarginOptions};
use gbf_core::smoothing::{approx_fn, bg1_residual};
use gbf_core::special::{incomplete_beta, lower_incomplete_gamma};
use gbf_core::GBFRep;

fn special(c: &mut Criterion) {
    c.bench_function("lower_incomplete_gamma", |b| {
        b.iter(|| lower_incomplete_gamma(black_box(2.5), black_box(3.7)).unwrap())
    });
    c.bench_function("incomplete_beta", |b| {
        b.iter(|| incomplete_beta(black_box(0.5), black_box(10.0), black_box(0.3)).unwrap())
    });
    c.bench_function("g_lambda", |b| {
        b.iter(|| g_lambda(black_box(2.5), black_box(7.0)).unwrap())
    });
}

fn identities(c: &mut Criterion) {
    c.bench_function("bg1_residual", |b| {
        b.iter(|| bg1_residual(black_box(2.5), black_box(1.0), black_box(10.0)).unwrap())
    });
    c.bench_function("s_n_limit 1e5", |b| {
        b.iter(|| s_n_limit(0, black_box(0.5), 0.5, 100_000).unwrap())
    });
}

fn margins(c: &mut Criterion) {
    let rep = GBFRep::point_mass(1.0, 1.0, 1.0).unwrap();
    let opts = MarginOptions::default();
    c.bench_function("margin_ineq_i", |b| {
        b.iter(|| margin_ineq_i(black_box(0.5), black_box(2.0), black_box(3.0), true).unwrap())
    });
    c.bench_function("margin_thm_iii", |b| {
        b.iter(|| margin_thm_iii(&rep, black_box(2.0), black_box(3.0), &opts).unwrap())
    });
    let grid = GridSpec::square(vec![0.5], "log:0.01:100:20".parse().unwrap()).unwrap();
    c.bench_function("sweep I 20x20", |b| {
        b.iter(|| sweep(&Inequality::I, &grid, &opts).unwrap())
    });
    c.bench_function("approx_fn n=64", |b| {
        b.iter(|| approx_fn(&rep, 64, black_box(1.0), 1e-12).unwrap())
    });
}

fn probes(c: &mut Criterion) {
    let cfg = ProbeConfig::default();
    c.bench_function("cm_probe e^-x", |b| b.iter(|| cm_probe(|x| (-x).exp(), &cfg).unwrap()));
    let spec = ExpansionSpec::lomax(2.5, 4).unwrap();
    c.bench_function("lomax_cdf", |b| {
        b.iter(|| lomax_cdf(2.5, black_box(10.0), 1e-12).unwrap())
    });
    c.bench_function("lomax partial sum", |b| {
        b.iter(|| expansion_partial_sum(&spec, black_box(10.0), 1e-12).unwrap())
    });
    c.bench_function("lomax remainder", |b| {
        b.iter(|| remainder(&spec, black_box(10.0), 1e-12).unwrap())
    });
}

criterion_group!(benches, special, identities, margins, probes);
criterion_main!(benches);
