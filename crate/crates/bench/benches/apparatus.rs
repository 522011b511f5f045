use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use galmann_bench::{cubic_sampled, cubic_spec, mannheim_family};
use galmann_core::{
    audit_claims, detect_partner, frenet_apparatus, mannheim_mate, reparametrize_to_arclength,
    Expression,
};

fn parse(c: &mut Criterion) {
    c.bench_function("parse", |b| {
        b.iter(|| Expression::parse(black_box("sinh(t)^2/(1+exp(-t))*cos(2*pi*t)"), "t"))
    });
    let e = Expression::parse("sinh(t)^2/(1+exp(-t))*cos(2*pi*t)", "t").unwrap();
    c.bench_function("eval_jet5", |b| b.iter(|| e.eval_jet::<6>(black_box(0.3))));
}

fn pipeline(c: &mut Criterion) {
    let spec = cubic_spec();
    let mut g = c.benchmark_group("reparametrize");
    for n in [101, 1001] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| reparametrize_to_arclength(&spec, n).unwrap())
        });
    }
    g.finish();

    let (curve, fd) = cubic_sampled(1001);
    c.bench_function("frenet_1001", |b| {
        b.iter(|| frenet_apparatus(&curve).unwrap())
    });
    c.bench_function("mate_1001", |b| {
        b.iter(|| mannheim_mate(&curve, &fd, 0.5).unwrap())
    });

    let (fam, fam_fd) = mannheim_family(0.5, 1001);
    c.bench_function("detect_1001", |b| {
        b.iter(|| detect_partner(&fam, &fam_fd).unwrap())
    });
    let pair = mannheim_mate(&fam, &fam_fd, 0.5).unwrap();
    c.bench_function("audit_1001", |b| b.iter(|| audit_claims(&pair)));
}

criterion_group!(benches, parse, pipeline);
criterion_main!(benches);
