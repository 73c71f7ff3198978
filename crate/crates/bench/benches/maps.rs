use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use polyembed::geometry::{sample, SampleSpec, ShapeDescriptor};
use polyembed::maps::{build_main_lemma_map, psi_eval, PeriodicDiffeo1D};

const BATCH: usize = 10_000;

fn psi(c: &mut Criterion) {
    let mut g = c.benchmark_group("psi_eval");
    g.throughput(Throughput::Elements(BATCH as u64));
    for rho in [1.0, 10.0, 100.0] {
        let phi = PeriodicDiffeo1D::new(rho).unwrap();
        let pts: Vec<[f64; 2]> = (0..BATCH).map(|i| [i as f64 / BATCH as f64 * rho, 0.5]).collect();
        g.bench_with_input(BenchmarkId::from_parameter(rho), &pts, |b, pts| {
            b.iter(|| pts.iter().map(|&p| psi_eval(&phi, black_box(p))[1]).sum::<f64>())
        });
    }
    g.finish();
}

fn main_lemma(c: &mut Criterion) {
    let mut g = c.benchmark_group("main_lemma");
    g.throughput(Throughput::Elements(BATCH as u64));
    for r in [1.0, 5.0] {
        let ml = build_main_lemma_map(r).unwrap();
        let ball = ShapeDescriptor::ball(4, r).unwrap();
        let pts = sample(&ball, &SampleSpec::uniform(BATCH, 1)).unwrap();
        g.bench_with_input(BenchmarkId::new("eval", r), &pts, |b, pts| {
            b.iter(|| pts.iter().map(|p| ml.node.eval(black_box(p.coords())).unwrap()[0]).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("jacobian", r), &pts[..1000], |b, pts| {
            b.iter(|| pts.iter().map(|p| ml.node.jacobian(black_box(p.coords())).unwrap()[(0, 0)]).sum::<f64>())
        });
    }
    g.finish();
}

criterion_group!(benches, psi, main_lemma);
criterion_main!(benches);
