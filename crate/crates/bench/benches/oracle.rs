use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qi_fading::oracle::{conditional_qcb, helstrom, lemma2_trend, tmsv_state, Truncation};
use qi_fading_bench::{desk_params, thermal_pair};

fn helstrom_thermal(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle/helstrom_thermal");
    for dim in [32, 128, 512] {
        let (a, b) = thermal_pair(0.5, 4.0, dim);
        g.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |bn, _| {
            bn.iter(|| helstrom(black_box(&a), black_box(&b), 0.5).unwrap())
        });
    }
    g.finish();
}

fn chernoff(c: &mut Criterion) {
    let p = desk_params();
    let mut g = c.benchmark_group("oracle/conditional_qcb");
    for dim in [4, 6, 8] {
        g.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |bn, &d| {
            bn.iter(|| conditional_qcb(&p, 0.6, 1.0, Truncation::new(d, 1e-2)).unwrap())
        });
    }
    g.finish();
}

fn states(c: &mut Criterion) {
    c.bench_function("oracle/tmsv_dim24", |b| {
        b.iter(|| tmsv_state(black_box(0.1), 24).unwrap())
    });
}

fn trend(c: &mut Criterion) {
    let p = desk_params();
    let mut g = c.benchmark_group("oracle/lemma2_trend");
    g.sample_size(10);
    g.bench_function("m2_dim4_nodes16", |b| b.iter(|| lemma2_trend(&p, &[2], 4, 16).unwrap()));
    g.finish();
}

criterion_group!(benches, helstrom_thermal, chernoff, states, trend);
criterion_main!(benches);
