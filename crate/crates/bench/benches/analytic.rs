use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qi_fading::analytic::{ci_bayes, ci_roc, sfg_bayes, sfg_roc};
use qi_fading::Preset;

fn receivers(c: &mut Criterion) {
    let mut g = c.benchmark_group("analytic");
    for preset in [Preset::Fig2a, Preset::Fig2b] {
        let p = preset.params();
        g.bench_function(format!("sfg_bayes/{}", preset.name()), |b| {
            b.iter(|| sfg_bayes(black_box(&p)))
        });
        g.bench_function(format!("ci_bayes/{}", preset.name()), |b| {
            b.iter(|| ci_bayes(black_box(&p)))
        });
        g.bench_function(format!("sfg_roc/{}", preset.name()), |b| {
            b.iter(|| sfg_roc(black_box(&p)))
        });
        g.bench_function(format!("ci_roc/{}", preset.name()), |b| {
            b.iter(|| ci_roc(black_box(&p)))
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let p = Preset::Fig3a.params();
    c.bench_function("analytic/bayes_sweep_51", |b| {
        b.iter(|| {
            (0..51)
                .map(|i| {
                    let q = p.with_m(10f64.powf(5.0 + 0.1 * i as f64)).unwrap();
                    sfg_bayes(&q).p_error + ci_bayes(&q).p_error
                })
                .sum::<f64>()
        })
    });
}

criterion_group!(benches, receivers, sweep);
criterion_main!(benches);
