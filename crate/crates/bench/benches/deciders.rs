use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use sofic_core::gen::random_vertex_shift;
use sofic_core::resolving::as_one_block;
use sofic_core::rng::SplitMix64;
use sofic_core::{
    canonical_form, check_retract, corpus, is_sft, minimal_retract, oracle_retract,
    run_kbound_experiment, spacer_interleave, step_of, verify_kbound,
};

fn bench_canonical_form(c: &mut Criterion) {
    let mut rng = SplitMix64::new(8);
    let shifts: Vec<_> = (0..8).map(|_| random_vertex_shift(&mut rng, 6)).collect();
    c.bench_function("canonical_form/random-6-symbol", |b| {
        b.iter(|| {
            for p in &shifts {
                black_box(canonical_form(p).unwrap());
            }
        })
    });
}

fn bench_sft_deciders(c: &mut Criterion) {
    let marked = corpus::no_retract_shift();
    c.bench_function("is_sft/strictly-sofic", |b| {
        b.iter(|| black_box(is_sft(&marked).unwrap()))
    });
    let golden = corpus::golden_mean();
    c.bench_function("step_of/golden-mean", |b| {
        b.iter(|| black_box(step_of(&golden).unwrap()))
    });
}

fn bench_retract(c: &mut Criterion) {
    let collapse = corpus::no_retract_code();
    c.bench_function("check_retract/collapse-n5", |b| {
        b.iter(|| black_box(check_retract(&collapse, 5).unwrap()))
    });
    c.bench_function("minimal_retract/collapse", |b| {
        b.iter(|| black_box(minimal_retract(&collapse).unwrap()))
    });
    let min = as_one_block(&corpus::min_code()).unwrap();
    c.bench_function("minimal_retract/min-code", |b| {
        b.iter(|| black_box(minimal_retract(&min).unwrap()))
    });
    c.bench_function("oracle_retract/min-code-n1-bound2", |b| {
        b.iter(|| black_box(oracle_retract(&min, 1, 2).unwrap()))
    });
}

fn bench_constructions(c: &mut Criterion) {
    let base = corpus::one_way_collapse_code();
    c.bench_function("spacer_interleave/one-way-collapse", |b| {
        b.iter(|| black_box(spacer_interleave(&base).unwrap()))
    });
    let min = corpus::min_code();
    c.bench_function("verify_kbound/min-code", |b| {
        b.iter(|| black_box(verify_kbound(&min).unwrap()))
    });
}

fn bench_experiment(c: &mut Criterion) {
    c.bench_function("kbound_experiment/20-instances", |b| {
        b.iter(|| black_box(run_kbound_experiment(20, 5, 7).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_canonical_form,
    bench_sft_deciders,
    bench_retract,
    bench_constructions,
    bench_experiment
);
criterion_main!(benches);
