use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sts_core::envelope::{build_envelope, killing};
use sts_core::export::{round_trip, ExportRecord};
use sts_core::models::real_form::upsilon_even_count;
use sts_core::{build, check_axioms, inder_span, CheckMode, ModelLabel};

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("construction");
    g.sample_size(10);
    for label in [ModelLabel::G2, ModelLabel::F4, ModelLabel::E6Split, ModelLabel::E6NonSplit { p: 3 }] {
        g.bench_function(label.to_string(), |b| b.iter(|| build(black_box(label)).unwrap()));
    }
    g.finish();
}

fn axioms(c: &mut Criterion) {
    let mut g = c.benchmark_group("axioms");
    g.sample_size(10);
    let f4 = build(ModelLabel::F4).unwrap();
    g.bench_function("f4 exhaustive", |b| b.iter(|| check_axioms(&f4.system, CheckMode::Exhaustive)));
    let e7 = build(ModelLabel::E7Split).unwrap();
    g.bench_function("e7split sampled 1e4", |b| {
        b.iter(|| check_axioms(&e7.system, CheckMode::Sampled { seed: 7, count: 10_000 }))
    });
    g.finish();
}

fn envelope(c: &mut Criterion) {
    let mut g = c.benchmark_group("envelope");
    g.sample_size(10);
    let t = build(ModelLabel::E6Split).unwrap().system;
    let inder = inder_span(&t).unwrap();
    g.bench_function("e6split inder span", |b| b.iter(|| inder_span(&t).unwrap()));
    g.bench_function("e6split envelope + killing", |b| {
        b.iter(|| killing(&build_envelope(&t, &inder).unwrap()).signature)
    });
    g.finish();
}

fn export(c: &mut Criterion) {
    let m = build(ModelLabel::F4).unwrap();
    let text = ExportRecord::from_model(&m, CheckMode::Exhaustive, None).to_json().unwrap();
    c.bench_function("export f4 round trip", |b| b.iter(|| round_trip(black_box(&text)).unwrap()));
    c.bench_function("counting check", |b| b.iter(|| [4, 6, 8].map(|p| upsilon_even_count(black_box(p)))));
}

criterion_group!(benches, construction, axioms, envelope, export);
criterion_main!(benches);
