use brickcurve::corpus::{evaluate_all, evaluate_all_sequential, generate, CorpusParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn corpus(c: &mut Criterion) {
    let mut group = c.benchmark_group("corpus");
    group.sample_size(10);
    for count in [100, 500] {
        let params = CorpusParams { count, ..CorpusParams::default() };
        let words = generate(&params);
        group.throughput(Throughput::Elements(count as u64));
        group.bench_with_input(BenchmarkId::new("sequential", count), &words, |b, w| {
            b.iter(|| evaluate_all_sequential(w, None))
        });
        group.bench_with_input(BenchmarkId::new("evaluate_all", count), &words, |b, w| {
            b.iter(|| evaluate_all(w, None))
        });
    }
    group.finish();
}

criterion_group!(benches, corpus);
criterion_main!(benches);
