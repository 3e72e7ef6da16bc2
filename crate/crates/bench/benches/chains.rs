use admit_bench::{Workload, SIZES};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn chains(c: &mut Criterion) {
    let mut group = c.benchmark_group("lollipop");
    group.sample_size(10);
    for n in SIZES {
        let w = Workload::lollipop(n);
        group.bench_with_input(BenchmarkId::new("is_chain", n), &w, |b, w| {
            b.iter(|| w.is_chain())
        });
        group.bench_with_input(BenchmarkId::new("chain_below_chain", n), &w, |b, w| {
            b.iter(|| w.below_itself())
        });
    }
    group.finish();
}

criterion_group!(benches, chains);
criterion_main!(benches);
