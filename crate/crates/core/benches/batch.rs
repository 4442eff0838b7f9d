use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tvk_core::numerics::ttilde_batch;
use tvk_core::{ExecMode, Index, PrecisionPolicy};

fn admissible_upto(w: u32) -> Vec<Index> {
    (2..=w)
        .flat_map(Index::all_of_weight)
        .filter(Index::is_admissible)
        .collect()
}

fn bench_batch(c: &mut Criterion) {
    let ks = admissible_upto(6);
    let policy = PrecisionPolicy::with_digits(30);
    let mut g = c.benchmark_group("ttilde_batch");
    g.sample_size(10);
    for (name, mode) in [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)] {
        g.bench_with_input(BenchmarkId::new(name, ks.len()), &ks, |b, ks| {
            b.iter(|| ttilde_batch(ks, &policy, mode))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
