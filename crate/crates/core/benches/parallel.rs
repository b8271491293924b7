use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, SamplingMode};

use hmcheck::laws::{
    check_naturality, check_unit_laws, default_spaces, fiber_uniqueness_with, Sampling,
};
use hmcheck::par::Exec;
use hmcheck::tower::Diagonal;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn bench_law_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("law sampling");
    group.sample_size(10);
    let spaces = default_spaces();
    for (name, exec) in MODES {
        let s = Sampling::new(500, 7).with_exec(exec);
        group.bench_with_input(BenchmarkId::new("unit laws x500", name), &s, |b, s| {
            b.iter(|| check_unit_laws(&Diagonal, &spaces, s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("naturality x500", name), &s, |b, s| {
            b.iter(|| check_naturality(&Diagonal, s).unwrap())
        });
    }
    group.finish();
}

fn bench_fiber(c: &mut Criterion) {
    let mut group = c.benchmark_group("fiber enumeration");
    group.sample_size(10).sampling_mode(SamplingMode::Flat); // n=3 is ~500k step functions
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("n=3 m=2", name), |b| {
            b.iter(|| fiber_uniqueness_with(3, 2, u64::MAX, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_law_sampling, bench_fiber);
criterion_main!(benches);
