use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pl2::verify::{run_suite, Suite, VerifyConfig};
use pl2::Execution;
use std::hint::black_box;

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in Suite::ALL {
        for execution in [Execution::Sequential, Execution::Parallel] {
            let cfg = VerifyConfig {
                execution,
                ..VerifyConfig::default()
            };
            let label = format!("{execution:?}").to_lowercase();
            group.bench_with_input(BenchmarkId::new(suite.name(), label), &cfg, |b, cfg| {
                b.iter(|| black_box(run_suite(suite, cfg).expect("suite runs")))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
