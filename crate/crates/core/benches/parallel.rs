//! Compares the rayon-backed and sequential evaluation paths on the two
//! data-parallel workloads: sweep grids and LHS model batches.
//!
//! The mode is fixed at compile time by the `parallel` feature, so run the
//! suite twice to fill both rows of each group:
//!
//! ```text
//! cargo bench -p steering-core
//! cargo bench -p steering-core --no-default-features
//! ```

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use steering_core::criteria::CriterionId;
use steering_core::lhs::{run_batch_check, ModelKind};
use steering_core::robustness::{sweep, StateFamily};
use steering_core::PartyPairs;

const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

fn bench_sweep(c: &mut Criterion) {
    let pairs = PartyPairs::pauli();
    let criteria = CriterionId::all_tripartite();
    let mut group = c.benchmark_group("sweep_ghz_noise_201");
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| {
            let result = sweep(
                StateFamily::GhzNoise,
                0.0,
                1.0,
                black_box(201),
                &pairs,
                &criteria,
            )
            .unwrap();
            black_box(result.rows.len())
        })
    });
    group.finish();
}

fn bench_lhs_batch(c: &mut Criterion) {
    let pairs = PartyPairs::pauli();
    let mut group = c.benchmark_group("lhs_verify_100");
    group.sample_size(20);
    group.bench_function(BenchmarkId::from_parameter(MODE), |b| {
        b.iter(|| {
            let summary =
                run_batch_check(ModelKind::Lhs, black_box(100), 4, 7, &pairs).unwrap();
            black_box(summary.checks)
        })
    });
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_lhs_batch);
criterion_main!(benches);
