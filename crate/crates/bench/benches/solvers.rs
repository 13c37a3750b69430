//! Solver benchmarks: classical step-size against the optimal metric, end to
//! end (reference solve included) and with the metric given.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use equilibrate::admm::{admm_classical, admm_equilibrate, AdmmConfig, AdmmState};
use equilibrate::metric_select::{estimate_reference, one_shot_solve, optimal_metric};
use equilibrate_bench::bench_instances;

fn solver_benchmarks(c: &mut Criterion) {
    let mut group = c.benchmark_group("lasso_solve");
    for &n in &[5usize, 20, 50] {
        let spec = bench_instances(n, 1).remove(0);
        let init = AdmmState::zero(spec.n(), spec.m(), spec.p());
        let cfg = AdmmConfig { k_max: 50_000, tol: 1e-8, record_trace: false };

        group.bench_with_input(BenchmarkId::new("classical_gamma1", n), &spec, |b, spec| {
            b.iter(|| admm_classical(spec, 1.0, &init, &cfg).unwrap())
        });

        let reference = estimate_reference(&spec).unwrap();
        let image = &spec.f_mat * &reference.x;
        let choice = optimal_metric(&image, &reference.lambda, 1e-8).unwrap();

        group.bench_with_input(BenchmarkId::new("equilibrate_optimal", n), &spec, |b, spec| {
            b.iter(|| admm_equilibrate(spec, &choice.metric, &init, &cfg).unwrap())
        });

        group.bench_with_input(BenchmarkId::new("one_shot", n), &spec, |b, spec| {
            b.iter(|| one_shot_solve(spec, &choice.metric).unwrap())
        });

        group.bench_with_input(BenchmarkId::new("optimal_end_to_end", n), &spec, |b, spec| {
            b.iter(|| {
                let reference = estimate_reference(spec).unwrap();
                let image = &spec.f_mat * &reference.x;
                let choice = optimal_metric(&image, &reference.lambda, 1e-8).unwrap();
                one_shot_solve(spec, &choice.metric).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, solver_benchmarks);
criterion_main!(benches);
