//! Benchmark-only crate; see the `benches/` directory.
//!
//! Shared helpers for the benchmark targets live here so both harnesses pull
//! identical instances.

use equilibrate::instances::{generate_instances, InstanceFamily};
use equilibrate::ProblemSpec;

/// The instance family every benchmark draws from.
pub fn bench_instances(n: usize, count: usize) -> Vec<ProblemSpec> {
    generate_instances(InstanceFamily::LassoDense, n, count, 0xbe7c)
        .expect("bench instance generation")
        .into_iter()
        .map(|i| i.spec)
        .collect()
}
