//! The `compare` command: iteration counts of the classical step-size grid
//! against the identity and optimal metrics on a common instance set.

use equilibrate::admm::{admm_classical, admm_equilibrate, AdmmConfig, AdmmState};
use equilibrate::instances::Instance;
use equilibrate::metric::DEFAULT_EPS_FLOOR;
use equilibrate::metric_select::{estimate_reference, optimal_metric, reference_pair};
use equilibrate::DiagonalMetric;

/// Step sizes tried by the classical solver when no grid is supplied.
pub const DEFAULT_GAMMA_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

#[derive(Debug, Clone)]
pub struct CompareRow {
    pub instance: String,
    pub parametrization: String,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Runs every parametrization on every instance; rows arrive sorted by
/// instance id, classical grid first.
pub fn run_compare(
    instances: &[Instance],
    gamma_grid: &[f64],
    tol: f64,
    k_max: usize,
) -> anyhow::Result<Vec<CompareRow>> {
    let mut rows = Vec::new();
    let cfg = AdmmConfig { k_max, tol, record_trace: false };
    let mut sorted: Vec<&Instance> = instances.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));

    for inst in sorted {
        let spec = &inst.spec;
        let init = AdmmState::zero(spec.n(), spec.m(), spec.p());

        for &gamma in gamma_grid {
            let run = admm_classical(spec, gamma, &init, &cfg)?;
            rows.push(CompareRow {
                instance: inst.id.clone(),
                parametrization: format!("classical(gamma={gamma})"),
                iterations: run.solution.iterations,
                residual: run.solution.residual,
                converged: run.solution.converged,
            });
        }

        let identity = DiagonalMetric::identity(spec.p());
        let run = admm_equilibrate(spec, &identity, &init, &cfg)?;
        rows.push(CompareRow {
            instance: inst.id.clone(),
            parametrization: "equilibrate(identity)".into(),
            iterations: run.solution.iterations,
            residual: run.solution.residual,
            converged: run.solution.converged,
        });

        let reference = estimate_reference(spec)?;
        let (image, dual) = reference_pair(spec, &reference)?;
        let choice = optimal_metric(&image, &dual, DEFAULT_EPS_FLOOR)?;
        let run = admm_equilibrate(spec, &choice.metric, &init, &cfg)?;
        rows.push(CompareRow {
            instance: inst.id.clone(),
            parametrization: "equilibrate(optimal)".into(),
            iterations: run.solution.iterations,
            residual: run.solution.residual,
            converged: run.solution.converged,
        });
    }
    Ok(rows)
}

/// Per-instance iteration counts: (best classical, equilibrate optimal).
pub fn iteration_summary(rows: &[CompareRow]) -> Vec<(String, usize, usize)> {
    let mut by_instance: Vec<(String, usize, usize)> = Vec::new();
    for row in rows {
        if by_instance.last().map(|(id, _, _)| id != &row.instance).unwrap_or(true) {
            by_instance.push((row.instance.clone(), usize::MAX, usize::MAX));
        }
        let entry = by_instance.last_mut().unwrap();
        if row.parametrization.starts_with("classical") && row.converged {
            entry.1 = entry.1.min(row.iterations);
        }
        if row.parametrization == "equilibrate(optimal)" && row.converged {
            entry.2 = row.iterations;
        }
    }
    by_instance
}
