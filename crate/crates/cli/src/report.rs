//! Report files: solution records, comparison tables, and verification matrices.
//! All writers are deterministic for a fixed input.

use equilibrate::metric_select::MetricChoice;
use equilibrate::SolutionPair;
use serde::{Deserialize, Serialize};

use crate::compare::CompareRow;
use crate::verify::VerifyRow;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub parametrization: String,
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    pub objective: f64,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric_m: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric_provenance: Option<Vec<String>>,
}

impl SolutionFile {
    pub fn new(tag: impl Into<String>, sol: &SolutionPair) -> SolutionFile {
        SolutionFile {
            parametrization: tag.into(),
            x: sol.x.iter().copied().collect(),
            lambda: sol.lambda.iter().copied().collect(),
            objective: sol.objective,
            residual: sol.residual,
            converged: sol.converged,
            iterations: sol.iterations,
            metric_m: None,
            metric_provenance: None,
        }
    }

    pub fn with_metric(mut self, choice: &MetricChoice) -> SolutionFile {
        self.metric_m = Some(choice.metric.m().iter().copied().collect());
        self.metric_provenance =
            Some(choice.provenance.iter().map(|p| p.tag().to_string()).collect());
        self
    }
}

/// Record of a one-shot run next to its reference solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OneShotFile {
    pub reference: SolutionFile,
    pub one_shot: SolutionFile,
    /// `||x_one_shot - x_reference||`.
    pub deviation: f64,
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("instance,parametrization,iterations,residual,converged\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.instance, r.parametrization, r.iterations, r.residual, r.converged
        ));
    }
    out
}

pub fn verify_csv(rows: &[VerifyRow]) -> String {
    let mut out = String::from("check,instances,max_deviation,tolerance,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.check, r.instances, r.max_deviation, r.tolerance, r.pass
        ));
    }
    out
}
