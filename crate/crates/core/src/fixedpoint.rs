//! Generic fixed-point iteration with trace recording and the averaged-map
//! rate diagnostics: for a theta-averaged map the step norms obey
//!
//! ```text
//! ||z^{k+1} - z^k||^2 <= theta / ((k+1)(1 - theta)) * dist^2(z^0, Fix F)
//! ```
//!
//! and both step norms and distances to any fixed point are nonincreasing.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Relative slack allowed on the monotone quantities.
pub const MONOTONE_SLACK: f64 = 1e-9;
/// Relative growth that counts as an increasing step when detecting divergence.
const DIVERGENCE_GROWTH: f64 = 1e-6;
/// Consecutive increasing steps before the map is declared non-averaged.
const DIVERGENCE_STREAK: usize = 3;

/// Recorded iterate sequence of one fixed-point run.
#[derive(Debug, Clone)]
pub struct Trace {
    /// Iterates `z^0, z^1, ...`.
    pub points: Vec<DVector<f64>>,
    /// `||z^{k+1} - z^k||` for consecutive points.
    pub step_norms: Vec<f64>,
    /// `||z^k - z*||` when a reference fixed point was supplied.
    pub fix_distances: Option<Vec<f64>>,
    /// Declared averagedness parameter of the map that produced the trace.
    pub theta: f64,
}

impl Trace {
    pub fn from_points(points: Vec<DVector<f64>>, theta: f64, reference: Option<&DVector<f64>>) -> Trace {
        let step_norms = points.windows(2).map(|w| (&w[1] - &w[0]).norm()).collect();
        let fix_distances = reference.map(|r| points.iter().map(|p| (p - r).norm()).collect());
        Trace { points, step_norms, fix_distances, theta }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&DVector<f64>> {
        self.points.last()
    }

    /// Distances of every iterate to a reference point.
    pub fn distances_to(&self, reference: &DVector<f64>) -> Vec<f64> {
        self.points.iter().map(|p| (p - reference).norm()).collect()
    }

    /// Attaches (or replaces) the fixed-point reference.
    pub fn with_reference(mut self, reference: &DVector<f64>) -> Trace {
        self.fix_distances = Some(self.distances_to(reference));
        self
    }

    /// The first `len` points as a trace of their own. Iterations that reach
    /// an exact fixed point stop early, so paired traces may need trimming to
    /// a common length before comparison.
    pub fn truncated(&self, len: usize) -> Trace {
        let len = len.min(self.points.len());
        Trace {
            points: self.points[..len].to_vec(),
            step_norms: self.step_norms[..len.saturating_sub(1)].to_vec(),
            fix_distances: self.fix_distances.as_ref().map(|d| d[..len].to_vec()),
            theta: self.theta,
        }
    }

    pub fn step_norms_nonincreasing(&self) -> bool {
        nonincreasing(&self.step_norms)
    }

    pub fn fix_distances_nonincreasing(&self) -> bool {
        self.fix_distances.as_deref().map(nonincreasing).unwrap_or(true)
    }

    /// CSV rows `k,step_norm,fix_distance,bound`, one per recorded step.
    pub fn to_csv(&self, dist0_sq: Option<f64>) -> String {
        let mut out = String::from("k,step_norm,fix_distance,bound\n");
        for (k, step) in self.step_norms.iter().enumerate() {
            let dist = self
                .fix_distances
                .as_ref()
                .and_then(|d| d.get(k))
                .map(|v| v.to_string())
                .unwrap_or_default();
            let bound = dist0_sq
                .and_then(|d0| rate_bound(self.theta, k, d0).ok())
                .map(|v| v.to_string())
                .unwrap_or_default();
            out.push_str(&format!("{k},{step},{dist},{bound}\n"));
        }
        out
    }
}

fn nonincreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK * (1.0 + w[0]))
}

/// Runs `z^{k+1} = map(z^k)` until the step norm drops to `tol` or `k_max`
/// sweeps have been taken, recording the full trace.
///
/// The map must be declared theta-averaged with `theta` in (0,1). If the step
/// norms grow for three consecutive iterations the map is rejected as
/// non-averaged.
pub fn iterate<F>(
    map: F,
    z0: &DVector<f64>,
    k_max: usize,
    tol: f64,
    theta: f64,
    reference: Option<&DVector<f64>>,
) -> Result<Trace>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let mut points = vec![z0.clone()];
    let mut streak = 0usize;
    let mut prev_step = f64::INFINITY;
    for k in 0..k_max {
        let next = map(points.last().unwrap());
        let step = (&next - points.last().unwrap()).norm();
        points.push(next);
        if step > prev_step * (1.0 + DIVERGENCE_GROWTH) {
            streak += 1;
            if streak >= DIVERGENCE_STREAK {
                return Err(Error::NonAveragedMap { iteration: k + 1, step_norm: step });
            }
        } else {
            streak = 0;
        }
        prev_step = step;
        if step <= tol {
            break;
        }
    }
    Ok(Trace::from_points(points, theta, reference))
}

/// The averaged-map bound `theta * dist0_sq / ((k+1)(1-theta))`.
pub fn rate_bound(theta: f64, k: usize, dist0_sq: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(theta * dist0_sq / ((k as f64 + 1.0) * (1.0 - theta)))
}

/// Outcome of [`verify_rate`].
#[derive(Debug, Clone)]
pub struct RateReport {
    pub holds: bool,
    /// Largest observed `step^2 / bound` ratio (the tightest point of the bound).
    pub tightest_ratio: f64,
    pub first_violation: Option<usize>,
}

/// Checks `step_norms[k]^2 <= bound(theta, k, dist0_sq) * (1 + 1e-9)` for all k.
pub fn verify_rate(trace: &Trace, dist0_sq: f64) -> Result<RateReport> {
    let mut tightest = 0.0f64;
    let mut first_violation = None;
    for (k, step) in trace.step_norms.iter().enumerate() {
        let bound = rate_bound(trace.theta, k, dist0_sq)?;
        let lhs = step * step;
        if bound > 0.0 {
            tightest = tightest.max(lhs / bound);
        } else if lhs > 0.0 {
            tightest = f64::INFINITY;
        }
        if lhs > bound * (1.0 + 1e-9) + f64::MIN_POSITIVE && first_violation.is_none() {
            first_violation = Some(k);
        }
    }
    Ok(RateReport { holds: first_violation.is_none(), tightest_ratio: tightest, first_violation })
}

/// Outcome of [`check_parallel_scaling`].
#[derive(Debug, Clone)]
pub struct ScalingReport {
    /// `max_k || a_k / alpha - alpha * b_k ||`.
    pub max_deviation: f64,
    /// Magnitude of the compared sequences, for the relative pass threshold.
    pub scale: f64,
    pub passes: bool,
}

/// Compares two traces for the parallel-sequence relation
/// `alpha^{-1} a^k = alpha b^k` for all k; passes iff the worst deviation is
/// at most `1e-8 * (1 + scale)`.
pub fn check_parallel_scaling(a: &Trace, b: &Trace, alpha: f64) -> Result<ScalingReport> {
    if alpha == 0.0 || alpha.is_nan() {
        return Err(Error::Zero { name: "alpha" });
    }
    if a.points.len() != b.points.len() {
        return Err(Error::TraceLengthMismatch { left: a.points.len(), right: b.points.len() });
    }
    let mut max_dev = 0.0f64;
    let mut scale = 0.0f64;
    for (pa, pb) in a.points.iter().zip(&b.points) {
        let left = pa / alpha;
        let right = pb * alpha;
        max_dev = max_dev.max((&left - &right).norm());
        scale = scale.max(left.norm()).max(right.norm());
    }
    Ok(ScalingReport { max_deviation: max_dev, scale, passes: max_dev <= 1e-8 * (1.0 + scale) })
}
