//! Problem data: composite convex programs of the form
//!
//! ```text
//! minimize  f(x) + alpha ||F x||_1,       f(x) = (1/2) x' Q x + q' x
//! ```
//!
//! together with the split constraint form `A x - B z = c` used by the
//! alternating-direction solvers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance for the componentwise symmetry check on `Q`.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lower bound on eigenvalues of `Q` (positive semidefiniteness up to rounding).
pub const PSD_TOL: f64 = -1e-10;

/// Data for one problem instance. Immutable after construction; matrices are dense.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    /// Hessian of the smooth term, symmetric positive semidefinite, n x n.
    pub q_mat: DMatrix<f64>,
    /// Linear term of the smooth term, length n.
    pub q_vec: DVector<f64>,
    /// l1 regularization weight, strictly positive.
    pub alpha: f64,
    /// l1 composition matrix, p x n, full column rank (identity allowed).
    pub f_mat: DMatrix<f64>,
    /// Constraint matrix on x, p x n, full column rank.
    pub a_mat: DMatrix<f64>,
    /// Constraint matrix on z, p x m, full column rank.
    pub b_mat: DMatrix<f64>,
    /// Constraint offset, length p.
    pub c_vec: DVector<f64>,
}

impl ProblemSpec {
    /// l1-composite problem `f(x) + alpha ||F x||_1`, split as `F x = z`.
    pub fn lasso(q_mat: DMatrix<f64>, q_vec: DVector<f64>, alpha: f64, f_mat: DMatrix<f64>) -> Self {
        let p = f_mat.nrows();
        ProblemSpec {
            q_mat,
            q_vec,
            alpha,
            a_mat: f_mat.clone(),
            f_mat,
            b_mat: DMatrix::identity(p, p),
            c_vec: DVector::zeros(p),
        }
    }

    /// General split form `f(x) + alpha ||z||_1` subject to `A x - B z = c`.
    pub fn general(
        q_mat: DMatrix<f64>,
        q_vec: DVector<f64>,
        alpha: f64,
        f_mat: DMatrix<f64>,
        a_mat: DMatrix<f64>,
        b_mat: DMatrix<f64>,
        c_vec: DVector<f64>,
    ) -> Self {
        ProblemSpec { q_mat, q_vec, alpha, f_mat, a_mat, b_mat, c_vec }
    }

    pub fn n(&self) -> usize {
        self.q_vec.len()
    }

    /// Constraint dimension (rows of `A`).
    pub fn p(&self) -> usize {
        self.a_mat.nrows()
    }

    /// Splitting-variable dimension (columns of `B`).
    pub fn m(&self) -> usize {
        self.b_mat.ncols()
    }

    /// Smooth term value.
    pub fn f_value(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.q_mat * x)) + self.q_vec.dot(x)
    }

    /// Composite objective `f(x) + alpha ||F x||_1`.
    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        self.f_value(x) + self.alpha * (&self.f_mat * x).iter().map(|v| v.abs()).sum::<f64>()
    }

    /// Gradient of the smooth term.
    pub fn grad_f(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.q_mat * x + &self.q_vec
    }

    pub fn validate(&self) -> ValidationReport {
        validate_problem(self)
    }
}

/// A single invariant violation, naming the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

/// Outcome of [`validate_problem`]; passes iff no violations were recorded.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: &'static str, message: impl Into<String>) {
        self.violations.push(Violation { field, message: message.into() });
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| format!("{}: {}", v.field, v.message))
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidProblem(self.summary()))
        }
    }
}

/// Checks every `ProblemSpec` invariant and reports all violations found.
pub fn validate_problem(spec: &ProblemSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = spec.n();

    if spec.q_mat.nrows() != n || spec.q_mat.ncols() != n {
        report.push(
            "Q",
            format!("expected {n}x{n} to match q of length {n}, got {}x{}", spec.q_mat.nrows(), spec.q_mat.ncols()),
        );
        return report;
    }

    if !linalg::is_symmetric(&spec.q_mat, SYMMETRY_TOL) {
        report.push("Q", "not symmetric to within 1e-12 componentwise");
    } else {
        let min_eig = linalg::min_eigenvalue(&spec.q_mat);
        if min_eig < PSD_TOL {
            report.push("Q", format!("smallest eigenvalue {min_eig:.3e} below -1e-10"));
        }
    }

    if !(spec.alpha > 0.0) {
        report.push("alpha", format!("must be strictly positive, got {}", spec.alpha));
    }

    if spec.f_mat.ncols() != n {
        report.push("F", format!("has {} columns, expected {n}", spec.f_mat.ncols()));
    } else if !linalg::has_full_column_rank(&spec.f_mat) {
        report.push("F", "not full column rank");
    }

    if spec.a_mat.ncols() != n {
        report.push("A", format!("has {} columns, expected {n}", spec.a_mat.ncols()));
    } else if !linalg::has_full_column_rank(&spec.a_mat) {
        report.push("A", "not full column rank");
    }

    if !linalg::has_full_column_rank(&spec.b_mat) {
        report.push("B", "not full column rank");
    }

    let p = spec.a_mat.nrows();
    if spec.b_mat.nrows() != p {
        report.push(
            "B",
            format!("has {} rows, expected {} to match A", spec.b_mat.nrows(), p),
        );
    }
    if spec.c_vec.len() != p {
        report.push("c", format!("has length {}, expected {}", spec.c_vec.len(), p));
    }

    report
}

/// A primal/dual solution with its reported quality.
#[derive(Debug, Clone)]
pub struct SolutionPair {
    pub x: DVector<f64>,
    pub lambda: DVector<f64>,
    pub objective: f64,
    /// Optimality residual; see `metric_select::optimality_residual`.
    pub residual: f64,
    /// False whenever `residual` exceeded the declared tolerance.
    pub converged: bool,
    pub iterations: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_dim_lasso() -> ProblemSpec {
        ProblemSpec::lasso(
            DMatrix::from_row_slice(1, 1, &[1.0]),
            DVector::from_vec(vec![-3.0]),
            1.0,
            DMatrix::identity(1, 1),
        )
    }

    #[test]
    fn well_posed_one_dim_lasso_is_valid() {
        assert!(validate_problem(&one_dim_lasso()).is_valid());
    }

    #[test]
    fn asymmetric_q_is_flagged() {
        let mut spec = ProblemSpec::lasso(
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]),
            DVector::zeros(2),
            1.0,
            DMatrix::identity(2, 2),
        );
        spec.alpha = 1.0;
        let report = validate_problem(&spec);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.field == "Q"));
    }

    #[test]
    fn rank_deficient_f_is_flagged() {
        let spec = ProblemSpec::lasso(
            DMatrix::identity(2, 2),
            DVector::zeros(2),
            1.0,
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]),
        );
        let report = validate_problem(&spec);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.field == "F"));
    }

    #[test]
    fn dimension_mismatch_names_both_dimensions() {
        let spec = ProblemSpec::general(
            DMatrix::identity(2, 2),
            DVector::zeros(2),
            1.0,
            DMatrix::identity(2, 2),
            DMatrix::identity(2, 2),
            DMatrix::identity(2, 2),
            DVector::zeros(3),
        );
        let report = validate_problem(&spec);
        assert!(!report.is_valid());
        let c_violation = report.violations.iter().find(|v| v.field == "c").unwrap();
        assert!(c_violation.message.contains('3') && c_violation.message.contains('2'));
    }
}
