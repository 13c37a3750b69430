//! Small dense linear-operator toolkit shared by the prox and solver modules.
//!
//! Everything here is desk scale (n, p <= 500), stored dense, f64 only.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance for rank-revealing checks, against the largest singular value.
pub const RANK_TOL: f64 = 1e-10;

/// A concrete linear map used as a prox parameter or constraint factor.
///
/// `Scalar` and `Diag` keep enough structure for the closed-form l1 paths;
/// anything else is `Dense`.
#[derive(Debug, Clone)]
pub enum LinOp {
    Scalar { value: f64, dim: usize },
    Diag(DVector<f64>),
    Dense(DMatrix<f64>),
}

impl LinOp {
    pub fn identity(dim: usize) -> Self {
        LinOp::Scalar { value: 1.0, dim }
    }

    pub fn scalar(value: f64, dim: usize) -> Self {
        LinOp::Scalar { value, dim }
    }

    pub fn diag(d: DVector<f64>) -> Self {
        LinOp::Diag(d)
    }

    pub fn dense(m: DMatrix<f64>) -> Self {
        LinOp::Dense(m)
    }

    /// Wraps a matrix, keeping diagonal structure when it is exact.
    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        match exact_diagonal(&m) {
            Some(d) => LinOp::Diag(d),
            None => LinOp::Dense(m),
        }
    }

    pub fn nrows(&self) -> usize {
        match self {
            LinOp::Scalar { dim, .. } => *dim,
            LinOp::Diag(d) => d.len(),
            LinOp::Dense(m) => m.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            LinOp::Scalar { dim, .. } => *dim,
            LinOp::Diag(d) => d.len(),
            LinOp::Dense(m) => m.ncols(),
        }
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            LinOp::Scalar { value, .. } => v * *value,
            LinOp::Diag(d) => v.component_mul(d),
            LinOp::Dense(m) => m * v,
        }
    }

    /// Applies the adjoint (transpose) map.
    pub fn apply_adjoint(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            LinOp::Scalar { value, .. } => v * *value,
            LinOp::Diag(d) => v.component_mul(d),
            LinOp::Dense(m) => m.transpose() * v,
        }
    }

    pub fn adjoint(&self) -> LinOp {
        match self {
            LinOp::Scalar { .. } | LinOp::Diag(_) => self.clone(),
            LinOp::Dense(m) => LinOp::Dense(m.transpose()),
        }
    }

    /// Inverse as a materialized operator. Square full-rank maps only.
    pub fn inverse(&self) -> Result<LinOp> {
        match self {
            LinOp::Scalar { value, dim } => {
                if *value == 0.0 {
                    return Err(Error::SingularSystem("scalar map is zero".into()));
                }
                Ok(LinOp::Scalar { value: 1.0 / value, dim: *dim })
            }
            LinOp::Diag(d) => {
                if d.iter().any(|&x| x == 0.0) {
                    return Err(Error::SingularSystem("diagonal map has a zero entry".into()));
                }
                Ok(LinOp::Diag(d.map(|x| 1.0 / x)))
            }
            LinOp::Dense(m) => {
                if m.nrows() != m.ncols() {
                    return Err(Error::SingularSystem("cannot invert a non-square map".into()));
                }
                m.clone()
                    .try_inverse()
                    .map(LinOp::Dense)
                    .ok_or_else(|| Error::SingularSystem("map is not invertible".into()))
            }
        }
    }

    pub fn negate(&self) -> LinOp {
        match self {
            LinOp::Scalar { value, dim } => LinOp::Scalar { value: -value, dim: *dim },
            LinOp::Diag(d) => LinOp::Diag(-d),
            LinOp::Dense(m) => LinOp::Dense(-m),
        }
    }

    /// Composition `self ∘ rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &LinOp) -> LinOp {
        match (self, rhs) {
            (LinOp::Scalar { value: a, .. }, LinOp::Scalar { value: b, dim }) => {
                LinOp::Scalar { value: a * b, dim: *dim }
            }
            (LinOp::Scalar { value, .. }, LinOp::Diag(d)) | (LinOp::Diag(d), LinOp::Scalar { value, .. }) => {
                LinOp::Diag(d * *value)
            }
            (LinOp::Diag(a), LinOp::Diag(b)) => LinOp::Diag(a.component_mul(b)),
            _ => LinOp::Dense(self.to_dense() * rhs.to_dense()),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            LinOp::Scalar { value, dim } => DMatrix::from_diagonal_element(*dim, *dim, *value),
            LinOp::Diag(d) => DMatrix::from_diagonal(d),
            LinOp::Dense(m) => m.clone(),
        }
    }

    /// Diagonal of the map when it has diagonal structure.
    pub fn as_diagonal(&self) -> Option<DVector<f64>> {
        match self {
            LinOp::Scalar { value, dim } => Some(DVector::from_element(*dim, *value)),
            LinOp::Diag(d) => Some(d.clone()),
            LinOp::Dense(_) => None,
        }
    }

    pub fn has_full_column_rank(&self) -> bool {
        match self {
            LinOp::Scalar { value, .. } => *value != 0.0,
            LinOp::Diag(d) => {
                let max = d.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
                max > 0.0 && d.iter().all(|&x| x.abs() > RANK_TOL * max)
            }
            LinOp::Dense(m) => has_full_column_rank(m),
        }
    }
}

/// Rank-revealing full-column-rank test via SVD, tolerance relative to sigma_max.
pub fn has_full_column_rank(m: &DMatrix<f64>) -> bool {
    if m.nrows() < m.ncols() {
        return false;
    }
    let svals = m.clone().singular_values();
    let max = svals.iter().fold(0.0f64, |a, &s| a.max(s));
    max > 0.0 && svals.iter().filter(|&&s| s > RANK_TOL * max).count() == m.ncols()
}

/// Componentwise symmetry check: |Q_ij - Q_ji| <= tol * max(1, |Q_ij|, |Q_ji|).
pub fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            let a = m[(i, j)];
            let b = m[(j, i)];
            if (a - b).abs() > tol * 1.0f64.max(a.abs()).max(b.abs()) {
                return false;
            }
        }
    }
    true
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &e| a.min(e))
}

/// Solves the symmetric positive definite system `h x = rhs` via Cholesky,
/// falling back to LU when the factorization is borderline.
pub fn solve_spd(h: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    if let Some(chol) = h.clone().cholesky() {
        return Ok(chol.solve(rhs));
    }
    h.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::SingularSystem("normal-equations matrix".into()))
}

/// Checks that a matrix is structurally diagonal (exact zeros off the diagonal).
pub fn exact_diagonal(m: &DMatrix<f64>) -> Option<DVector<f64>> {
    if m.nrows() != m.ncols() {
        return None;
    }
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)] != 0.0 {
                return None;
            }
        }
    }
    Some(m.diagonal())
}
