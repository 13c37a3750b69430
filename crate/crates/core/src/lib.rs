//! Proximal operators and ADMM with a domain-side ("equilibrate")
//! parametrization, plus the closed-form optimal diagonal metric for
//! l1-regularized quadratic problems.
//!
//! The crate is organized around six pieces:
//!
//! * [`problem`] — problem data (`f(x) + alpha ||F x||_1`, split constraint
//!   `Ax - Bz = c`), validation, and solution records;
//! * [`metric`] — positive diagonal metrics `M` with their decomposition
//!   `S = sqrt(M)` and clamp bookkeeping for limit cases;
//! * [`prox`] — classical, classical-metric, and domain-side proximal
//!   operators for quadratics, l1, tilts, and their conjugates, with the
//!   decomposition identity `v = Prox_{f S^{-1}}(v) + Prox_{f* S*}(v)`;
//! * [`fixedpoint`] — averaged-map iteration, trace recording, the
//!   `theta/((k+1)(1-theta))` rate bound, and parallel-scaling diagnostics;
//! * [`admm`] — the scalar-step and metric solvers, their shared 1/2-averaged
//!   fixed-point map, self-duality checks, and unified primal-dual forms;
//! * [`metric_select`] — the selection objective, the optimal metric
//!   `m_i = |x̃*_i|/|λ*_i|`, the one-shot solve, and optimality residuals.
//!
//! # Example
//!
//! ```
//! use equilibrate::{DMatrix, DVector, ProblemSpec};
//! use equilibrate::metric_select::{estimate_reference, one_shot_solve, optimal_metric, reference_pair};
//!
//! // minimize (1/2)(x - 3)^2 + |x|: the solution is x* = 2, lambda* = 1.
//! let spec = ProblemSpec::lasso(
//!     DMatrix::from_row_slice(1, 1, &[1.0]),
//!     DVector::from_vec(vec![-3.0]),
//!     1.0,
//!     DMatrix::identity(1, 1),
//! );
//!
//! let reference = estimate_reference(&spec)?;
//! let (image, dual) = reference_pair(&spec, &reference)?;
//! let choice = optimal_metric(&image, &dual, 1e-8)?;
//! let solution = one_shot_solve(&spec, &choice.metric)?;
//! assert!((solution.x[0] - 2.0).abs() < 1e-9);
//! assert!((solution.lambda[0] - 1.0).abs() < 1e-9);
//! # Ok::<(), equilibrate::Error>(())
//! ```

// Guards of the form `!(x > 0.0)` deliberately reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admm;
pub mod error;
pub mod fixedpoint;
pub mod instances;
pub mod linalg;
pub mod metric;
pub mod metric_select;
pub mod problem;
pub mod prox;

pub use error::{Error, Result};
pub use linalg::LinOp;
pub use metric::{metric_from_vector, DiagonalMetric, Parametrization};
pub use problem::{validate_problem, ProblemSpec, SolutionPair, ValidationReport};
pub use prox::{ProxKind, ProxSpec};

pub use nalgebra::{DMatrix, DVector};
