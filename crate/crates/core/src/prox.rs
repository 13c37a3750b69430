//! Proximal-operator algebra.
//!
//! Two parametrization styles are supported for the same underlying functions:
//!
//! * classical, range-side: `argmin (1/gamma) f(z) + (1/2)||z - v||^2` and its
//!   metric variant `argmin f(z) + (1/2)||z - v||^2_M`;
//! * domain-side ("equilibrate"): `Prox_{f P^{-1}}(v) = P argmin f(z) + (1/2)||P z - v||^2`,
//!   where `P` is a full-column-rank linear map (a scalar `rho != 0` included).
//!
//! Closed forms are registered for quadratics, scaled l1 norms, linear tilts
//! and conjugates of these. When a conjugate has no direct form it is evaluated
//! through the decomposition identity `v = Prox_{f P^{-1}}(v) + Prox_{f* P*}(v)`;
//! when both routes exist they are cross-checked in debug builds.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{solve_spd, LinOp};
use crate::metric::DiagonalMetric;

/// A proximable function.
#[derive(Debug, Clone)]
pub enum ProxKind {
    /// `f(x) = (1/2) x' Q x + q' x` with `Q` symmetric PSD.
    Quadratic { q_mat: DMatrix<f64>, q_vec: DVector<f64> },
    /// `f(x) = alpha ||x||_1`.
    L1 { alpha: f64 },
    /// `f(x) = base(x) - <tilt, x>`.
    LinearTilt { base: Box<ProxSpec>, tilt: DVector<f64> },
    /// The Fenchel conjugate of `base`.
    Conjugate { base: Box<ProxSpec> },
}

#[derive(Debug, Clone)]
pub struct ProxSpec {
    pub kind: ProxKind,
}

impl ProxSpec {
    pub fn quadratic(q_mat: DMatrix<f64>, q_vec: DVector<f64>) -> Self {
        ProxSpec { kind: ProxKind::Quadratic { q_mat, q_vec } }
    }

    pub fn l1(alpha: f64) -> Self {
        ProxSpec { kind: ProxKind::L1 { alpha } }
    }

    pub fn linear_tilt(base: ProxSpec, tilt: DVector<f64>) -> Self {
        ProxSpec { kind: ProxKind::LinearTilt { base: Box::new(base), tilt } }
    }

    pub fn conjugate(base: ProxSpec) -> Self {
        ProxSpec { kind: ProxKind::Conjugate { base: Box::new(base) } }
    }

    /// Dimension of the argument, when the function pins one down.
    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            ProxKind::Quadratic { q_vec, .. } => Some(q_vec.len()),
            ProxKind::L1 { .. } => None,
            ProxKind::LinearTilt { base, tilt } => base.dim().or(Some(tilt.len())),
            ProxKind::Conjugate { base } => base.dim(),
        }
    }

    /// Function value; `+inf` outside the domain (conjugate of l1 is a box indicator).
    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        match &self.kind {
            ProxKind::Quadratic { q_mat, q_vec } => 0.5 * x.dot(&(q_mat * x)) + q_vec.dot(x),
            ProxKind::L1 { alpha } => alpha * x.iter().map(|v| v.abs()).sum::<f64>(),
            ProxKind::LinearTilt { base, tilt } => base.eval(x) - tilt.dot(x),
            ProxKind::Conjugate { base } => match &base.kind {
                ProxKind::Quadratic { q_mat, q_vec } => {
                    let shifted = x - q_vec;
                    match q_mat.clone().lu().solve(&shifted) {
                        Some(sol) => 0.5 * shifted.dot(&sol),
                        None => f64::INFINITY,
                    }
                }
                ProxKind::L1 { alpha } => {
                    let max = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                    if max <= alpha * (1.0 + 1e-9) + 1e-12 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                }
                // Biconjugate of a closed convex function is the function itself.
                ProxKind::Conjugate { base: inner } => inner.eval(x),
                ProxKind::LinearTilt { base: b, tilt } => ProxSpec::conjugate((**b).clone()).eval(&(x + tilt)),
            },
        }
    }

    /// `factor * f` for `factor > 0`, staying inside the registered kinds.
    pub fn scale(&self, factor: f64) -> Result<ProxSpec> {
        if !(factor > 0.0) {
            return Err(Error::NotPositive { name: "scale factor", value: factor });
        }
        Ok(match &self.kind {
            ProxKind::Quadratic { q_mat, q_vec } => ProxSpec::quadratic(q_mat * factor, q_vec * factor),
            ProxKind::L1 { alpha } => ProxSpec::l1(alpha * factor),
            ProxKind::LinearTilt { base, tilt } => ProxSpec::linear_tilt(base.scale(factor)?, tilt * factor),
            // factor * b*(y) = (factor * b(./factor))*(y), the epigraphical scaling of b.
            ProxKind::Conjugate { base } => ProxSpec::conjugate(base.epi_scale(factor)?),
        })
    }

    /// Epigraphical scaling `factor * f(. / factor)` for `factor > 0`.
    pub fn epi_scale(&self, factor: f64) -> Result<ProxSpec> {
        if !(factor > 0.0) {
            return Err(Error::NotPositive { name: "scale factor", value: factor });
        }
        Ok(match &self.kind {
            ProxKind::Quadratic { q_mat, q_vec } => ProxSpec::quadratic(q_mat / factor, q_vec.clone()),
            ProxKind::L1 { alpha } => ProxSpec::l1(*alpha),
            ProxKind::LinearTilt { base, tilt } => ProxSpec::linear_tilt(base.epi_scale(factor)?, tilt.clone()),
            ProxKind::Conjugate { base } => ProxSpec::conjugate(base.scale(factor)?),
        })
    }

    /// Checks the kind invariants: quadratic blocks must be symmetric PSD.
    pub fn validate(&self) -> crate::error::Result<()> {
        match &self.kind {
            ProxKind::Quadratic { q_mat, q_vec } => {
                if q_mat.nrows() != q_mat.ncols() || q_mat.nrows() != q_vec.len() {
                    return Err(Error::DimensionMismatch {
                        left: "Q",
                        left_rows: q_mat.nrows(),
                        left_cols: q_mat.ncols(),
                        right: "q",
                        right_rows: q_vec.len(),
                        right_cols: 1,
                    });
                }
                if !crate::linalg::is_symmetric(q_mat, crate::problem::SYMMETRY_TOL) {
                    return Err(Error::InvalidProblem("quadratic prox needs a symmetric Q".into()));
                }
                if crate::linalg::min_eigenvalue(q_mat) < crate::problem::PSD_TOL {
                    return Err(Error::InvalidProblem(
                        "quadratic prox needs a positive semidefinite Q".into(),
                    ));
                }
                Ok(())
            }
            ProxKind::L1 { alpha } => {
                if !(*alpha > 0.0) {
                    return Err(Error::NotPositive { name: "alpha", value: *alpha });
                }
                Ok(())
            }
            ProxKind::LinearTilt { base, .. } | ProxKind::Conjugate { base } => base.validate(),
        }
    }

    /// `f ∘ (-I)`.
    pub fn compose_neg(&self) -> ProxSpec {
        match &self.kind {
            ProxKind::Quadratic { q_mat, q_vec } => ProxSpec::quadratic(q_mat.clone(), -q_vec),
            ProxKind::L1 { alpha } => ProxSpec::l1(*alpha),
            ProxKind::LinearTilt { base, tilt } => ProxSpec::linear_tilt(base.compose_neg(), -tilt),
            ProxKind::Conjugate { base } => ProxSpec::conjugate(base.compose_neg()),
        }
    }
}

/// Unit-level soft-thresholding `T(u) = sgn(u) ⊙ max(|u| - 1, 0)`.
pub fn soft_threshold(u: &DVector<f64>) -> DVector<f64> {
    u.map(|ui| ui.signum() * (ui.abs() - 1.0).max(0.0))
}

/// Soft-thresholding at a componentwise level `kappa >= 0`.
pub fn soft_threshold_at(u: &DVector<f64>, kappa: &DVector<f64>) -> DVector<f64> {
    u.zip_map(kappa, |ui, ki| ui.signum() * (ui.abs() - ki).max(0.0))
}

/// Metric prox of the unit l1 norm: `argmin ||x||_1 + (1/2)||x - v||^2_M = m ⊙ T(v ⊘ m)`.
pub fn metric_prox_l1(v: &DVector<f64>, metric: &DiagonalMetric) -> DVector<f64> {
    metric.apply_inv(&soft_threshold(&metric.apply(v)))
}

/// Classical prox `argmin (1/gamma) f(z) + (1/2)||z - v||^2`.
pub fn prox_classical(f: &ProxSpec, gamma: f64, v: &DVector<f64>) -> Result<DVector<f64>> {
    if !(gamma > 0.0) {
        return Err(Error::NotPositive { name: "gamma", value: gamma });
    }
    match &f.kind {
        ProxKind::Quadratic { q_mat, q_vec } => {
            check_dim(q_vec.len(), v.len(), "quadratic prox input")?;
            let h = q_mat + DMatrix::from_diagonal_element(v.len(), v.len(), gamma);
            solve_spd(&h, &(v * gamma - q_vec))
        }
        ProxKind::L1 { alpha } => {
            Ok(soft_threshold_at(v, &DVector::from_element(v.len(), alpha / gamma)))
        }
        ProxKind::LinearTilt { base, tilt } => prox_classical(base, gamma, &(v + tilt / gamma)),
        ProxKind::Conjugate { base } => match &base.kind {
            ProxKind::Quadratic { q_mat, q_vec } => {
                // f* = 1/2 (z-q)' Q^{-1} (z-q); stationarity gives
                // (Q^{-1} + g I) z = g v + Q^{-1} q  <=>  (I + g Q) z = g Q v + q.
                let n = v.len();
                check_dim(q_vec.len(), n, "quadratic conjugate prox input")?;
                let lhs = DMatrix::identity(n, n) + q_mat * gamma;
                let rhs = q_mat * v * gamma + q_vec;
                let out = lhs
                    .lu()
                    .solve(&rhs)
                    .ok_or_else(|| Error::SingularSystem("conjugate quadratic prox".into()))?;
                debug_cross_check(&out, || {
                    Ok(v - prox_classical(base, 1.0 / gamma, &(v * gamma))? / gamma)
                });
                Ok(out)
            }
            // Projection onto the box [-alpha, alpha]; step-size free.
            ProxKind::L1 { alpha } => {
                let out = v.map(|vi| vi.clamp(-alpha, *alpha));
                debug_cross_check(&out, || {
                    Ok(v - prox_classical(base, 1.0 / gamma, &(v * gamma))? / gamma)
                });
                Ok(out)
            }
            ProxKind::LinearTilt { base: b, tilt } => {
                // (b - <t,.>)*(y) = b*(y + t)
                let shifted = prox_classical(&ProxSpec::conjugate((**b).clone()), gamma, &(v + tilt))?;
                Ok(shifted - tilt)
            }
            ProxKind::Conjugate { .. } => {
                // No direct form; use the scalar decomposition identity with f* = base.
                Ok(v - prox_classical(base, 1.0 / gamma, &(v * gamma))? / gamma)
            }
        },
    }
}

/// Classical metric prox `Prox_f^{M^{-1}}(v) = argmin f(z) + (1/2)||z - v||^2_M`.
pub fn prox_classical_metric(f: &ProxSpec, metric: &DiagonalMetric, v: &DVector<f64>) -> Result<DVector<f64>> {
    check_dim(metric.dim(), v.len(), "metric prox input")?;
    match &f.kind {
        ProxKind::Quadratic { q_mat, q_vec } => {
            check_dim(q_vec.len(), v.len(), "quadratic prox input")?;
            let h = q_mat + DMatrix::from_diagonal(&metric.m().map(|mi| 1.0 / mi));
            solve_spd(&h, &(metric.apply(v) - q_vec))
        }
        // Scaled metric soft-thresholding: level alpha * m componentwise.
        ProxKind::L1 { alpha } => Ok(soft_threshold_at(v, &(metric.m() * *alpha))),
        ProxKind::LinearTilt { base, tilt } => {
            prox_classical_metric(base, metric, &(v + metric.apply_inv(tilt)))
        }
        ProxKind::Conjugate { base } => match &base.kind {
            ProxKind::Quadratic { q_mat, q_vec } => {
                // (Q^{-1} + M) z = M v + Q^{-1} q  <=>  (I + Q M) z = Q M v + q
                let n = v.len();
                check_dim(q_vec.len(), n, "quadratic conjugate prox input")?;
                let m_inv_diag = DMatrix::from_diagonal(&metric.m().map(|mi| 1.0 / mi));
                let lhs = DMatrix::identity(n, n) + q_mat * &m_inv_diag;
                let rhs = q_mat * metric.apply(v) + q_vec;
                let out = lhs
                    .lu()
                    .solve(&rhs)
                    .ok_or_else(|| Error::SingularSystem("conjugate quadratic metric prox".into()))?;
                debug_cross_check(&out, || metric_moreau_complement(base, metric, v));
                Ok(out)
            }
            ProxKind::L1 { alpha } => {
                let out = v.map(|vi| vi.clamp(-alpha, *alpha));
                debug_cross_check(&out, || metric_moreau_complement(base, metric, v));
                Ok(out)
            }
            ProxKind::LinearTilt { base: b, tilt } => {
                let shifted =
                    prox_classical_metric(&ProxSpec::conjugate((**b).clone()), metric, &(v + tilt))?;
                Ok(shifted - tilt)
            }
            ProxKind::Conjugate { .. } => metric_moreau_complement(base, metric, v),
        },
    }
}

/// `v - M^{-1} Prox_{f*}^{M}(M v)` where the conjugate pair is `(base*, base)`.
fn metric_moreau_complement(
    base: &ProxSpec,
    metric: &DiagonalMetric,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let inner = prox_classical_metric(base, &metric.inverted(), &metric.apply(v))?;
    Ok(v - metric.apply_inv(&inner))
}

/// Domain-side prox with a general parameter map:
/// `Prox_{f P^{-1}}(v) = P ẑ` where `ẑ = argmin f(z) + (1/2)||P z - v||^2`.
///
/// `P` must have full column rank (bijective or injective).
pub fn prox_equilibrate(f: &ProxSpec, p_map: &LinOp, v: &DVector<f64>) -> Result<DVector<f64>> {
    if !p_map.has_full_column_rank() {
        return Err(Error::RankDeficient { name: "S" });
    }
    check_dim(p_map.nrows(), v.len(), "equilibrate prox input")?;
    equil_prox(f, p_map, v)
}

/// Scalar-parameter convenience for `rho != 0`.
pub fn prox_equilibrate_scalar(f: &ProxSpec, rho: f64, v: &DVector<f64>) -> Result<DVector<f64>> {
    if rho == 0.0 || rho.is_nan() {
        return Err(Error::Zero { name: "rho" });
    }
    equil_prox(f, &LinOp::scalar(rho, v.len()), v)
}

pub(crate) fn equil_prox(f: &ProxSpec, p_map: &LinOp, v: &DVector<f64>) -> Result<DVector<f64>> {
    match &f.kind {
        ProxKind::Quadratic { q_mat, q_vec } => {
            check_dim(q_vec.len(), p_map.ncols(), "quadratic prox domain")?;
            // (Q + P'P) z = P'v - q, output P z.
            let p_dense = p_map.to_dense();
            let h = q_mat + p_dense.transpose() * &p_dense;
            let z = solve_spd(&h, &(p_map.apply_adjoint(v) - q_vec))?;
            Ok(p_map.apply(&z))
        }
        ProxKind::L1 { alpha } => {
            let d = p_map.as_diagonal().ok_or_else(|| {
                Error::Unsupported("l1 prox needs a diagonal parameter map".into())
            })?;
            // Per coordinate: P ẑ = sgn(v) max(|v| - alpha/|d|, 0).
            Ok(v.zip_map(&d, |vi, di| vi.signum() * (vi.abs() - alpha / di.abs()).max(0.0)))
        }
        ProxKind::LinearTilt { base, tilt } => {
            // f(z) - <t, z> + (1/2)||Pz - v||^2 completes the square at v + (P*)^{-1} t.
            let shift = p_map.adjoint().inverse()?.apply(tilt);
            equil_prox(base, p_map, &(v + shift))
        }
        ProxKind::Conjugate { base } => match &base.kind {
            ProxKind::Quadratic { q_mat, q_vec } => {
                check_dim(q_vec.len(), p_map.ncols(), "quadratic conjugate prox domain")?;
                // f*(z) = 1/2 z'Q^{-1}z - (Q^{-1}q)'z + const:
                // (Q^{-1} + P'P) z = P'v + Q^{-1} q  <=>  (I + Q P'P) z = Q P'v + q
                let n = q_vec.len();
                let p_dense = p_map.to_dense();
                let ptp = p_dense.transpose() * &p_dense;
                let lhs = DMatrix::identity(n, n) + q_mat * &ptp;
                let rhs = q_mat * p_map.apply_adjoint(v) + q_vec;
                let z = lhs
                    .lu()
                    .solve(&rhs)
                    .ok_or_else(|| Error::SingularSystem("conjugate quadratic prox".into()))?;
                let out = p_map.apply(&z);
                debug_cross_check(&out, || equil_moreau_complement(base, p_map, v));
                Ok(out)
            }
            ProxKind::L1 { alpha } => {
                let d = p_map.as_diagonal().ok_or_else(|| {
                    Error::Unsupported("box projection needs a diagonal parameter map".into())
                })?;
                // Projection onto the box [-alpha, alpha] along diagonal P.
                let out = v.zip_map(&d, |vi, di| di * (vi / di).clamp(-*alpha, *alpha));
                debug_cross_check(&out, || equil_moreau_complement(base, p_map, v));
                Ok(out)
            }
            ProxKind::LinearTilt { base: b, tilt } => {
                // (b - <t,.>)* = b*(. + t): solve at v + P t, subtract P t.
                let pt = p_map.apply(tilt);
                let shifted = equil_prox(&ProxSpec::conjugate((**b).clone()), p_map, &(v + &pt))?;
                Ok(shifted - pt)
            }
            ProxKind::Conjugate { .. } => equil_moreau_complement(base, p_map, v),
        },
    }
}

/// Decomposition route for a conjugate prox: `Prox_{f* P^{-1}} = I - Prox_{f (P*)}`,
/// i.e. the complement of the base prox with the adjoint-inverse parameter.
fn equil_moreau_complement(base: &ProxSpec, p_map: &LinOp, v: &DVector<f64>) -> Result<DVector<f64>> {
    let pair_map = p_map.adjoint().inverse()?;
    Ok(v - equil_prox(base, &pair_map, v)?)
}

#[cfg(debug_assertions)]
fn debug_cross_check<F>(direct: &DVector<f64>, alt: F)
where
    F: FnOnce() -> Result<DVector<f64>>,
{
    if let Ok(other) = alt() {
        let dev = (direct - &other).norm();
        debug_assert!(
            dev <= 1e-8 * (1.0 + direct.norm()),
            "conjugate prox routes disagree by {dev:.3e}"
        );
    }
}

#[cfg(not(debug_assertions))]
fn debug_cross_check<F>(_direct: &DVector<f64>, _alt: F)
where
    F: FnOnce() -> Result<DVector<f64>>,
{
}

/// Decomposition `v = p + d` with `p = Prox_{f S^{-1}}(v)` and
/// `d = Prox_{f* S*}(v) = (S*)^{-1} ŷ`, `ŷ = argmin f*(z) + (1/2)||(S*)^{-1} z - v||^2`.
///
/// Both parts are evaluated on their own route so the identity stays testable.
pub fn moreau_decompose(f: &ProxSpec, s_map: &LinOp, v: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let p = prox_equilibrate(f, s_map, v)?;
    let dual_map = s_map.adjoint().inverse()?;
    let d = equil_prox(&ProxSpec::conjugate(f.clone()), &dual_map, v)?;
    Ok((p, d))
}

/// Direction of the conversion between the two parametrizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslateDirection {
    /// Evaluate `S ∘ Prox_f^{M^{-1}} ∘ S^{-1}`, which equals `Prox_{f S^{-1}}`.
    RemoveScaling,
    /// Evaluate `S^{-1} ∘ Prox_{f S^{-1}} ∘ S`, which equals `Prox_f^{M^{-1}}`.
    EquipScaling,
}

/// Conversion rule between classical-metric and domain-side proxes.
pub fn translate_parametrization(
    f: &ProxSpec,
    metric: &DiagonalMetric,
    v: &DVector<f64>,
    direction: TranslateDirection,
) -> Result<DVector<f64>> {
    match direction {
        TranslateDirection::RemoveScaling => {
            let inner = prox_classical_metric(f, metric, &metric.s_inv_apply(v))?;
            Ok(metric.s_apply(&inner))
        }
        TranslateDirection::EquipScaling => {
            let inner = prox_equilibrate(f, &metric.s_linop(), &metric.s_apply(v))?;
            Ok(metric.s_inv_apply(&inner))
        }
    }
}

/// Prox of the tilted function `h(z) = f(z) - <c, z>` in the transformed space:
/// `Prox_{h S^{-1}}(v) = Prox_{f S^{-1}}(c + v)`.
pub fn tilt_prox(f: &ProxSpec, c: &DVector<f64>, s_map: &LinOp, v: &DVector<f64>) -> Result<DVector<f64>> {
    prox_equilibrate(f, s_map, &(c + v))
}

fn check_dim(expected: usize, got: usize, what: &'static str) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch {
            left: what,
            left_rows: got,
            left_cols: 1,
            right: "expected",
            right_rows: expected,
            right_cols: 1,
        });
    }
    Ok(())
}
