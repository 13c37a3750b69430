//! Alternating-direction solvers for `f(x) + alpha ||z||_1` subject to
//! `A x - B z = c`, in both parametrizations:
//!
//! * classical scalar step `gamma`, augmented term `(gamma/2)||Ax - Bz - c + lambda/gamma||^2`;
//! * diagonal metric `M = S*S`, augmented term `(1/2)||S(Ax - Bz - c)||^2`,
//!   with updates written through domain-side proximal operators.
//!
//! The two coincide exactly when `M = gamma I`. The solver tracks the
//! fixed-point coordinate `zeta^{k+1} = S A x^{k+1} + (S*)^{-1} lambda^k`
//! (classically `A x^{k+1} + lambda^k / gamma`), whose map is 1/2-averaged.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::fixedpoint::Trace;
use crate::linalg::{exact_diagonal, LinOp};
use crate::metric::{DiagonalMetric, Parametrization};
use crate::metric_select::OptimalityResidual;
use crate::problem::{ProblemSpec, SolutionPair};
use crate::prox::{equil_prox, ProxSpec};

/// Iterate triple plus the fixed-point coordinate.
///
/// `lambda_prev` is the multiplier that entered the sweep producing `x`, so
/// `zeta = S A x + (S*)^{-1} lambda_prev` is recomputable from the state itself.
#[derive(Debug, Clone)]
pub struct AdmmState {
    pub x: DVector<f64>,
    pub z: DVector<f64>,
    pub lambda: DVector<f64>,
    pub lambda_prev: DVector<f64>,
    pub zeta: DVector<f64>,
}

impl AdmmState {
    pub fn zero(n: usize, m: usize, p: usize) -> AdmmState {
        AdmmState {
            x: DVector::zeros(n),
            z: DVector::zeros(m),
            lambda: DVector::zeros(p),
            lambda_prev: DVector::zeros(p),
            zeta: DVector::zeros(p),
        }
    }

    pub fn with_iterates(x: DVector<f64>, z: DVector<f64>, lambda: DVector<f64>) -> AdmmState {
        let lambda_prev = lambda.clone();
        AdmmState { x, z, lambda, lambda_prev, zeta: DVector::zeros(0) }
    }
}

#[derive(Debug, Clone)]
pub struct AdmmConfig {
    pub k_max: usize,
    /// Relative optimality-residual tolerance on the x iterate.
    pub tol: f64,
    /// When false only the endpoints of the zeta trace and no states are kept.
    pub record_trace: bool,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        AdmmConfig { k_max: 10_000, tol: 1e-8, record_trace: true }
    }
}

/// Everything one solve produced.
#[derive(Debug, Clone)]
pub struct AdmmRun {
    pub solution: SolutionPair,
    pub trace: Trace,
    pub states: Vec<AdmmState>,
}

enum ZetaCoord {
    Classical { gamma: f64 },
    Equilibrate,
}

struct Engine<'a> {
    spec: &'a ProblemSpec,
    metric: &'a DiagonalMetric,
    b_diag: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    residual: OptimalityResidual,
    coord: ZetaCoord,
    /// Reference solves additionally require feasibility and a stable multiplier.
    strict: bool,
}

impl<'a> Engine<'a> {
    fn new(
        spec: &'a ProblemSpec,
        metric: &'a DiagonalMetric,
        coord: ZetaCoord,
        strict: bool,
    ) -> Result<Self> {
        spec.validate().into_result()?;
        let p = spec.p();
        if metric.dim() != p {
            return Err(Error::DimensionMismatch {
                left: "metric",
                left_rows: metric.dim(),
                left_cols: 1,
                right: "constraint",
                right_rows: p,
                right_cols: 1,
            });
        }
        let b_diag = exact_diagonal(&spec.b_mat)
            .ok_or_else(|| Error::Unsupported("z-update needs a diagonal B (B = I in v1)".into()))?;
        if b_diag.iter().any(|&b| b <= 0.0) {
            return Err(Error::Unsupported("diagonal B must be positive".into()));
        }
        // A' M A with M = diag(1/m).
        let metric_mat = DMatrix::from_diagonal(&metric.m().map(|mi| 1.0 / mi));
        let h = &spec.q_mat + spec.a_mat.transpose() * metric_mat * &spec.a_mat;
        let chol = h
            .cholesky()
            .ok_or_else(|| Error::SingularSystem("x-update normal equations".into()))?;
        let residual = OptimalityResidual::new(spec)?;
        Ok(Engine { spec, metric, b_diag, chol, residual, coord, strict })
    }

    fn zeta(&self, ax: &DVector<f64>, lambda: &DVector<f64>) -> DVector<f64> {
        match self.coord {
            ZetaCoord::Classical { gamma } => ax + lambda / gamma,
            ZetaCoord::Equilibrate => self.metric.s_apply(ax) + self.metric.s_inv_apply(lambda),
        }
    }

    fn run(&self, init: &AdmmState, cfg: &AdmmConfig) -> Result<AdmmRun> {
        let spec = self.spec;
        let (n, p) = (spec.n(), spec.p());
        if init.x.len() != n || init.z.len() != self.b_diag.len() || init.lambda.len() != p {
            return Err(Error::DimensionMismatch {
                left: "initial state",
                left_rows: init.x.len(),
                left_cols: init.z.len(),
                right: "problem",
                right_rows: n,
                right_cols: p,
            });
        }
        let m = self.metric.m();
        let alpha = spec.alpha;
        let q_scale = 1.0 + spec.q_vec.norm();

        let mut x = init.x.clone();
        let mut z = init.z.clone();
        let mut lambda = init.lambda.clone();

        let mut zetas = vec![self.zeta(&(&spec.a_mat * &x), &lambda)];
        let mut last_zeta: Option<DVector<f64>> = None;
        let mut states: Vec<AdmmState> = Vec::new();
        if cfg.record_trace {
            let mut st = init.clone();
            st.zeta = zetas[0].clone();
            states.push(st);
        }

        let mut iterations = cfg.k_max;
        let mut residual = f64::INFINITY;
        let mut converged = false;

        for k in 1..=cfg.k_max {
            // x-update: (Q + A'MA) x = A'(M(Bz + c) - lambda) - q
            let w = self.b_diag.component_mul(&z) + &spec.c_vec;
            let rhs = spec.a_mat.transpose() * (w.component_div(m) - &lambda) - &spec.q_vec;
            x = self.chol.solve(&rhs);
            let ax = &spec.a_mat * &x;

            // z-update: metric soft-threshold, level alpha m_i / b_i per coordinate
            let r = &ax - &spec.c_vec + m.component_mul(&lambda);
            z = r.zip_zip_map(m, &self.b_diag, |ri, mi, bi| {
                ri.signum() * (ri.abs() - alpha * mi / bi).max(0.0) / bi
            });

            // lambda-update: lambda + M(Ax - Bz - c)
            let gap = &ax - self.b_diag.component_mul(&z) - &spec.c_vec;
            let lambda_prev = lambda.clone();
            lambda += gap.component_div(m);

            let zeta = self.zeta(&ax, &lambda_prev);
            if cfg.record_trace {
                states.push(AdmmState {
                    x: x.clone(),
                    z: z.clone(),
                    lambda: lambda.clone(),
                    lambda_prev,
                    zeta: zeta.clone(),
                });
                zetas.push(zeta);
            } else {
                last_zeta = Some(zeta);
            }

            residual = self.residual.eval(&x)?;
            converged = residual <= cfg.tol * q_scale;
            if self.strict {
                converged = converged
                    && gap.norm() <= cfg.tol * (1.0 + spec.c_vec.norm())
                    && gap.component_div(m).norm() <= cfg.tol * (1.0 + lambda.norm());
            }
            iterations = k;
            if converged {
                break;
            }
        }
        if let Some(zeta) = last_zeta {
            zetas.push(zeta);
        }

        let objective = spec.f_value(&x)
            + alpha
                * (&spec.a_mat * &x - &spec.c_vec)
                    .component_div(&self.b_diag)
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>();

        let solution = SolutionPair { x, lambda, objective, residual, converged, iterations };
        let trace = Trace::from_points(zetas, 0.5, None);
        Ok(AdmmRun { solution, trace, states })
    }
}

/// Classical scalar-step solver.
pub fn admm_classical(
    spec: &ProblemSpec,
    gamma: f64,
    init: &AdmmState,
    cfg: &AdmmConfig,
) -> Result<AdmmRun> {
    if !(gamma > 0.0) {
        return Err(Error::NotPositive { name: "gamma", value: gamma });
    }
    let metric = DiagonalMetric::from_gamma(gamma, spec.p())?;
    Engine::new(spec, &metric, ZetaCoord::Classical { gamma }, false)?.run(init, cfg)
}

/// Metric solver with diagonal `M`.
pub fn admm_equilibrate(
    spec: &ProblemSpec,
    metric: &DiagonalMetric,
    init: &AdmmState,
    cfg: &AdmmConfig,
) -> Result<AdmmRun> {
    Engine::new(spec, metric, ZetaCoord::Equilibrate, false)?.run(init, cfg)
}

pub(crate) fn admm_reference_solve(
    spec: &ProblemSpec,
    gamma: f64,
    cfg: &AdmmConfig,
) -> Result<AdmmRun> {
    let metric = DiagonalMetric::from_gamma(gamma, spec.p())?;
    let init = AdmmState::zero(spec.n(), spec.m(), spec.p());
    Engine::new(spec, &metric, ZetaCoord::Classical { gamma }, true)?.run(&init, cfg)
}

type VecMap = Box<dyn Fn(&DVector<f64>) -> DVector<f64>>;

/// A 1/2-averaged fixed-point map of the form
/// `zeta -> P_f(u) - u/2 + zeta/2` with `u` the reflected g-side output.
pub struct FixedPointMap {
    f_prox: VecMap,
    g_reflect: VecMap,
    theta: f64,
}

impl FixedPointMap {
    pub fn apply(&self, zeta: &DVector<f64>) -> DVector<f64> {
        let u = (self.g_reflect)(zeta);
        (self.f_prox)(&u) - &u * 0.5 + zeta * 0.5
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn as_fn(&self) -> impl Fn(&DVector<f64>) -> DVector<f64> + '_ {
        move |z| self.apply(z)
    }
}

/// Fixed-point map of the metric solver on the zeta coordinate. One
/// application to `zeta^k` of a consistent state reproduces `zeta^{k+1}` of a
/// solver sweep.
pub fn admm_fixed_point_map(spec: &ProblemSpec, metric: &DiagonalMetric) -> Result<FixedPointMap> {
    spec.validate().into_result()?;
    let b_diag = exact_diagonal(&spec.b_mat)
        .ok_or_else(|| Error::Unsupported("fixed-point map needs a diagonal B".into()))?;
    if b_diag.iter().any(|&b| b <= 0.0) {
        return Err(Error::Unsupported("diagonal B must be positive".into()));
    }
    let s = metric.s_diagonal();
    let c_tilde = metric.s_apply(&spec.c_vec);

    // SA dense, with the x-update system prefactored.
    let mut sa = spec.a_mat.clone();
    for i in 0..sa.nrows() {
        let row = sa.row(i) * s[i];
        sa.set_row(i, &row);
    }
    let h = &spec.q_mat + sa.transpose() * &sa;
    let chol = h
        .cholesky()
        .ok_or_else(|| Error::SingularSystem("fixed-point map normal equations".into()))?;
    let q_vec = spec.q_vec.clone();
    let sa_f = sa;

    let sb = s.component_mul(&b_diag);
    let alpha = spec.alpha;
    let c_g = c_tilde.clone();

    let g_reflect = move |zeta: &DVector<f64>| {
        let u = zeta - &c_g;
        let z_tilde = u.zip_map(&sb, |ui, di| ui.signum() * (ui.abs() - alpha / di.abs()).max(0.0));
        (z_tilde + &c_g) * 2.0 - zeta
    };
    let f_prox = move |v: &DVector<f64>| {
        let y = chol.solve(&(sa_f.transpose() * v - &q_vec));
        &sa_f * y
    };

    Ok(FixedPointMap { f_prox: Box::new(f_prox), g_reflect: Box::new(g_reflect), theta: 0.5 })
}

/// Dual counterpart of [`admm_fixed_point_map`], built from conjugate proxes
/// with the adjoint parameter maps. Equals the primal map pointwise (self-duality).
pub fn admm_dual_fixed_point_map(spec: &ProblemSpec, metric: &DiagonalMetric) -> Result<FixedPointMap> {
    spec.validate().into_result()?;
    if spec.a_mat.nrows() != spec.a_mat.ncols() {
        return Err(Error::Unsupported("dual fixed-point map needs a square A".into()));
    }
    let b_diag = exact_diagonal(&spec.b_mat)
        .ok_or_else(|| Error::Unsupported("dual fixed-point map needs a diagonal B".into()))?;
    let s = metric.s_diagonal();
    let c_tilde = metric.s_apply(&spec.c_vec);

    let mut sa = spec.a_mat.clone();
    for i in 0..sa.nrows() {
        let row = sa.row(i) * s[i];
        sa.set_row(i, &row);
    }
    // Parameter map of the conjugate side: ((SA)*)^{-1}.
    let f_map = LinOp::dense(sa.transpose()).inverse()?;
    let f_conj = ProxSpec::conjugate(ProxSpec::quadratic(spec.q_mat.clone(), spec.q_vec.clone()));

    let g_map = LinOp::diag(s.component_mul(&b_diag)).adjoint().inverse()?;
    let g_conj = ProxSpec::conjugate(ProxSpec::l1(spec.alpha));

    let g_reflect = move |psi: &DVector<f64>| {
        let prox = equil_prox(&g_conj, &g_map, &(psi - &c_tilde)).expect("box prox");
        prox * 2.0 - psi
    };
    let f_prox = move |u: &DVector<f64>| -equil_prox(&f_conj, &f_map, &(-u)).expect("conjugate prox");

    Ok(FixedPointMap { f_prox: Box::new(f_prox), g_reflect: Box::new(g_reflect), theta: 0.5 })
}

/// Classical primal fixed-point map on `zeta = Ax + lambda/gamma`.
pub fn classical_primal_map(spec: &ProblemSpec, gamma: f64) -> Result<FixedPointMap> {
    spec.validate().into_result()?;
    if !(gamma > 0.0) {
        return Err(Error::NotPositive { name: "gamma", value: gamma });
    }
    let b_diag = exact_diagonal(&spec.b_mat)
        .ok_or_else(|| Error::Unsupported("classical map needs a diagonal B".into()))?;
    let f_scaled = ProxSpec::quadratic(&spec.q_mat / gamma, &spec.q_vec / gamma);
    let a_map = LinOp::dense(spec.a_mat.clone());
    let level = spec.alpha / gamma;
    let c = spec.c_vec.clone();

    let g_reflect = move |zeta: &DVector<f64>| {
        let u = zeta - &c;
        let prox = u.zip_map(&b_diag, |ui, bi| ui.signum() * (ui.abs() - level / bi.abs()).max(0.0));
        (prox + &c) * 2.0 - zeta
    };
    let f_prox =
        move |v: &DVector<f64>| equil_prox(&f_scaled, &a_map, v).expect("quadratic prox");

    Ok(FixedPointMap { f_prox: Box::new(f_prox), g_reflect: Box::new(g_reflect), theta: 0.5 })
}

/// Classical dual fixed-point map on `psi = gamma A x + lambda`, built from
/// the gamma-scaled conjugate functions. Zero-offset problems only.
pub fn classical_dual_map(spec: &ProblemSpec, gamma: f64) -> Result<FixedPointMap> {
    spec.validate().into_result()?;
    if !(gamma > 0.0) {
        return Err(Error::NotPositive { name: "gamma", value: gamma });
    }
    if spec.c_vec.norm() != 0.0 {
        return Err(Error::Unsupported("classical dual map requires c = 0".into()));
    }
    if spec.a_mat.nrows() != spec.a_mat.ncols() {
        return Err(Error::Unsupported("classical dual map needs a square A".into()));
    }
    let b_diag = exact_diagonal(&spec.b_mat)
        .ok_or_else(|| Error::Unsupported("classical dual map needs a diagonal B".into()))?;

    // gamma * (f o A^{-1})* o (-I) = [gamma-scaled conjugate] o (-A^T)
    let f_conj = ProxSpec::conjugate(ProxSpec::quadratic(spec.q_mat.clone(), spec.q_vec.clone()))
        .scale(gamma)?;
    let f_map = LinOp::dense(-spec.a_mat.transpose()).inverse()?;
    // gamma * (g o B^{-1})* = box indicator of [-alpha, alpha] composed with B^T
    let g_conj = ProxSpec::conjugate(ProxSpec::l1(spec.alpha)).scale(gamma)?;
    let g_map = LinOp::diag(b_diag).inverse()?;

    let g_reflect = move |psi: &DVector<f64>| {
        equil_prox(&g_conj, &g_map, psi).expect("box prox") * 2.0 - psi
    };
    let f_prox = move |u: &DVector<f64>| equil_prox(&f_conj, &f_map, u).expect("conjugate prox");

    Ok(FixedPointMap { f_prox: Box::new(f_prox), g_reflect: Box::new(g_reflect), theta: 0.5 })
}

/// Outcome of [`self_duality_check`].
#[derive(Debug, Clone)]
pub struct SelfDualityReport {
    pub max_deviation: f64,
    pub steps: usize,
    pub passes: bool,
}

/// Iterates the primal and the conjugate-built dual map from the same start
/// and reports the worst pointwise deviation; passes iff it stays below 1e-8.
pub fn self_duality_check(
    spec: &ProblemSpec,
    metric: &DiagonalMetric,
    z0: &DVector<f64>,
    steps: usize,
) -> Result<SelfDualityReport> {
    let primal = admm_fixed_point_map(spec, metric)?;
    let dual = admm_dual_fixed_point_map(spec, metric)?;
    let mut zp = z0.clone();
    let mut zd = z0.clone();
    let mut max_dev = 0.0f64;
    for _ in 0..steps {
        zp = primal.apply(&zp);
        zd = dual.apply(&zd);
        max_dev = max_dev.max((&zp - &zd).norm());
    }
    Ok(SelfDualityReport { max_deviation: max_dev, steps, passes: max_dev <= 1e-8 })
}

/// One term `func(map y)` of a unified one-variable problem.
#[derive(Debug, Clone)]
pub struct UnifiedTerm {
    pub func: ProxSpec,
    map: LinOp,
    map_inv: LinOp,
}

impl UnifiedTerm {
    pub fn new(func: ProxSpec, map: LinOp) -> Result<UnifiedTerm> {
        let map_inv = map.inverse()?;
        Ok(UnifiedTerm { func, map, map_inv })
    }

    pub fn value(&self, y: &DVector<f64>) -> f64 {
        self.func.eval(&self.map.apply(y))
    }

    pub fn prox(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        equil_prox(&self.func, &self.map_inv, v)
    }
}

/// One-variable form `minimize first(y) + second(y - shift) + <tilt, y>`.
///
/// Both the primal and the dual of the split problem land on this shape under
/// the variable substitutions of either parametrization.
#[derive(Debug, Clone)]
pub struct UnifiedProblem {
    pub first: UnifiedTerm,
    pub second: UnifiedTerm,
    pub shift: DVector<f64>,
    pub tilt: DVector<f64>,
}

impl UnifiedProblem {
    pub fn value(&self, y: &DVector<f64>) -> f64 {
        self.first.value(y) + self.second.value(&(y - &self.shift)) + self.tilt.dot(y)
    }

    /// Douglas-Rachford solve of the two-term objective; returns the
    /// minimizer and its objective value.
    pub fn solve(&self, k_max: usize, tol: f64) -> Result<(DVector<f64>, f64)> {
        let p2 = |v: &DVector<f64>| -> Result<DVector<f64>> {
            Ok(self.second.prox(&(v - &self.shift))? + &self.shift)
        };
        let p1 = |v: &DVector<f64>| -> Result<DVector<f64>> { self.first.prox(&(v - &self.tilt)) };

        let mut zeta = DVector::zeros(self.shift.len());
        let mut y = p2(&zeta)?;
        for _ in 0..k_max {
            let u = p2(&zeta)? * 2.0 - &zeta;
            let next = p1(&u)? - u * 0.5 + &zeta * 0.5;
            let step = (&next - &zeta).norm();
            zeta = next;
            y = p2(&zeta)?;
            if step <= tol {
                break;
            }
        }
        let value = self.value(&y);
        Ok((y, value))
    }
}

/// Unified primal form of a split pair `(f, g, A, B, c)` under `param`.
pub fn unified_primal_of(
    f: &ProxSpec,
    g: &ProxSpec,
    a_mat: &DMatrix<f64>,
    b_mat: &DMatrix<f64>,
    c_vec: &DVector<f64>,
    param: &Parametrization,
) -> Result<UnifiedProblem> {
    let (sa, sb, c_tilde, f_fn, g_fn) = unified_substitutions(f, g, a_mat, b_mat, c_vec, param)?;
    Ok(UnifiedProblem {
        first: UnifiedTerm::new(f_fn, sa.inverse()?)?,
        second: UnifiedTerm::new(g_fn, sb.inverse()?)?,
        shift: c_tilde.clone(),
        tilt: DVector::zeros(c_tilde.len()),
    })
}

/// Unified dual form: `minimize (f_tilde o (-I))*(y) + g_tilde*(y) + <y, c_tilde>`.
pub fn unified_dual_of(
    f: &ProxSpec,
    g: &ProxSpec,
    a_mat: &DMatrix<f64>,
    b_mat: &DMatrix<f64>,
    c_vec: &DVector<f64>,
    param: &Parametrization,
) -> Result<UnifiedProblem> {
    let (sa, sb, c_tilde, f_fn, g_fn) = unified_substitutions(f, g, a_mat, b_mat, c_vec, param)?;
    Ok(UnifiedProblem {
        first: UnifiedTerm::new(ProxSpec::conjugate(f_fn), sa.adjoint().negate())?,
        second: UnifiedTerm::new(ProxSpec::conjugate(g_fn), sb.adjoint())?,
        shift: DVector::zeros(c_tilde.len()),
        tilt: c_tilde,
    })
}

#[allow(clippy::type_complexity)]
fn unified_substitutions(
    f: &ProxSpec,
    g: &ProxSpec,
    a_mat: &DMatrix<f64>,
    b_mat: &DMatrix<f64>,
    c_vec: &DVector<f64>,
    param: &Parametrization,
) -> Result<(LinOp, LinOp, DVector<f64>, ProxSpec, ProxSpec)> {
    param.validate()?;
    if a_mat.nrows() != a_mat.ncols() || b_mat.nrows() != b_mat.ncols() {
        return Err(Error::Unsupported("unified forms need square A and B".into()));
    }
    let p = a_mat.nrows();
    let a_op = LinOp::from_matrix(a_mat.clone());
    let b_op = LinOp::from_matrix(b_mat.clone());
    match param {
        Parametrization::EquilibrateOperator(s) => {
            Ok((s.compose(&a_op), s.compose(&b_op), s.apply(c_vec), f.clone(), g.clone()))
        }
        Parametrization::EquilibrateScalar(rho) => {
            let s = LinOp::scalar(*rho, p);
            Ok((s.compose(&a_op), s.compose(&b_op), c_vec * *rho, f.clone(), g.clone()))
        }
        Parametrization::ClassicalScalar(gamma) => Ok((
            a_op,
            b_op,
            c_vec.clone(),
            f.scale(1.0 / gamma)?,
            g.scale(1.0 / gamma)?,
        )),
        Parametrization::ClassicalMetric(_) => Err(Error::Unsupported(
            "the unified form of the classical parametrization is scalar-only".into(),
        )),
    }
}

/// Unified dual of a `ProblemSpec` (its `g` is the scaled l1 norm).
pub fn build_unified_dual(spec: &ProblemSpec, param: &Parametrization) -> Result<UnifiedProblem> {
    spec.validate().into_result()?;
    let f = ProxSpec::quadratic(spec.q_mat.clone(), spec.q_vec.clone());
    let g = ProxSpec::l1(spec.alpha);
    unified_dual_of(&f, &g, &spec.a_mat, &spec.b_mat, &spec.c_vec, param)
}

/// Unified primal of a `ProblemSpec`, the companion of [`build_unified_dual`].
pub fn build_unified_primal(spec: &ProblemSpec, param: &Parametrization) -> Result<UnifiedProblem> {
    spec.validate().into_result()?;
    let f = ProxSpec::quadratic(spec.q_mat.clone(), spec.q_vec.clone());
    let g = ProxSpec::l1(spec.alpha);
    unified_primal_of(&f, &g, &spec.a_mat, &spec.b_mat, &spec.c_vec, param)
}
