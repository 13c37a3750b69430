//! Shared test oracles: independent 1-D minimizers and seeded random data.
//!
//! The oracles here deliberately avoid the library's prox code paths so that
//! identity tests compare two unrelated computations.

#![allow(dead_code)]

use equilibrate::instances::random_psd;
use equilibrate::{DMatrix, DVector, DiagonalMetric, ProblemSpec, ProxSpec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// One-dimensional convex objective `l1 * |x| + quad * x^2 + lin * x`.
///
/// Every scalar prox subproblem in these tests lands in this family. Probe
/// comparisons go through a cancellation-free difference so the golden-section
/// search is not stopped by the usual sqrt(machine-eps) comparison floor.
#[derive(Debug, Clone, Copy)]
pub struct ScalarConvex {
    pub l1: f64,
    pub quad: f64,
    pub lin: f64,
}

impl ScalarConvex {
    /// `argmin_x alpha |x| + (1/2)||x - v||^2` in scalar form.
    pub fn prox_l1(alpha: f64, v: f64) -> Self {
        ScalarConvex { l1: alpha, quad: 0.5, lin: -v }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.l1 * x.abs() + self.quad * x * x + self.lin * x
    }

    /// `f(c) - f(d)` without catastrophic cancellation.
    fn diff(&self, c: f64, d: f64) -> f64 {
        self.l1 * (c.abs() - d.abs()) + (self.quad * (c + d) + self.lin) * (c - d)
    }

    /// Golden-section minimization on [lo, hi] to a 1e-13 bracket width.
    pub fn minimize(&self, mut lo: f64, mut hi: f64) -> f64 {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let mut c = hi - INV_PHI * (hi - lo);
        let mut d = lo + INV_PHI * (hi - lo);
        while hi - lo > 1e-13 {
            if self.diff(c, d) < 0.0 {
                hi = d;
                d = c;
                c = hi - INV_PHI * (hi - lo);
            } else {
                lo = c;
                c = d;
                d = lo + INV_PHI * (hi - lo);
            }
        }
        0.5 * (lo + hi)
    }
}

/// Golden-section minimizer for arbitrary convex scalar functions; accuracy is
/// limited to roughly sqrt(machine-eps) by comparison noise, so use
/// [`ScalarConvex`] when the oracle must be sharper than ~1e-7.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > 1e-12 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Bracket that safely contains the prox of any 1-D convex function at `v`.
pub fn prox_bracket(v: f64) -> (f64, f64) {
    let r = v.abs() + 2.0;
    (-r, r)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vec(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal) * scale)
}

/// Random strictly positive diagonal metric with entries in [0.2, 5].
pub fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> DiagonalMetric {
    DiagonalMetric::new(DVector::from_fn(n, |_, _| rng.gen_range(0.2..5.0))).unwrap()
}

/// Random diagonal scaling with magnitudes in [0.3, 3], optionally mixed signs.
pub fn random_diag(n: usize, signed: bool, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| {
        let mag = rng.gen_range(0.3..3.0);
        if signed && rng.gen_bool(0.3) {
            -mag
        } else {
            mag
        }
    })
}

/// Random member of the closed-form prox family: quadratic (PD) or scaled l1.
pub fn random_prox_fn(n: usize, rng: &mut ChaCha8Rng) -> ProxSpec {
    if rng.gen_bool(0.5) {
        ProxSpec::quadratic(random_psd(n, rng), normal_vec(n, 1.0, rng))
    } else {
        ProxSpec::l1(rng.gen_range(0.3..2.0))
    }
}

/// Random well-conditioned lasso instance with `F = I` or positive diagonal.
pub fn random_lasso(n: usize, diagonal_f: bool, rng: &mut ChaCha8Rng) -> ProblemSpec {
    let q_mat = random_psd(n, rng);
    let q_vec = normal_vec(n, 2.0, rng);
    let f_mat = if diagonal_f {
        DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| rng.gen_range(0.5..2.0)))
    } else {
        DMatrix::identity(n, n)
    };
    ProblemSpec::lasso(q_mat, q_vec, 1.0, f_mat)
}
