//! Seeded random instance families for experiments, comparisons, and the
//! verification suites. Desk scale only (n <= 500).

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::ProblemSpec;

/// Hard cap on instance dimensions.
pub const DESK_SCALE_CAP: usize = 500;
/// Diagonal regularization added to the random Gram matrix.
pub const GRAM_RIDGE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceFamily {
    /// `Q = G'G + 1e-3 I`, `F = I`.
    LassoDense,
    /// As `LassoDense` with a positive diagonal `F`.
    LassoDiagonal,
    /// Smooth-plus-l1 pair with a general square constraint `A x - z = c`, c != 0.
    QuadraticPair,
}

impl InstanceFamily {
    pub fn parse(name: &str) -> Option<InstanceFamily> {
        match name {
            "lasso_dense" => Some(InstanceFamily::LassoDense),
            "lasso_diagonal" => Some(InstanceFamily::LassoDiagonal),
            "quadratic_pair" => Some(InstanceFamily::QuadraticPair),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceFamily::LassoDense => "lasso_dense",
            InstanceFamily::LassoDiagonal => "lasso_diagonal",
            InstanceFamily::QuadraticPair => "quadratic_pair",
        }
    }
}

/// One generated instance with its reproducible id.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub spec: ProblemSpec,
}

/// Generates `count` seeded instances of the family. The same
/// `(family, n, count, seed)` always produces the same data.
pub fn generate_instances(
    family: InstanceFamily,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Instance>> {
    if n == 0 || n > DESK_SCALE_CAP {
        return Err(Error::Unsupported(format!(
            "instance dimension {n} outside the desk-scale range 1..={DESK_SCALE_CAP}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let spec = match family {
            InstanceFamily::LassoDense => lasso_spec(n, &mut rng, false),
            InstanceFamily::LassoDiagonal => lasso_spec(n, &mut rng, true),
            InstanceFamily::QuadraticPair => quadratic_pair_spec(n, &mut rng),
        };
        out.push(Instance {
            id: format!("{}-n{n}-s{seed}-{idx:03}", family.name()),
            spec,
        });
    }
    Ok(out)
}

/// Random PSD Hessian `G'G + ridge I` with `G` standard normal scaled by `1/sqrt(n)`.
pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let scale = 1.0 / (n as f64).sqrt();
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal) * scale);
    g.transpose() * &g + DMatrix::from_diagonal_element(n, n, GRAM_RIDGE)
}

fn random_vec(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal) * scale)
}

fn lasso_spec(n: usize, rng: &mut ChaCha8Rng, diagonal_f: bool) -> ProblemSpec {
    let q_mat = random_psd(n, rng);
    // Linear terms of order 2 against alpha = 1 give mixed supports.
    let q_vec = random_vec(n, 2.0, rng);
    let f_mat = if diagonal_f {
        DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| rng.gen_range(0.5..2.0)))
    } else {
        DMatrix::identity(n, n)
    };
    ProblemSpec::lasso(q_mat, q_vec, 1.0, f_mat)
}

fn quadratic_pair_spec(n: usize, rng: &mut ChaCha8Rng) -> ProblemSpec {
    let q_mat = random_psd(n, rng);
    let q_vec = random_vec(n, 2.0, rng);
    // Diagonally dominant perturbation of the identity stays invertible.
    let scale = 0.2 / (n as f64).sqrt();
    let mut a_mat =
        DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal) * scale);
    a_mat += DMatrix::identity(n, n);
    if !linalg::has_full_column_rank(&a_mat) {
        a_mat += DMatrix::from_diagonal_element(n, n, 0.5);
    }
    let c_vec = random_vec(n, 0.5, rng);
    ProblemSpec::general(
        q_mat,
        q_vec,
        1.0,
        a_mat.clone(),
        a_mat,
        DMatrix::identity(n, n),
        c_vec,
    )
}
