//! Diagonal variable metrics and parametrization tags.
//!
//! A metric is stored through the vector `m` with the convention
//! `M^{-1} v = m ⊙ v`, so `M v = v ⊘ m`. The Euclidean embedding uses the
//! decomposition `S = diag(1/sqrt(m))`, which satisfies `<v, M v> = ||S v||^2`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::LinOp;

/// Default lower clamp on the `m` scale, standing in for `m_i -> 0`.
pub const DEFAULT_EPS_FLOOR: f64 = 1e-8;
/// Default upper clamp on the `m` scale, standing in for `m_i -> +inf`.
pub const DEFAULT_INF_CEILING: f64 = 1e8;

/// A positive diagonal metric with clamp bookkeeping.
#[derive(Debug, Clone)]
pub struct DiagonalMetric {
    m: DVector<f64>,
    eps_floor: f64,
    inf_ceiling: f64,
    /// Indices clamped up to `eps_floor` (limit case m_i -> 0, i.e. M_ii huge).
    clamped_low: Vec<usize>,
    /// Indices clamped down to `inf_ceiling` (limit case m_i -> +inf, i.e. M_ii tiny).
    clamped_high: Vec<usize>,
}

impl DiagonalMetric {
    /// Builds a metric from a vector on the `m` scale, clamping limit cases
    /// (zero and infinity sentinels included) into `[eps_floor, inf_ceiling]`
    /// and recording which entries were clamped.
    ///
    /// Any negative or NaN entry is rejected: the metric must be positive definite.
    pub fn from_vector(m: DVector<f64>, eps_floor: f64, inf_ceiling: f64) -> Result<Self> {
        if !(eps_floor > 0.0) {
            return Err(Error::NotPositive { name: "eps_floor", value: eps_floor });
        }
        if !(inf_ceiling > eps_floor) {
            return Err(Error::NotPositive { name: "inf_ceiling - eps_floor", value: inf_ceiling - eps_floor });
        }
        let mut clamped_low = Vec::new();
        let mut clamped_high = Vec::new();
        let mut values = m;
        for (i, v) in values.iter_mut().enumerate() {
            if v.is_nan() || *v < 0.0 {
                return Err(Error::NegativeMetricEntry { index: i, value: *v });
            }
            if *v < eps_floor {
                *v = eps_floor;
                clamped_low.push(i);
            } else if *v > inf_ceiling {
                *v = inf_ceiling;
                clamped_high.push(i);
            }
        }
        Ok(DiagonalMetric { m: values, eps_floor, inf_ceiling, clamped_low, clamped_high })
    }

    /// Metric with default clamps.
    pub fn new(m: DVector<f64>) -> Result<Self> {
        Self::from_vector(m, DEFAULT_EPS_FLOOR, DEFAULT_INF_CEILING)
    }

    /// Constructor with caller-supplied clamp bookkeeping; `m` must already
    /// lie inside `[eps_floor, inf_ceiling]` with the flagged entries at the
    /// respective bounds.
    pub(crate) fn with_flags(
        m: DVector<f64>,
        eps_floor: f64,
        inf_ceiling: f64,
        clamped_low: Vec<usize>,
        clamped_high: Vec<usize>,
    ) -> Self {
        DiagonalMetric { m, eps_floor, inf_ceiling, clamped_low, clamped_high }
    }

    /// The identity metric in dimension `p`.
    pub fn identity(p: usize) -> Self {
        DiagonalMetric {
            m: DVector::from_element(p, 1.0),
            eps_floor: DEFAULT_EPS_FLOOR,
            inf_ceiling: DEFAULT_INF_CEILING,
            clamped_low: Vec::new(),
            clamped_high: Vec::new(),
        }
    }

    /// The metric `M = gamma I` that reproduces the classical scalar step,
    /// i.e. `m = 1/gamma` elementwise.
    pub fn from_gamma(gamma: f64, p: usize) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::NotPositive { name: "gamma", value: gamma });
        }
        DiagonalMetric::from_vector(
            DVector::from_element(p, 1.0 / gamma),
            DEFAULT_EPS_FLOOR.min(0.5 / gamma),
            DEFAULT_INF_CEILING.max(2.0 / gamma),
        )
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// The vector `m` with `M^{-1} v = m ⊙ v`.
    pub fn m(&self) -> &DVector<f64> {
        &self.m
    }

    pub fn eps_floor(&self) -> f64 {
        self.eps_floor
    }

    pub fn inf_ceiling(&self) -> f64 {
        self.inf_ceiling
    }

    pub fn clamped_low(&self) -> &[usize] {
        &self.clamped_low
    }

    pub fn clamped_high(&self) -> &[usize] {
        &self.clamped_high
    }

    /// `M v = v ⊘ m`.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        v.component_div(&self.m)
    }

    /// `M^{-1} v = m ⊙ v`.
    pub fn apply_inv(&self, v: &DVector<f64>) -> DVector<f64> {
        v.component_mul(&self.m)
    }

    /// Diagonal of `S = sqrt(M)`, i.e. `s_i = 1/sqrt(m_i)`.
    pub fn s_diagonal(&self) -> DVector<f64> {
        self.m.map(|mi| 1.0 / mi.sqrt())
    }

    /// `S v`.
    pub fn s_apply(&self, v: &DVector<f64>) -> DVector<f64> {
        v.zip_map(&self.m, |vi, mi| vi / mi.sqrt())
    }

    /// `S^{-1} v`; since `S` is diagonal this is also `(S^*)^{-1} v`.
    pub fn s_inv_apply(&self, v: &DVector<f64>) -> DVector<f64> {
        v.zip_map(&self.m, |vi, mi| vi * mi.sqrt())
    }

    pub fn s_linop(&self) -> LinOp {
        LinOp::diag(self.s_diagonal())
    }

    /// `<v, M v>`.
    pub fn m_norm_sq(&self, v: &DVector<f64>) -> f64 {
        v.zip_map(&self.m, |vi, mi| vi * vi / mi).sum()
    }

    /// The metric with `m` inverted elementwise (swaps the roles of M and M^{-1}).
    pub fn inverted(&self) -> DiagonalMetric {
        DiagonalMetric {
            m: self.m.map(|mi| 1.0 / mi),
            eps_floor: self.eps_floor,
            inf_ceiling: self.inf_ceiling,
            clamped_low: self.clamped_high.clone(),
            clamped_high: self.clamped_low.clone(),
        }
    }
}

/// Constructs a [`DiagonalMetric`], clamping limit cases and recording them.
pub fn metric_from_vector(m: DVector<f64>, eps_floor: f64, inf_ceiling: f64) -> Result<DiagonalMetric> {
    DiagonalMetric::from_vector(m, eps_floor, inf_ceiling)
}

/// How a proximal operator or solver is parametrized.
#[derive(Debug, Clone)]
pub enum Parametrization {
    /// Range-side scalar step `gamma > 0`.
    ClassicalScalar(f64),
    /// Range-side diagonal metric.
    ClassicalMetric(DiagonalMetric),
    /// Domain-side scalar `rho != 0`.
    EquilibrateScalar(f64),
    /// Domain-side operator `S`, bijective or injective (full column rank).
    EquilibrateOperator(LinOp),
}

impl Parametrization {
    pub fn validate(&self) -> Result<()> {
        match self {
            Parametrization::ClassicalScalar(gamma) => {
                if !(*gamma > 0.0) {
                    return Err(Error::NotPositive { name: "gamma", value: *gamma });
                }
            }
            Parametrization::ClassicalMetric(_) => {}
            Parametrization::EquilibrateScalar(rho) => {
                if *rho == 0.0 || rho.is_nan() {
                    return Err(Error::Zero { name: "rho" });
                }
            }
            Parametrization::EquilibrateOperator(s) => {
                if !s.has_full_column_rank() {
                    return Err(Error::RankDeficient { name: "S" });
                }
            }
        }
        Ok(())
    }
}
