//! The `verify` command: runs the operator-identity battery on seeded random
//! instances and reports one pass/fail row per check.

use equilibrate::admm::{
    admm_equilibrate, classical_dual_map, classical_primal_map, self_duality_check, AdmmConfig,
    AdmmState,
};
use equilibrate::fixedpoint::{check_parallel_scaling, iterate, verify_rate, Trace};
use equilibrate::instances::random_psd;
use equilibrate::linalg::LinOp;
use equilibrate::prox::{
    metric_prox_l1, moreau_decompose, prox_classical, prox_classical_metric, prox_equilibrate,
    soft_threshold, tilt_prox, translate_parametrization, TranslateDirection,
};
use equilibrate::{DMatrix, DVector, DiagonalMetric, ProblemSpec, ProxSpec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub check: &'static str,
    pub instances: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerifyRow {
    fn new(check: &'static str, instances: usize, max_deviation: f64, tolerance: f64) -> VerifyRow {
        VerifyRow { check, instances, max_deviation, tolerance, pass: max_deviation <= tolerance }
    }
}

fn normal_vec(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal) * scale)
}

fn random_diag(n: usize, signed: bool, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| {
        let mag = rng.gen_range(0.3..3.0);
        if signed && rng.gen_bool(0.3) {
            -mag
        } else {
            mag
        }
    })
}

fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> DiagonalMetric {
    DiagonalMetric::new(DVector::from_fn(n, |_, _| rng.gen_range(0.2..5.0))).unwrap()
}

fn random_prox_fn(n: usize, rng: &mut ChaCha8Rng) -> ProxSpec {
    if rng.gen_bool(0.5) {
        ProxSpec::quadratic(random_psd(n, rng), normal_vec(n, 1.0, rng))
    } else {
        ProxSpec::l1(rng.gen_range(0.3..2.0))
    }
}

fn random_lasso(n: usize, rng: &mut ChaCha8Rng) -> ProblemSpec {
    ProblemSpec::lasso(
        random_psd(n, rng),
        normal_vec(n, 2.0, rng),
        1.0,
        DMatrix::identity(n, n),
    )
}

/// Runs the full battery; every row is deterministic in `seed`.
pub fn run_battery(seed: u64) -> Vec<VerifyRow> {
    vec![
        moreau_identity(seed),
        translation_rule(seed.wrapping_add(1)),
        tilt_rule(seed.wrapping_add(2)),
        resolvent_complement(seed.wrapping_add(3)),
        firm_nonexpansiveness(seed.wrapping_add(4)),
        metric_l1_inclusion(seed.wrapping_add(5)),
        self_duality(seed.wrapping_add(6)),
        parallel_scaling(seed.wrapping_add(7)),
        rate_bound_rows(seed.wrapping_add(8)),
    ]
}

fn moreau_identity(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 1000;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let s = LinOp::diag(random_diag(n, true, &mut rng));
        let v = normal_vec(n, 2.0, &mut rng);
        if let Ok((p, d)) = moreau_decompose(&f, &s, &v) {
            worst = worst.max((&p + &d - &v).norm());
        } else {
            worst = f64::INFINITY;
        }
    }
    VerifyRow::new("moreau_identity", trials, worst, 1e-10)
}

fn translation_rule(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 300;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let metric = random_metric(n, &mut rng);
        let v = normal_vec(n, 2.0, &mut rng);
        let removed =
            translate_parametrization(&f, &metric, &v, TranslateDirection::RemoveScaling).unwrap();
        let direct = prox_equilibrate(&f, &metric.s_linop(), &v).unwrap();
        worst = worst.max((&removed - &direct).norm());
        let equipped =
            translate_parametrization(&f, &metric, &v, TranslateDirection::EquipScaling).unwrap();
        let direct_metric = prox_classical_metric(&f, &metric, &v).unwrap();
        worst = worst.max((&equipped - &direct_metric).norm());
    }
    VerifyRow::new("translation_rule", trials, worst, 1e-10)
}

fn tilt_rule(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 300;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let s = LinOp::diag(random_diag(n, false, &mut rng));
        let c = normal_vec(n, 1.0, &mut rng);
        let v = normal_vec(n, 2.0, &mut rng);
        let via_op = tilt_prox(&f, &c, &s, &v).unwrap();
        let direct = prox_equilibrate(&f, &s, &(&c + &v)).unwrap();
        worst = worst.max((&via_op - &direct).norm());
    }
    VerifyRow::new("tilt_rule", trials, worst, 1e-12)
}

fn resolvent_complement(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 300;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let v = normal_vec(n, 2.0, &mut rng);
        let p = prox_classical(&f, 1.0, &v).unwrap();
        let d = prox_classical(&ProxSpec::conjugate(f.clone()), 1.0, &v).unwrap();
        worst = worst.max((&p + &d - &v).norm());
    }
    VerifyRow::new("resolvent_complement", trials, worst, 1e-10)
}

fn firm_nonexpansiveness(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut samples = 0;
    for _ in 0..10 {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let s = LinOp::diag(random_diag(n, true, &mut rng));
        for _ in 0..100 {
            let x = normal_vec(n, 3.0, &mut rng);
            let y = normal_vec(n, 3.0, &mut rng);
            let tx = prox_equilibrate(&f, &s, &x).unwrap();
            let ty = prox_equilibrate(&f, &s, &y).unwrap();
            let lhs = (&tx - &ty).norm_squared();
            let rhs = (&x - &y).dot(&(&tx - &ty));
            worst = worst.max(lhs - rhs);
            samples += 1;
        }
    }
    VerifyRow::new("firm_nonexpansiveness", samples, worst.max(0.0), 1e-10)
}

fn metric_l1_inclusion(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 500;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(1..6);
        let metric = random_metric(n, &mut rng);
        let v = normal_vec(n, 3.0, &mut rng);
        let out = metric_prox_l1(&v, &metric);
        let residue = metric.apply(&v) - soft_threshold(&metric.apply(&v));
        for i in 0..n {
            if out[i] != 0.0 {
                worst = worst.max((residue[i] - out[i].signum()).abs());
            } else {
                worst = worst.max((residue[i].abs() - 1.0).max(0.0));
            }
        }
    }
    VerifyRow::new("metric_l1_subdifferential", trials, worst, 1e-10)
}

fn self_duality(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 10;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let spec = random_lasso(5, &mut rng);
        let metric = random_metric(5, &mut rng);
        let z0 = normal_vec(5, 1.0, &mut rng);
        match self_duality_check(&spec, &metric, &z0, 40) {
            Ok(report) => worst = worst.max(report.max_deviation),
            Err(_) => worst = f64::INFINITY,
        }
    }
    VerifyRow::new("self_duality", trials, worst, 1e-8)
}

fn parallel_scaling(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut instances = 0;
    for &gamma in &[0.5, 2.0, 10.0] {
        for _ in 0..4 {
            let n = rng.gen_range(2..6);
            let spec = random_lasso(n, &mut rng);
            let primal = classical_primal_map(&spec, gamma).unwrap();
            let dual = classical_dual_map(&spec, gamma).unwrap();
            let z0 = DVector::zeros(n);
            let tp = iterate(primal.as_fn(), &z0, 30, 0.0, 0.5, None).unwrap();
            let td = iterate(dual.as_fn(), &z0, 30, 0.0, 0.5, None).unwrap();
            let common = tp.len().min(td.len());
            let report =
                check_parallel_scaling(&td.truncated(common), &tp.truncated(common), gamma.sqrt())
                    .unwrap();
            worst = worst.max(report.max_deviation / (1.0 + report.scale));
            instances += 1;
        }
    }
    VerifyRow::new("parallel_scaling", instances, worst, 1e-8)
}

fn rate_bound_rows(seed: u64) -> VerifyRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 6;
    // Deviation: worst violation of the bound ratio and of monotonicity.
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(2..7);
        let spec = random_lasso(n, &mut rng);
        let metric = random_metric(n, &mut rng);
        let cfg = AdmmConfig { k_max: 250, tol: 0.0, record_trace: true };
        let run =
            admm_equilibrate(&spec, &metric, &AdmmState::zero(spec.n(), spec.m(), spec.p()), &cfg)
                .unwrap();
        let zeta_star = run.trace.points.last().unwrap().clone();
        let trace = Trace::from_points(run.trace.points.clone(), 0.5, Some(&zeta_star));
        let dist0 = (&trace.points[0] - &zeta_star).norm_squared();
        let report = verify_rate(&trace, dist0).unwrap();
        worst = worst.max((report.tightest_ratio - 1.0).max(0.0));
        if !trace.step_norms_nonincreasing() || !trace.fix_distances_nonincreasing() {
            worst = f64::INFINITY;
        }
    }
    VerifyRow::new("rate_bound", trials, worst, 1e-9)
}
