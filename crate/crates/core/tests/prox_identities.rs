//! Identity battery for the proximal-operator algebra, checked against
//! independent oracles and over seeded random draws.

mod common;

use common::*;
use equilibrate::linalg::LinOp;
use equilibrate::prox::{
    metric_prox_l1, moreau_decompose, prox_classical, prox_classical_metric, prox_equilibrate,
    soft_threshold, tilt_prox, translate_parametrization, TranslateDirection,
};
use equilibrate::{DVector, DiagonalMetric, ProxSpec};
use proptest::prelude::*;
use rand::Rng;

/// Decomposition identity `p + d = v` over random functions, diagonal maps
/// (mixed signs included), and inputs.
#[test]
fn moreau_identity_battery() {
    let mut rng = rng(0x5eed_0001);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let s = LinOp::diag(random_diag(n, true, &mut rng));
        let v = normal_vec(n, 2.0, &mut rng);
        let (p, d) = moreau_decompose(&f, &s, &v).unwrap();
        let dev = (&p + &d - &v).norm();
        worst = worst.max(dev);
        assert!(dev <= 1e-10, "trial {trial}: |p + d - v| = {dev:.3e}");
    }
    assert!(worst <= 1e-10);
}

/// With `S = I` the decomposition reduces to the resolvent complement
/// `J_A + J_{A^{-1}} = I`, i.e. prox of f plus prox of f* sums to the input.
#[test]
fn resolvent_complement_identity() {
    let mut rng = rng(0x5eed_0002);
    for _ in 0..200 {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let v = normal_vec(n, 2.0, &mut rng);
        let p = prox_classical(&f, 1.0, &v).unwrap();
        let d = prox_classical(&ProxSpec::conjugate(f.clone()), 1.0, &v).unwrap();
        assert!((&p + &d - &v).norm() <= 1e-10);
    }
}

/// Metric l1 prox against a per-coordinate golden-section oracle on
/// `|x| + (x - v)^2 / (2 m)`.
#[test]
fn metric_prox_l1_matches_golden_section_oracle() {
    let mut rng = rng(0x5eed_0003);
    for _ in 0..500 {
        let n = rng.gen_range(1..4);
        let metric = random_metric(n, &mut rng);
        let v = normal_vec(n, 3.0, &mut rng);
        let out = metric_prox_l1(&v, &metric);
        for i in 0..n {
            let (vi, mi) = (v[i], metric.m()[i]);
            let (lo, hi) = prox_bracket(vi);
            // |x| + (x - v)^2 / (2m) up to a constant.
            let oracle = ScalarConvex { l1: 1.0, quad: 0.5 / mi, lin: -vi / mi }.minimize(lo, hi);
            assert!(
                (out[i] - oracle).abs() <= 1e-8,
                "coordinate {i}: {} vs oracle {oracle}",
                out[i]
            );
        }
    }
}

/// Subdifferential membership of the metric l1 prox output:
/// `M v - T(M v)` must lie in `∂||out||_1` componentwise.
#[test]
fn metric_prox_l1_satisfies_subdifferential_inclusion() {
    let mut rng = rng(0x5eed_0004);
    for _ in 0..500 {
        let n = rng.gen_range(1..6);
        let metric = random_metric(n, &mut rng);
        let v = normal_vec(n, 3.0, &mut rng);
        let out = metric_prox_l1(&v, &metric);
        let residue = metric.apply(&v) - soft_threshold(&metric.apply(&v));
        for i in 0..n {
            if out[i] != 0.0 {
                assert!((residue[i] - out[i].signum()).abs() <= 1e-10);
            } else {
                assert!(residue[i].abs() <= 1.0 + 1e-10);
            }
        }
    }
}

/// The two defining forms of the domain-side prox agree: the direct transform
/// `P ẑ` matches a golden-section minimization of `f(P^{-1} z1) + 1/2 (z1 - v)^2`
/// per coordinate for separable instances.
#[test]
fn equilibrate_prox_defining_forms_agree() {
    let mut rng = rng(0x5eed_0005);
    for _ in 0..300 {
        let alpha = rng.gen_range(0.3..2.0);
        let quad = rng.gen_range(0.2..3.0);
        let d = random_diag(1, true, &mut rng)[0];
        let v = rng.gen_range(-4.0..4.0);
        let s = LinOp::scalar(d, 1);
        let vv = DVector::from_vec(vec![v]);

        let l1 = ProxSpec::l1(alpha);
        let out = prox_equilibrate(&l1, &s, &vv).unwrap()[0];
        let (lo, hi) = prox_bracket(v);
        // First defining form: alpha |z1/d| + (1/2)(z1 - v)^2 over z1.
        let oracle =
            ScalarConvex { l1: alpha / d.abs(), quad: 0.5, lin: -v }.minimize(lo, hi);
        assert!((out - oracle).abs() <= 1e-10);

        let f = ProxSpec::quadratic(
            equilibrate::DMatrix::from_row_slice(1, 1, &[quad]),
            DVector::zeros(1),
        );
        let out = prox_equilibrate(&f, &s, &vv).unwrap()[0];
        let oracle = ScalarConvex { l1: 0.0, quad: 0.5 * quad / (d * d) + 0.5, lin: -v }
            .minimize(lo, hi);
        assert!((out - oracle).abs() <= 1e-10);
    }
}

/// Conversion rule round trip: removing then equipping the scaling returns
/// the starting value, and each direction matches the direct evaluation.
#[test]
fn translation_rule_roundtrip_and_direct_agreement() {
    let mut rng = rng(0x5eed_0006);
    for _ in 0..300 {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let metric = random_metric(n, &mut rng);
        let v = normal_vec(n, 2.0, &mut rng);

        let removed = translate_parametrization(&f, &metric, &v, TranslateDirection::RemoveScaling).unwrap();
        let direct = prox_equilibrate(&f, &metric.s_linop(), &v).unwrap();
        assert!((&removed - &direct).norm() <= 1e-10);

        let equipped = translate_parametrization(&f, &metric, &v, TranslateDirection::EquipScaling).unwrap();
        let direct_metric = prox_classical_metric(&f, &metric, &v).unwrap();
        assert!((&equipped - &direct_metric).norm() <= 1e-10);

        // Round trip through the two compositions: S^{-1} (remove at S v) = equip-side value.
        let back = metric.s_inv_apply(
            &translate_parametrization(&f, &metric, &metric.s_apply(&v), TranslateDirection::RemoveScaling)
                .unwrap(),
        );
        assert!((&back - &direct_metric).norm() <= 1e-10);
    }
}

/// Firm nonexpansiveness of the domain-side prox:
/// `||Tx - Ty||^2 <= <x - y, Tx - Ty>` over 1000 random pairs per operator
/// instance.
#[test]
fn equilibrate_prox_is_firmly_nonexpansive() {
    let mut rng = rng(0x5eed_0007);
    for _ in 0..5 {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let s = LinOp::diag(random_diag(n, true, &mut rng));
        for _ in 0..1000 {
            let x = normal_vec(n, 3.0, &mut rng);
            let y = normal_vec(n, 3.0, &mut rng);
            let tx = prox_equilibrate(&f, &s, &x).unwrap();
            let ty = prox_equilibrate(&f, &s, &y).unwrap();
            let lhs = (&tx - &ty).norm_squared();
            let rhs = (&x - &y).dot(&(&tx - &ty));
            assert!(lhs <= rhs + 1e-10, "firm nonexpansiveness violated: {lhs} > {rhs}");
        }
    }
}

/// `Prox_{h S^{-1}}(v) = Prox_{f S^{-1}}(c + v)` for the tilted function.
#[test]
fn tilt_prox_matches_shifted_evaluation() {
    let mut rng = rng(0x5eed_0008);
    for _ in 0..200 {
        let n = rng.gen_range(1..5);
        let f = random_prox_fn(n, &mut rng);
        let s = LinOp::diag(random_diag(n, false, &mut rng));
        let c = normal_vec(n, 1.0, &mut rng);
        let v = normal_vec(n, 2.0, &mut rng);
        let via_op = tilt_prox(&f, &c, &s, &v).unwrap();
        let direct = prox_equilibrate(&f, &s, &(&c + &v)).unwrap();
        assert!((&via_op - &direct).norm() <= 1e-12);
    }
}

/// `f**` evaluates and proxes like `f` for the closed-form kinds, tilts
/// included.
#[test]
fn biconjugate_matches_base() {
    let mut rng = rng(0x5eed_0009);
    for trial in 0..100 {
        let n = rng.gen_range(1..4);
        let mut f = random_prox_fn(n, &mut rng);
        if trial % 3 == 0 {
            f = ProxSpec::linear_tilt(f, normal_vec(n, 1.0, &mut rng));
        }
        let ff = ProxSpec::conjugate(ProxSpec::conjugate(f.clone()));
        let x = normal_vec(n, 2.0, &mut rng);
        assert!((f.eval(&x) - ff.eval(&x)).abs() <= 1e-10 * (1.0 + f.eval(&x).abs()));
        let s = LinOp::diag(random_diag(n, false, &mut rng));
        let a = prox_equilibrate(&f, &s, &x).unwrap();
        let b = prox_equilibrate(&ff, &s, &x).unwrap();
        assert!((&a - &b).norm() <= 1e-10);
    }
}

proptest! {
    /// Soft thresholding shrinks toward zero by at most one and keeps signs.
    #[test]
    fn soft_threshold_shrinks(v in proptest::collection::vec(-50.0f64..50.0, 1..8)) {
        let u = DVector::from_vec(v);
        let t = soft_threshold(&u);
        for i in 0..u.len() {
            prop_assert!(t[i].abs() <= u[i].abs());
            prop_assert!(t[i] * u[i] >= 0.0);
            prop_assert!((u[i] - t[i]).abs() <= 1.0 + 1e-12);
        }
    }

    /// The decomposition identity holds for arbitrary scalar parameters.
    #[test]
    fn moreau_identity_scalar_param(
        v in -20.0f64..20.0,
        rho in prop_oneof![-4.0f64..-0.1, 0.1f64..4.0],
        alpha in 0.1f64..3.0,
    ) {
        let f = ProxSpec::l1(alpha);
        let s = LinOp::scalar(rho, 1);
        let vv = DVector::from_vec(vec![v]);
        let (p, d) = moreau_decompose(&f, &s, &vv).unwrap();
        prop_assert!((p[0] + d[0] - v).abs() <= 1e-10);
    }

    /// Metric quadratic form agrees with its Euclidean embedding.
    #[test]
    fn metric_embedding_identity(
        m in proptest::collection::vec(0.05f64..20.0, 1..6),
        v in proptest::collection::vec(-10.0f64..10.0, 1..6),
    ) {
        let dim = m.len().min(v.len());
        let metric = DiagonalMetric::new(DVector::from_vec(m[..dim].to_vec())).unwrap();
        let vv = DVector::from_vec(v[..dim].to_vec());
        let quad = vv.dot(&metric.apply(&vv));
        let sv = metric.s_apply(&vv);
        prop_assert!((quad - sv.norm_squared()).abs() <= 1e-12 * (1.0 + vv.norm_squared()));
        let roundtrip = metric.apply_inv(&metric.apply(&vv));
        prop_assert!((&roundtrip - &vv).norm() <= 1e-12 * (1.0 + vv.norm()));
    }
}
