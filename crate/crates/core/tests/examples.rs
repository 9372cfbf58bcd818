//! Worked examples of every operation, plus suite-level budget checks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use num_complex::Complex;
use staircase_core::boundary::{cup, in_configuration, k_extend, k_reduce, orientation_cocycle, BoundaryFunction};
use staircase_core::cochain::{
    cauchy_l, coboundary, contraction_i, derivative_under_i, flow_derivative, frobenius_q, FdSpec,
};
use staircase_core::group::{compose, make_element, one_param, GroupElement, Subgroup};
use staircase_core::sampling::{configuration_points, random_element, Xorshift64Star};
use staircase_core::scalar::{circle_distance, cis, reduce_angle};
use staircase_core::solvers::{
    solve_cauchy_r, solve_cauchy_r_strict, solve_frobenius_s, BasepointScheme, LineIntegralSpec, TailSpec,
};
use staircase_core::staircase::{estimate_sup, verify_primitive, verify_primitive_with, Staircase};
use staircase_core::suites::{
    cauchy_test_function, degree_six_config, or_cup_or, or_cup_or_cup_or, primitive_ladder_configs, run_suite,
    Suite, SuiteParams,
};
use staircase_core::{Error, QuadratureSpec, StaircaseConfig};

type F = BoundaryFunction<f64>;

fn real(arity: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> F {
    BoundaryFunction::real_fn(arity, f).unwrap()
}

#[test]
fn rotations_compose_and_invert() {
    let sum = compose(one_param(Subgroup::K, FRAC_PI_3), one_param(Subgroup::K, FRAC_PI_6));
    assert!(sum.distance(&one_param(Subgroup::K, FRAC_PI_2)) < 1e-12);
    assert!(one_param(Subgroup::K, 0.7f64).inverse().distance(&one_param(Subgroup::K, -0.7)) < 1e-12);
    assert!(GroupElement::<f64>::identity().inverse().distance(&GroupElement::identity()) < 1e-15);
}

#[test]
fn inverse_matches_the_adjugate_matrix() {
    let mut rng = Xorshift64Star::new(7);
    for _ in 0..100 {
        let g = random_element::<f64>(&mut rng);
        let adjugate = make_element(g.a().conj(), -g.b()).unwrap();
        assert!(g.inverse().distance(&adjugate) < 1e-12);
        assert!(compose(g, g.inverse()).distance(&GroupElement::identity()) < 1e-12);
    }
}

#[test]
fn rotations_translate_angles() {
    for (t, theta) in [(0.4f64, 1.0f64), (3.0, 5.5), (-1.2, 0.3)] {
        let moved = one_param(Subgroup::K, t).act_angle(theta);
        assert!(circle_distance(moved, reduce_angle(theta + t)) < 1e-12);
    }
}

#[test]
fn decompositions_of_one_parameter_elements() {
    let t: f64 = 1.7;
    let iw = one_param(Subgroup::A, t).iwasawa();
    assert!(circle_distance(iw.t_k, 0.0) < 1e-12 && (iw.t_a - t).abs() < 1e-12 && iw.t_n.abs() < 1e-12);
    let g = one_param(Subgroup::A, -2.3f64);
    let c = g.cartan();
    assert!((c.t - 2.3).abs() < 1e-12);
    assert!(c.recompose().distance(&g) < 1e-12);
}

#[test]
fn configuration_membership_examples() {
    assert!(in_configuration(&[0.0, PI], 0.1));
    assert!(!in_configuration(&[0.0, 0.0, PI], 0.01));
    assert!(!in_configuration(&[0.0, 1e-3, PI], 1e-2));
}

#[test]
fn cup_products_of_orientations_and_units() {
    let or = orientation_cocycle::<f64>();
    let c = cup(&or, &or).unwrap();
    let z = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, PI / 4.0];
    assert_eq!(c.eval_real(&z).unwrap(), 1.0);
    let f = real(2, |z| (z[0] - 2.0 * z[1]).sin());
    let one = BoundaryFunction::constant(1, 1.0).unwrap();
    for w in [[0.3, 2.0], [5.0, 1.1]] {
        assert_eq!(cup(&f, &one).unwrap().eval(&w).unwrap(), f.eval(&w).unwrap());
        assert_eq!(cup(&one, &f).unwrap().eval(&w).unwrap(), f.eval(&w).unwrap());
    }
}

#[test]
fn reduction_and_extension_examples() {
    let c = k_reduce(&BoundaryFunction::constant(3, 2.5f64).unwrap()).unwrap();
    assert_eq!(c.eval_real(&[0.4, 1.9]).unwrap(), 2.5);
    let e = k_extend(&BoundaryFunction::constant(0, 1.0f64).unwrap(), 1).unwrap();
    assert!((e.eval(&[0.8]).unwrap() - cis(0.8)).norm() < 1e-15);
    let weighted = BoundaryFunction::from_fn(2, staircase_core::Codomain::complex(2), |z: &[f64]| {
        cis(2.0 * z[0]) * (z[1] - z[0]).cos()
    })
    .unwrap();
    let round = k_extend(&k_reduce(&weighted).unwrap(), 2).unwrap();
    for z in [[0.1, 2.0], [4.0, 0.5]] {
        assert!((round.eval(&z).unwrap() - weighted.eval(&z).unwrap()).norm() < 1e-12);
    }
    let invariant = k_extend(&real(1, |z| z[0].sin()), 0).unwrap();
    assert!((invariant.eval(&[1.0, 1.5]).unwrap() - invariant.eval(&[2.0, 2.5]).unwrap()).norm() < 1e-12);
}

#[test]
fn derivatives_of_constants_vanish() {
    let c = BoundaryFunction::constant(3, 4.0f64).unwrap();
    let fd = FdSpec::default();
    for field in [Subgroup::K, Subgroup::A, Subgroup::N] {
        assert!(flow_derivative(&c, field, &[0.1, 2.0, 4.0], &fd).unwrap().norm() < 1e-10);
    }
    assert!(cauchy_l(&c, &fd).unwrap().eval(&[0.1, 2.0, 4.0]).unwrap().norm() < 1e-10);
    let quad = QuadratureSpec::trapezoid(64);
    let i_c = contraction_i(&c, &quad).unwrap();
    for field in [Subgroup::A, Subgroup::N] {
        let under = derivative_under_i(&c, field, &quad, &fd).unwrap().eval(&[0.3, 3.0]).unwrap();
        let direct = flow_derivative(&i_c, field, &[0.3, 3.0], &fd).unwrap();
        assert!(under.norm() < 1e-8 && direct.norm() < 1e-8);
    }
}

#[test]
fn cauchy_operator_on_the_contracted_orientation() {
    let i_or = contraction_i(&orientation_cocycle::<f64>(), &QuadratureSpec::arc_gauss(64)).unwrap();
    let l = cauchy_l(&i_or.with_codomain(staircase_core::Codomain::real_invariant()), &FdSpec::default()).unwrap();
    for (t0, t1) in [(0.3f64, 2.0f64), (4.0, 1.0), (5.9, 3.3)] {
        let expected = (t0.sin() - t1.sin()) / PI;
        assert!((l.eval(&[t0, t1]).unwrap().re - expected).abs() < 1e-6);
    }
}

#[test]
fn frobenius_operator_examples() {
    let fd = FdSpec::with_step(1e-3);
    let l = cauchy_l(&cauchy_test_function(), &fd).unwrap();
    let q = frobenius_q(&l, &fd).unwrap();
    for z in configuration_points::<f64>(3, 20, 3, 0.1).unwrap() {
        assert!(q.eval(&z).unwrap().norm() < 1e-4);
    }
    let zero = frobenius_q(&BoundaryFunction::zero(2).unwrap(), &fd).unwrap();
    assert_eq!(zero.eval(&[0.2, 1.0]).unwrap().norm(), 0.0);
}

#[test]
fn solvers_map_zero_to_zero() {
    let s = solve_frobenius_s(&BoundaryFunction::zero(2).unwrap(), &TailSpec::default()).unwrap();
    assert_eq!(s.eval(&[0.2, 1.0]).unwrap().norm(), 0.0);
    let u = BoundaryFunction::<f64>::zero(3).unwrap().with_codomain(staircase_core::Codomain::complex(1));
    let r = solve_cauchy_r(&u, &BasepointScheme::default(), &LineIntegralSpec::default()).unwrap();
    assert_eq!(r.eval_real(&[0.2, 1.0, 4.0]).unwrap(), 0.0);
}

#[test]
fn strict_cauchy_solver_rejects_non_integrable_data() {
    let u = BoundaryFunction::from_fn(3, staircase_core::Codomain::complex(1), |z: &[f64]| {
        Complex::new(0.0, 1.0) * cis(z[0])
    })
    .unwrap();
    let r = solve_cauchy_r_strict(&u, &BasepointScheme::default(), &LineIntegralSpec::default(), &FdSpec::default(), 1e-3)
        .unwrap();
    assert!(matches!(r.eval(&[0.3, 2.0, 4.0]), Err(Error::IntegrabilityViolation { .. })));
}

#[test]
fn verification_report_examples() {
    let zero5 = BoundaryFunction::<f64>::zero(5).unwrap();
    let zero4 = BoundaryFunction::<f64>::zero(4).unwrap();
    let r = verify_primitive(&zero5, &zero4, 10, 1, 0.15).unwrap();
    assert_eq!(r.sup_residual, 0.0);
    assert_eq!(r.details["sup_cauchy_l"], 0.0);
    assert!(matches!(verify_primitive(&zero5, &zero5, 10, 1, 0.15), Err(Error::ArityMismatch { .. })));

    let c = or_cup_or();
    let cfg = primitive_ladder_configs()[0];
    let p = Staircase::build(&c, &cfg).unwrap().p;
    let q = coboundary(&real(3, |z| (z[0] - z[2]).cos() + (2.0 * z[1]).sin())).unwrap();
    let shifted = p.add(&q).unwrap();
    let base = verify_primitive_with(&c, &p, 10, 3, 0.15, &cfg.fd).unwrap();
    let moved = verify_primitive_with(&c, &shifted, 10, 3, 0.15, &cfg.fd).unwrap();
    assert!((base.sup_residual - moved.sup_residual).abs() < 1e-12);
}

#[test]
fn sup_estimates_of_simple_functions() {
    assert_eq!(estimate_sup(&orientation_cocycle::<f64>(), 50, 1, 0.05).unwrap(), 1.0);
    assert_eq!(estimate_sup(&BoundaryFunction::<f64>::zero(3).unwrap(), 50, 1, 0.05).unwrap(), 0.0);
}

#[test]
fn every_suite_meets_its_budgets() {
    let small = SuiteParams { samples: 40, ..SuiteParams::default() };
    for suite in Suite::ALL {
        let params = match suite {
            Suite::Group => SuiteParams { samples: 1000, ..SuiteParams::default() },
            Suite::Commutators => SuiteParams { samples: 100, h: 1e-3, ..SuiteParams::default() },
            _ => small,
        };
        for r in run_suite(suite, &params).unwrap() {
            assert!(r.within_budget(), "{} {}: {:e} > {:?}", suite.name(), r.identity_name, r.sup_residual, r.budget);
            assert!(r.sup_residual >= r.mean_residual && r.mean_residual >= 0.0);
        }
    }
}

#[test]
fn verify_with_a_coarse_step_exceeds_budgets() {
    let params = SuiteParams { samples: 20, h: 0.5, ..SuiteParams::default() };
    let reports = run_suite(Suite::Commutators, &params).unwrap();
    assert!(reports.iter().any(|r| !r.within_budget()));
}

#[test]
fn degree_six_primitive_spot_check() {
    let c = or_cup_or_cup_or();
    let cfg = degree_six_config();
    let p = Staircase::build(&c, &cfg).unwrap().p;
    let r = verify_primitive_with(&c, &p, 20, 1, 0.15, &cfg.fd).unwrap();
    assert!(r.sup_residual < 0.1, "sup |dp - c| = {:e}", r.sup_residual);
}

#[test]
fn default_config_is_valid() {
    StaircaseConfig::default().validate().unwrap();
    degree_six_config().validate().unwrap();
}
