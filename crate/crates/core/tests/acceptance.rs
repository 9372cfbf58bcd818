//! Acceptance run: every acceptance criterion at its stated tolerance, one
//! `PASS`/`FAIL` line each. Exits non-zero when any criterion fails.

use std::time::Instant;

use staircase_core::boundary::orientation_cocycle;
use staircase_core::sampling::configuration_points;
use staircase_core::staircase::{estimate_sup_prefixes, verify_primitive_with};
use staircase_core::suites::{
    commutator_suite, contraction_identity_residuals, empirical_orders, frobenius_test_function, group_suite,
    ili_or, ili_or_ladder, or_cup_or, primitive_ladder, primitive_ladder_configs, smooth_test_function, solver_suite,
    tameness_residuals, SuiteParams,
};
use staircase_core::{
    Complex64, FdSpec, LineIntegralSpec, QuadratureSpec, Staircase, StaircaseConfig, TailSpec, VerificationReport,
};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    summary: String,
}

fn sup(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

fn find<'a>(reports: &'a [VerificationReport], name: &str) -> &'a VerificationReport {
    reports.iter().find(|r| r.identity_name == name).unwrap_or_else(|| panic!("report {name} missing"))
}

fn closed_form_ili_or() -> Outcome {
    let params = SuiteParams { samples: 64, h: 1e-4, ..SuiteParams::default() };
    let ladder = ili_or_ladder(&params, &[256, 512, 1024]).expect("ladder");
    let orders = empirical_orders(&ladder);
    let at_zero = ili_or(&QuadratureSpec::trapezoid(1024), &FdSpec::with_step(1e-4))
        .and_then(|f| f.eval(&[0.0]))
        .expect("value at zero");
    let expected = Complex64::new(0.0, 1.0 / std::f64::consts::PI);
    let top = ladder[2].sup_residual;
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let zero_err = (at_zero - expected).norm();
    Outcome {
        pass: top < 5e-3 && min_order >= 0.9 && zero_err < 5e-3,
        summary: format!(
            "sup at N=1024 {top:.3e} (< 5e-3), orders {orders:.3?} (>= 0.9), value at 0 {:.4}{:+.4}i",
            at_zero.re, at_zero.im
        ),
    }
}

fn contraction_identity() -> Outcome {
    let points = configuration_points::<f64>(1, 100, 3, 0.1).expect("points");
    let smooth = sup(&contraction_identity_residuals(&smooth_test_function(), &QuadratureSpec::trapezoid(256), &points)
        .expect("smooth residuals"));
    let or = sup(&contraction_identity_residuals(&orientation_cocycle(), &QuadratureSpec::trapezoid(1024), &points)
        .expect("or residuals"));
    Outcome {
        pass: smooth < 2e-6 && or < 2e-2,
        summary: format!("smooth N=256 {smooth:.3e} (< 2e-6), or N=1024 {or:.3e} (< 2e-2)"),
    }
}

fn commutators() -> Outcome {
    let params = SuiteParams { samples: 100, h: 1e-3, ..SuiteParams::default() };
    let reports = commutator_suite(&params).expect("commutator suite");
    let names = ["commutator_k_a", "commutator_k_n", "commutator_a_n"];
    let worst = names.iter().map(|n| find(&reports, n).sup_residual).fold(0.0, f64::max);
    Outcome { pass: worst < 1e-5, summary: format!("worst of three relations at h=1e-3 {worst:.3e} (< 1e-5)") }
}

fn right_inverses() -> Outcome {
    let params = SuiteParams { samples: 50, margin: 0.1, ..SuiteParams::default() };
    let reports = solver_suite(&params).expect("solver suite");
    let frob = find(&reports, "frobenius_right_inverse_smooth").sup_residual;
    let cauchy = find(&reports, "cauchy_right_inverse").sup_residual;
    Outcome {
        pass: frob < 1e-5 && cauchy < 1e-4,
        summary: format!("Q(S psi) - psi {frob:.3e} (< 1e-5), L(R L f) - L f {cauchy:.3e} (< 1e-4)"),
    }
}

fn flagship_staircase(st: &Staircase) -> Outcome {
    let c = or_cup_or();
    let cfg = StaircaseConfig::default();
    let report = verify_primitive_with(&c, &st.p, 200, 1, 0.15, &cfg.fd).expect("primitive check");
    let delta = report.sup_residual;
    let cauchy = report.details["sup_cauchy_l"];
    let ladder = primitive_ladder(&SuiteParams { samples: 50, ..SuiteParams::default() }, &primitive_ladder_configs())
        .expect("primitive ladder");
    let rungs: Vec<f64> = ladder.iter().map(|r| r.sup_residual).collect();
    let monotone = rungs.windows(2).all(|w| w[1] < w[0]);
    Outcome {
        pass: delta < 0.05 && cauchy < 0.05 && monotone,
        summary: format!(
            "|d(Pc) - c| {delta:.3e} (< 0.05), |L(Pc)| {cauchy:.3e} (< 0.05), ladder [{}] decreasing: {monotone}",
            rungs.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn boundedness(st: &Staircase) -> Outcome {
    let sups = estimate_sup_prefixes(&st.p, &[2000, 4000], 1, 0.05).expect("sup estimate");
    let growth = (sups[1] - sups[0]) / sups[0];
    Outcome {
        pass: growth < 0.05,
        summary: format!("sup over 2000 {:.4}, over 4000 {:.4}, growth {:.2}% (< 5%)", sups[0], sups[1], 100.0 * growth),
    }
}

fn tameness() -> Outcome {
    let params = SuiteParams { samples: 100, ..SuiteParams::default() };
    let (excess, ratio) = tameness_residuals(
        &frobenius_test_function(),
        &TailSpec::default(),
        &LineIntegralSpec::default(),
        &params,
    )
    .expect("tameness");
    let worst = sup(&excess);
    Outcome {
        pass: worst <= 1e-3,
        summary: format!("worst excess over pi |psi_K| {worst:.3e} (<= 1e-3), max ratio to bound {ratio:.4}"),
    }
}

fn group_exactness() -> Outcome {
    let params = SuiteParams { samples: 1000, ..SuiteParams::default() };
    let reports = group_suite(&params).expect("group suite");
    let names = ["iwasawa_recomposition", "cartan_recomposition", "a_normalizes_n", "action_homomorphism"];
    let worst = names.iter().map(|n| find(&reports, n).sup_residual).fold(0.0, f64::max);
    Outcome { pass: worst < 1e-10, summary: format!("worst group residual {worst:.3e} (< 1e-10)") }
}

fn main() {
    let started = Instant::now();
    let staircase = Staircase::build(&or_cup_or(), &StaircaseConfig::default()).expect("staircase build");
    let criteria: Vec<Criterion> = vec![
        ("1 closed form I L I or", Box::new(closed_form_ili_or)),
        ("2 contraction identity", Box::new(contraction_identity)),
        ("3 vector-field commutators", Box::new(commutators)),
        ("4 right inverses", Box::new(right_inverses)),
        ("5 flagship staircase", Box::new(|| flagship_staircase(&staircase))),
        ("6 boundedness witness", Box::new(|| boundedness(&staircase))),
        ("7 tameness bound", Box::new(tameness)),
        ("8 group-layer exactness", Box::new(group_exactness)),
    ];
    let mut failures = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {verdict} [{:.1} s] {}", t.elapsed().as_secs_f64(), outcome.summary);
        if !outcome.pass {
            failures += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.1} s", criteria.len() - failures, criteria.len(), started.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
