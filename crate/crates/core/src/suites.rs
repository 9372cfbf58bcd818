//! Seeded verification suites and convergence ladders.
//!
//! Every suite evaluates identities of one layer at configuration points drawn
//! from [`configuration_points`] and returns one [`VerificationReport`] per
//! identity, each carrying its declared budget.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::boundary::{cup, k_extend, k_reduce, orientation_cocycle, BoundaryFunction, Codomain};
use crate::cochain::{
    cauchy_l, coboundary, contraction_i, derivative_under_i, flow_derivative, flow_derivative_fn, frobenius_q, FdSpec,
};
use crate::error::{Error, Result};
use crate::group::{map_triple, one_param, CartanCoords, Subgroup};
use crate::quadrature::QuadratureSpec;
use crate::sampling::{configuration_points, random_configuration, random_element, Xorshift64Star};
use crate::scalar::{circle_distance, cis, reduce_angle};
use crate::solvers::{
    canonical_basepoint, cauchy_line_value, integrate_along_a, solve_cauchy_r, solve_frobenius_s, BasepointScheme,
    LineIntegralSpec, TailSpec,
};
use crate::staircase::{
    estimate_sup_prefixes, map_points, verify_primitive_with, ConfigEcho, Staircase, StaircaseConfig, VerificationReport,
};

type F = BoundaryFunction<f64>;
type C64 = Complex<f64>;

/// The suites runnable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Suite {
    /// Group-layer identities, including the boundary action.
    Group,
    /// Contraction identity and differentiation under the integral.
    Contraction,
    /// Real and complex commutator relations of the vector fields.
    Commutators,
    /// Orientation cocycle and cup product, with K-reduction and K-extension.
    Cup,
    /// Right inverses of `Q` and `L`, basepoints and tameness.
    Solvers,
    /// The staircase primitive of `or ∪ or`.
    Staircase,
}

impl Suite {
    /// All suites in execution order.
    pub const ALL: [Suite; 6] =
        [Suite::Group, Suite::Contraction, Suite::Commutators, Suite::Cup, Suite::Solvers, Suite::Staircase];

    /// Lower-case name.
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Contraction => "contraction",
            Suite::Commutators => "commutators",
            Suite::Cup => "cup",
            Suite::Solvers => "solvers",
            Suite::Staircase => "staircase",
        }
    }

    /// Parses a lower-case name.
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Parameters shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SuiteParams {
    /// Seed of the sample points.
    pub seed: u64,
    /// Sample points per identity.
    pub samples: usize,
    /// Pairwise separation of sample points.
    pub margin: f64,
    /// Trapezoid nodes for smooth integrands.
    pub quad_nodes: usize,
    /// Trapezoid nodes for integrands built from `or`.
    pub or_quad_nodes: usize,
    /// Finite-difference step of the suite-level derivatives (`0 < h < 1`).
    pub h: f64,
    /// Configuration of the staircase suite.
    pub staircase: StaircaseConfig,
    /// Separation of the staircase residual points.
    pub staircase_margin: f64,
    /// Separation of the boundedness-witness points.
    pub sup_margin: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            seed: 1,
            samples: 100,
            margin: 0.1,
            quad_nodes: 256,
            or_quad_nodes: 1024,
            h: 1e-4,
            staircase: StaircaseConfig::default(),
            staircase_margin: 0.15,
            sup_margin: 0.05,
        }
    }
}

impl SuiteParams {
    /// Checks the ranges of every field.
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidSpec("samples must be at least 1".into()));
        }
        for (name, m) in [("margin", self.margin), ("staircase margin", self.staircase_margin), ("sup margin", self.sup_margin)] {
            if !(0.0..0.5).contains(&m) {
                return Err(Error::InvalidSpec(format!("{name} = {m} must lie in [0, 0.5)")));
            }
        }
        QuadratureSpec::trapezoid(self.quad_nodes).validate()?;
        QuadratureSpec::trapezoid(self.or_quad_nodes).validate()?;
        if !(self.h > 0.0 && self.h < 1.0) {
            return Err(Error::InvalidSpec(format!("h = {} must lie in (0, 1)", self.h)));
        }
        self.staircase.validate()
    }

    fn fd(&self) -> FdSpec {
        FdSpec::with_step(self.h)
    }

    fn echo(&self) -> ConfigEcho {
        let mut echo = ConfigEcho::new();
        echo.insert("margin".into(), self.margin.to_string());
        echo.insert("quad.nodes".into(), self.quad_nodes.to_string());
        echo.insert("quad.or_nodes".into(), self.or_quad_nodes.to_string());
        echo.insert("fd.h".into(), format!("{:e}", self.h));
        echo
    }

    fn staircase_echo(&self) -> ConfigEcho {
        let mut echo = self.staircase.echo();
        echo.insert("margin".into(), self.staircase_margin.to_string());
        echo.insert("sup_margin".into(), self.sup_margin.to_string());
        echo
    }

    fn points(&self, salt: u64, arity: usize) -> Result<Vec<Vec<f64>>> {
        configuration_points(self.seed ^ salt, self.samples, arity, self.margin)
    }

    fn report(&self, name: &str, residuals: &[f64], budget: f64) -> VerificationReport {
        VerificationReport::from_residuals(name, residuals, self.seed, self.echo()).with_budget(budget)
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Group => group_suite(params),
        Suite::Contraction => contraction_suite(params),
        Suite::Commutators => commutator_suite(params),
        Suite::Cup => cup_suite(params),
        Suite::Solvers => solver_suite(params),
        Suite::Staircase => staircase_suite(params),
    }
}

/// Runs every suite in order.
pub fn run_all(params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        out.extend(run_suite(suite, params)?);
    }
    Ok(out)
}

fn real(arity: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> F {
    BoundaryFunction::real_fn(arity, f).expect("supported arity")
}

fn diff(f: &F, g: &F, z: &[f64]) -> Result<f64> {
    Ok((f.eval(z)? - g.eval(z)?).norm())
}

/// Residuals of every group-layer identity over `samples` random elements.
pub fn group_suite(params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let mut rng = Xorshift64Star::new(params.seed);
    let n = params.samples;
    let mut res: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for _ in 0..n {
        let g = random_element::<f64>(&mut rng);
        let h = random_element::<f64>(&mut rng);
        let theta = rng.angle::<f64>();
        let (s, t): (f64, f64) = (rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        res.entry("determinant").or_default().push((g.det() - 1.0).abs());
        res.entry("iwasawa_recomposition").or_default().push(g.iwasawa().recompose().distance(&g));
        res.entry("cartan_recomposition").or_default().push(g.cartan().recompose().distance(&g));
        res.entry("action_homomorphism")
            .or_default()
            .push(circle_distance((g * h).act_angle(theta), g.act_angle(h.act_angle(theta))));
        res.entry("inverse").or_default().push((g * g.inverse()).distance(&crate::group::GroupElement::identity()));
        let conj = one_param(Subgroup::A, s) * one_param(Subgroup::N, t) * one_param(Subgroup::A, -s);
        res.entry("a_normalizes_n").or_default().push(conj.distance(&one_param(Subgroup::N, (-s).exp() * t)));
        let additivity = Subgroup::ALL
            .iter()
            .map(|&k| (one_param(k, s) * one_param(k, t)).distance(&one_param(k, s + t)))
            .fold(0.0f64, f64::max);
        res.entry("one_parameter_additivity").or_default().push(additivity);
        let src = random_configuration::<f64>(&mut rng, 3, 0.05)?;
        let dst = g.act_config(&src);
        let m = map_triple([src[0], src[1], src[2]], [dst[0], dst[1], dst[2]])?;
        let round_trip = (0..3).map(|j| circle_distance(m.act_angle(src[j]), dst[j])).fold(0.0f64, f64::max);
        res.entry("map_triple_round_trip").or_default().push(round_trip);
    }
    let budgets = [
        ("determinant", 1e-12),
        ("iwasawa_recomposition", 1e-10),
        ("cartan_recomposition", 1e-10),
        ("action_homomorphism", 1e-10),
        ("inverse", 1e-12),
        ("a_normalizes_n", 1e-10),
        ("one_parameter_additivity", 1e-12),
        ("map_triple_round_trip", 1e-9),
    ];
    let mut echo = ConfigEcho::new();
    echo.insert("elements".into(), n.to_string());
    Ok(budgets
        .iter()
        .map(|&(name, budget)| {
            VerificationReport::from_residuals(name, &res[name], params.seed, echo.clone()).with_budget(budget)
        })
        .collect())
}

/// Smooth arity-3 test function of the contraction suite.
pub fn smooth_test_function() -> F {
    real(3, |z| (z[0] - 2.0 * z[1]).cos() + (z[1] + z[2]).sin() * z[0].cos() + 0.3 * (2.0 * z[2] - z[0]).sin())
}

/// Discontinuous arity-3 test function: `or` weighted by a smooth factor, which is not a cocycle.
pub fn discontinuous_test_function() -> F {
    let or = orientation_cocycle::<f64>();
    BoundaryFunction::new(3, Codomain::real(), move |z: &[f64]| {
        let smooth = 1.0 + 0.5 * (z[0] - 2.0 * z[2]).cos();
        Ok(or.eval(z)? * smooth + 0.25 * (z[1] - z[0]).sin())
    })
    .expect("arity 3")
    .with_singular_margin(crate::boundary::DEFAULT_SINGULAR_MARGIN)
}

/// Residual `|Iδf + δIf − f|` at `points`.
pub fn contraction_identity_residuals(f: &F, quad: &QuadratureSpec, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let lhs = contraction_i(&coboundary(f)?, quad)?.add(&coboundary(&contraction_i(f, quad)?)?)?;
    map_points(points, |z| diff(&lhs, f, z))
}

/// Closed form `((θ_0 − θ_1) mod 2π)/π − 1` of `I or`.
pub fn contraction_of_or_closed_form(theta0: f64, theta1: f64) -> f64 {
    reduce_angle(theta0 - theta1) / std::f64::consts::PI - 1.0
}

/// Contraction identities, including differentiation under the integral.
pub fn contraction_suite(params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let or = orientation_cocycle::<f64>();
    let smooth_quad = QuadratureSpec::trapezoid(params.quad_nodes);
    let or_quad = QuadratureSpec::trapezoid(params.or_quad_nodes);
    let pts3 = params.points(0x11, 3)?;
    let pts2 = params.points(0x12, 2)?;
    let smooth = contraction_identity_residuals(&smooth_test_function(), &smooth_quad, &pts3)?;
    let or_res = contraction_identity_residuals(&or, &or_quad, &pts3)?;
    let i_or = contraction_i(&or, &or_quad)?;
    let closed = map_points(&pts2, |z| Ok((i_or.eval_real(z)? - contraction_of_or_closed_form(z[0], z[1])).abs()))?;

    let fd = params.fd();
    let gauss = QuadratureSpec::arc_gauss(512);
    let i_or_gauss = contraction_i(&or, &gauss)?;
    let mut cross = Vec::new();
    for field in [Subgroup::A, Subgroup::N] {
        let under = derivative_under_i(&or, field, &gauss, &fd)?;
        cross.extend(map_points(&pts2, |z| {
            Ok((under.eval(z)? - flow_derivative(&i_or_gauss, field, z, &fd)?).norm())
        })?);
    }
    let cos_eta = real(2, |z| z[0].cos());
    let under_cos = derivative_under_i(&cos_eta, Subgroup::A, &smooth_quad, &fd)?;
    let correction = contraction_i(&real(2, |z| z[0].cos() * z[0].cos()), &smooth_quad)?;
    let cos_res = map_points(&pts2, |z| {
        let full = under_cos.eval(&z[1..])?.norm();
        let corr = (correction.eval_real(&z[1..])? - 0.5).abs();
        Ok(full.max(corr))
    })?;
    let disc = discontinuous_test_function();
    let disc_res = contraction_identity_residuals(&disc, &or_quad, &pts3)?;
    let nodes = params.or_quad_nodes as f64;
    let mut reports = vec![
        params.report("contraction_identity_smooth", &smooth, 2e-6),
        params.report("contraction_identity_or", &or_res, 2e-2),
        params.report("contraction_identity_discontinuous", &disc_res, 2e-2),
        params.report("contraction_of_or_closed_form", &closed, 4.0 / nodes),
        params.report("derivative_under_contraction_or", &cross, 2e-4),
        params.report("derivative_under_contraction_cos", &cos_res, 1e-7),
    ];
    reports[4].config_echo.insert("cross_check.quad".into(), "arc-gauss 512".into());
    Ok(reports)
}

/// Budget of `[L, L̄] + L − L̄ = 0`. The left side equals
/// `−2i([L_A, L_N] − L_N)`, so it is twice the budget of the real relations.
pub const COMPLEX_COMMUTATOR_BUDGET: f64 = 2e-5;

/// First Fourier modes in one angle and in one angle difference, the
/// trigonometric test family of the commutator suite.
pub fn commutator_test_functions() -> Vec<F> {
    vec![
        real(1, |z| z[0].cos()),
        real(1, |z| z[0].sin()),
        real(2, |z| (z[0] - z[1]).cos()),
        real(2, |z| (z[0] - z[1]).sin()),
    ]
}

fn derivative(f: &F, field: Subgroup, h: f64) -> Result<F> {
    flow_derivative_fn(f, field, &FdSpec::with_step(h))
}

/// `X(Y f) − Y(X f)` with outer step `h` and inner step `h/10`.
fn commutator(f: &F, x: Subgroup, y: Subgroup, h: f64) -> Result<F> {
    let inner = h / 10.0;
    let xy = derivative(&derivative(f, y, inner)?, x, h)?;
    let yx = derivative(&derivative(f, x, inner)?, y, h)?;
    xy.sub(&yx)
}

/// `L g = L_A g + i L_N g` (`conj = false`) or `L̄ g = L_A g − i L_N g` for complex `g`.
fn complex_field(g: &F, conj: bool, h: f64) -> Result<F> {
    let i = C64::new(0.0, if conj { -1.0 } else { 1.0 });
    let a = derivative(g, Subgroup::A, h)?;
    let n = derivative(g, Subgroup::N, h)?;
    BoundaryFunction::linear_combination(&[(C64::new(1.0, 0.0), &a), (i, &n)])
}

/// Residuals of `[L_K, L_A] = L_K − L_N`, `[L_K, L_N] = L_A`, `[L_A, L_N] = L_N`,
/// and `[L, L̄] + L − L̄ = 0` for `f` at the configuration points `pts`.
pub fn commutator_residuals(f: &F, pts: &[Vec<f64>], h: f64) -> Result<[Vec<f64>; 4]> {
    let inner = h / 10.0;
    let single = |field| derivative(f, field, inner);
    let (lk, la, ln) = (single(Subgroup::K)?, single(Subgroup::A)?, single(Subgroup::N)?);
    let l_inner = complex_field(f, false, inner)?;
    let lbar_inner = complex_field(f, true, inner)?;
    let bracket = complex_field(&lbar_inner, false, h)?.sub(&complex_field(&l_inner, true, h)?)?;
    let relations = [
        (commutator(f, Subgroup::K, Subgroup::A, h)?, lk.sub(&ln)?),
        (commutator(f, Subgroup::K, Subgroup::N, h)?, la),
        (commutator(f, Subgroup::A, Subgroup::N, h)?, ln),
        (bracket.add(&l_inner)?.sub(&lbar_inner)?, BoundaryFunction::zero(f.arity())?),
    ];
    let mut out: [Vec<f64>; 4] = Default::default();
    for (slot, (lhs, rhs)) in out.iter_mut().zip(&relations) {
        *slot = map_points(pts, |z| diff(lhs, rhs, z))?;
    }
    Ok(out)
}

/// Commutator relations of the fundamental vector fields over the
/// trigonometric test family; each report carries `C = sup / h²`.
pub fn commutator_suite(params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let h = params.h;
    let names = ["commutator_k_a", "commutator_k_n", "commutator_a_n", "complex_commutator"];
    let budgets = [1e-5, 1e-5, 1e-5, COMPLEX_COMMUTATOR_BUDGET];
    let mut residuals: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (idx, f) in commutator_test_functions().iter().enumerate() {
        let pts = params.points(0x21 + idx as u64, f.arity())?;
        for (acc, res) in residuals.iter_mut().zip(commutator_residuals(f, &pts, h)?) {
            acc.extend(res);
        }
    }
    Ok(names
        .iter()
        .zip(budgets)
        .zip(&residuals)
        .map(|((name, budget), res)| {
            let mut r = params.report(name, res, budget);
            r.config_echo.insert("fd.inner_h".into(), format!("{:e}", h / 10.0));
            let c = r.sup_residual / (h * h);
            r.with_detail("constant_c", c)
        })
        .collect())
}

/// Identities of the orientation cocycle and the cup product, with K-reduction and K-extension.
pub fn cup_suite(params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let or = orientation_cocycle::<f64>();
    let mut rng = Xorshift64Star::new(params.seed ^ 0x31);
    let mut alternating = Vec::new();
    let mut invariance = Vec::new();
    let mut cocycle = Vec::new();
    let d_or = coboundary(&or)?;
    for _ in 0..params.samples {
        let z = random_configuration::<f64>(&mut rng, 4, 1e-3)?;
        let v = or.eval_real(&z[..3])?;
        let swapped = or.eval_real(&[z[1], z[0], z[2]])?;
        let swapped2 = or.eval_real(&[z[0], z[2], z[1]])?;
        alternating.push((v + swapped).abs().max((v + swapped2).abs()));
        let g = random_element::<f64>(&mut rng);
        invariance.push((or.eval_real(&g.act_config(&z[..3]))? - v).abs());
        cocycle.push(d_or.eval_real(&z)?.abs());
    }

    let f = real(2, |z| (z[0] - 2.0 * z[1]).cos() + z[1].sin());
    let g = real(3, |z| (z[0] + z[2]).sin() * z[1].cos());
    let h = real(2, |z| (z[0] * 3.0).cos() - z[1].sin());
    let pts4 = params.points(0x32, 4)?;
    let pts5 = params.points(0x33, 5)?;
    let left = cup(&cup(&f, &g)?, &h)?;
    let right = cup(&f, &cup(&g, &h)?)?;
    let assoc = map_points(&pts5, |z| diff(&left, &right, z))?;

    let one1 = BoundaryFunction::constant(1, 1.0)?;
    let fg = cup(&f, &g)?;
    let unit = map_points(&pts4, |z| {
        let a = diff(&cup(&f, &one1)?, &f, &z[..2])?;
        let b = diff(&cup(&one1, &g)?, &g, &z[..3])?;
        Ok(a.max(b))
    })?;

    let fd = params.fd();
    let l_fg = cauchy_l(&fg, &fd)?;
    let leibniz = cup(&cauchy_l(&f, &fd)?, &g)?.add(&cup(&f, &cauchy_l(&g, &fd)?)?)?;
    let leibniz_res = map_points(&pts4, |z| diff(&l_fg, &leibniz, z))?;

    let quad = QuadratureSpec::trapezoid(params.quad_nodes);
    let i_fg = contraction_i(&fg, &quad)?;
    let if_g = cup(&contraction_i(&f, &quad)?, &g)?;
    let pts3 = params.points(0x34, 3)?;
    let i_res = map_points(&pts3, |z| diff(&i_fg, &if_g, z))?;
    let k_res = map_points(&pts3, |z| diff(&k_reduce(&fg)?, &cup(&k_reduce(&f)?, &g)?, z))?;

    let psi = real(2, |z| (z[0] - 0.5 * z[1]).sin() + 2.0);
    let mut equiv = Vec::new();
    let mut trips = Vec::new();
    for mu in [-1, 0, 1, 2] {
        let ext = k_extend(&psi, mu)?;
        let back = k_reduce(&ext)?;
        let mut r = Xorshift64Star::new(params.seed ^ 0x35 ^ (mu as u64));
        for z in &pts3 {
            let t = r.angle::<f64>();
            let shifted: Vec<f64> = z.iter().map(|x| x + t).collect();
            equiv.push((ext.eval(&shifted)? - cis(mu as f64 * t) * ext.eval(z)?).norm());
            trips.push(diff(&back, &psi, &z[..2])?);
            let weighted = k_extend(&k_reduce(&ext)?, mu)?;
            trips.push(diff(&weighted, &ext, z)?);
        }
    }
    Ok(vec![
        params.report("orientation_alternating", &alternating, 0.0),
        params.report("orientation_g_invariant", &invariance, 0.0),
        params.report("orientation_cocycle", &cocycle, 0.0),
        params.report("cup_associative", &assoc, 1e-12),
        params.report("cup_unit", &unit, 1e-14),
        params.report("cup_cauchy_leibniz", &leibniz_res, 1e-6),
        params.report("cup_contraction", &i_res, 1e-10),
        params.report("cup_k_reduction", &k_res, 1e-14),
        params.report("k_extension_equivariance", &equiv, 1e-10),
        params.report("k_reduction_round_trips", &trips, 1e-12),
    ])
}

/// Smooth K-invariant arity-3 test function for the Cauchy solver.
pub fn cauchy_test_function() -> F {
    real(3, |z| {
        let (x, y) = (z[1] - z[0], z[2] - z[0]);
        x.cos() + 0.5 * (y - 2.0 * x).sin() + 0.25 * (2.0 * y).cos()
    })
    .with_codomain(Codomain::real_invariant())
}

/// Smooth K-invariant arity-2 test function for the Frobenius solver.
pub fn frobenius_test_function() -> F {
    real(2, |z| 1.0 + 0.5 * (z[1] - z[0]).cos() + 0.25 * (2.0 * (z[1] - z[0])).sin())
        .with_codomain(Codomain::real_invariant())
}

/// The or-derived `ψ` of the worked staircase, `ψ(θ_0, θ_1) = (1 − x/π)/π` with `x = θ_1 − θ_0 mod 2π`.
pub fn worked_psi() -> F {
    let pi = std::f64::consts::PI;
    real(2, move |z| {
        let x = reduce_angle(z[1] - z[0]);
        if x == 0.0 {
            0.0
        } else {
            (1.0 - x / pi) / pi
        }
    })
    .with_codomain(Codomain::real_invariant())
    .with_singular_margin(crate::boundary::DEFAULT_SINGULAR_MARGIN)
}

/// `sup |ψ_K|` for a K-invariant arity-2 `ψ`, on a grid of `4096` points.
pub fn k_reduced_sup(psi: &F) -> Result<f64> {
    let n = 4096;
    let mut best = 0.0f64;
    for j in 1..n {
        let x = std::f64::consts::TAU * j as f64 / n as f64;
        best = best.max(psi.eval(&[0.0, x])?.norm());
    }
    Ok(best)
}

/// Residual `max(0, |∫_0^T Re(Sψ)(a_t.z) dt| − π ‖ψ_K‖_∞)` at `samples` pairs `(T, z)` with `T ∈ [−20, 20]`.
pub fn tameness_residuals(psi: &F, tail: &TailSpec, line: &LineIntegralSpec, params: &SuiteParams) -> Result<(Vec<f64>, f64)> {
    let s = solve_frobenius_s(psi, tail)?;
    let bound = std::f64::consts::PI * k_reduced_sup(psi)?;
    let pts = params.points(0x41, psi.arity())?;
    let mut rng = Xorshift64Star::new(params.seed ^ 0x42);
    let times: Vec<f64> = (0..pts.len()).map(|_| rng.uniform(-20.0, 20.0)).collect();
    let pairs: Vec<Vec<f64>> = pts.iter().zip(&times).map(|(z, &t)| [vec![t], z.clone()].concat()).collect();
    let values = map_points(&pairs, |tz| Ok(integrate_along_a(&s, &tz[1..], tz[0], line)?.abs()))?;
    Ok((values.iter().map(|v| (v - bound).max(0.0)).collect(), values.iter().fold(0.0f64, |m, v| m.max(v / bound))))
}

/// Right inverses of `Q` and `L`, with checks of the basepoint scheme and of tameness.
pub fn solver_suite(params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let fd = params.fd();
    let tail = TailSpec::default();
    let line = LineIntegralSpec::default();
    let scheme = BasepointScheme::default();
    let pts2 = params.points(0x51, 2)?;
    let pts3 = params.points(0x52, 3)?;

    let psi = frobenius_test_function();
    let s = solve_frobenius_s(&psi, &tail)?;
    let qs = frobenius_q(&s, &fd)?;
    let frob = map_points(&pts2, |z| diff(&qs, &psi, z))?;
    let worked = worked_psi();
    let qs_worked = frobenius_q(&solve_frobenius_s(&worked, &tail)?, &fd)?;
    let frob_worked = map_points(&pts2, |z| diff(&qs_worked, &worked, z))?;
    let s_reduced = k_reduce(&s)?;
    let imaginary = map_points(&pts2, |z| Ok(s_reduced.eval(&z[..1])?.re.abs()))?;
    let s_one = solve_frobenius_s(&BoundaryFunction::constant(1, 1.0)?, &tail)?;
    let s_one_res = map_points(&pts2, |z| Ok((s_one.eval(&z[..1])? - C64::new(0.0, 1.0) * cis(z[0])).norm()))?;

    let p = cauchy_test_function();
    let lp = cauchy_l(&p, &fd)?;
    let r = solve_cauchy_r(&lp, &scheme, &line)?;
    let lr = cauchy_l(&r, &fd)?;
    let right_inverse = map_points(&pts3, |z| diff(&lr, &lp, z))?;
    let values = map_points(&pts3, |z| {
        let (b, _) = canonical_basepoint(z, &scheme)?;
        Ok((r.eval_real(z)? - (p.eval_real(z)? - p.eval_real(&b)?)).abs())
    })?;
    let mut rng = Xorshift64Star::new(params.seed ^ 0x53);
    let shifted: Vec<Vec<f64>> = pts3.iter().map(|z| [z.clone(), vec![rng.angle::<f64>()]].concat()).collect();
    let k_inv = map_points(&shifted, |zt| {
        let (z, t) = (&zt[..3], zt[3]);
        let rotated: Vec<f64> = z.iter().map(|x| x + t).collect();
        Ok((r.eval_real(&rotated)? - r.eval_real(z)?).abs())
    })?;
    let cartan_res = map_points(&pts3, |z| {
        let (b, g) = canonical_basepoint(z, &scheme)?;
        let c = g.cartan();
        let base = cauchy_line_value(&lp, &b, &c, &line)?;
        let wrapped = CartanCoords { t_k_left: c.t_k_left + std::f64::consts::TAU, t: c.t, t_k_right: c.t_k_right - std::f64::consts::TAU };
        let flipped = CartanCoords {
            t_k_left: c.t_k_left + std::f64::consts::PI,
            t: -c.t,
            t_k_right: c.t_k_right - std::f64::consts::PI,
        };
        let mut worst = 0.0f64;
        for variant in [wrapped, flipped] {
            if variant.recompose().distance(&g) > 1e-10 {
                return Err(Error::InvalidSpec("Cartan variant does not recompose".into()));
            }
            worst = worst.max((cauchy_line_value(&lp, &b, &variant, &line)? - base).abs());
        }
        Ok(worst)
    })?;
    let mut rng = Xorshift64Star::new(params.seed ^ 0x54);
    let mut orbit = Vec::new();
    let mut vanishing = Vec::new();
    for z in &pts3 {
        let g0 = random_element::<f64>(&mut rng);
        let (b, g) = canonical_basepoint(z, &scheme)?;
        let (b2, _) = canonical_basepoint(&g0.act_config(z), &scheme)?;
        let moved = g.act_config(&b);
        let back = moved.iter().zip(z).map(|(x, y)| circle_distance(*x, *y)).fold(0.0f64, f64::max);
        let same = b.iter().zip(&b2).map(|(x, y)| circle_distance(*x, *y)).fold(0.0f64, f64::max);
        orbit.push(back.max(same));
        vanishing.push(r.eval_real(&b)?.abs());
    }
    let (tame, ratio) = tameness_residuals(&psi, &tail, &line, params)?;
    let mut reports = vec![
        params.report("frobenius_right_inverse_smooth", &frob, 1e-5),
        params.report("frobenius_right_inverse_or_derived", &frob_worked, 1e-3),
        params.report("frobenius_reduction_imaginary", &imaginary, 1e-15),
        params.report("frobenius_constant", &s_one_res, 1e-12),
        params.report("cauchy_right_inverse", &right_inverse, 1e-4),
        params.report("cauchy_solution_values", &values, 1e-6),
        params.report("cauchy_k_invariance", &k_inv, 1e-6),
        params.report("cauchy_cartan_independence", &cartan_res, 1e-8),
        params.report("basepoint_orbit_invariance", &orbit, 1e-8),
        params.report("cauchy_basepoint_vanishing", &vanishing, 0.0),
        params.report("frobenius_tameness", &tame, 1e-3).with_detail("max_ratio_to_bound", ratio),
    ];
    for r in &mut reports {
        r.config_echo.insert("tail.nodes".into(), tail.nodes.to_string());
        r.config_echo.insert("line.nodes_per_unit".into(), line.nodes_per_unit.to_string());
    }
    Ok(reports)
}

/// The cocycle `or ∪ or` of degree 4.
pub fn or_cup_or() -> F {
    let or = orientation_cocycle::<f64>();
    cup(&or, &or).expect("arity 5")
}

/// The cocycle `or ∪ or ∪ or` of degree 6.
pub fn or_cup_or_cup_or() -> F {
    let or = orientation_cocycle::<f64>();
    cup(&or_cup_or(), &or).expect("arity 7")
}

/// Coarse configuration for `or ∪ or ∪ or`: arc-Gauss budget 8, 16 tail
/// nodes and one line node per unit of flow time (at least 4). Each `R_B`
/// value then costs about 2·10⁶ cocycle evaluations.
pub fn degree_six_config() -> StaircaseConfig {
    StaircaseConfig {
        quad: QuadratureSpec::arc_gauss(8),
        tail: TailSpec { t_max: 40.0, nodes: 16, panel_order: 8 },
        line: LineIntegralSpec { nodes_per_unit: 1.0, min_nodes: 4 },
        ..StaircaseConfig::default()
    }
}

/// Staircase identities for `c = or ∪ or`: `δ(Pc) = c`, `L(Pc) = 0`, the
/// intermediate identities `δu = L I c` and `Q u = 0`, the reducible-case
/// identity `(I L I c)_K = (i/π) or_K`, and the boundedness witness.
pub fn staircase_suite(params: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let c = or_cup_or();
    let st = Staircase::build(&c, &params.staircase)?;
    let echo = params.staircase_echo();
    let seed = params.seed;
    let with_echo = |r: VerificationReport, budget: f64| {
        let mut r = r.with_budget(budget);
        r.config_echo = echo.clone();
        r
    };
    let primitive = verify_primitive_with(&c, &st.p, params.samples, seed, params.staircase_margin, &params.staircase.fd)?;
    let cauchy = VerificationReport {
        identity_name: "cauchy_of_primitive".into(),
        sup_residual: primitive.details["sup_cauchy_l"],
        mean_residual: primitive.details["mean_cauchy_l"],
        ..primitive.clone()
    };
    let intermediate_pts = configuration_points::<f64>(seed ^ 0x61, params.samples.min(50), st.n, params.staircase_margin)?;
    let du = coboundary(&st.u)?;
    let delta_u = map_points(&intermediate_pts, |z| diff(&du, &st.lic, z))?;
    let qu = frobenius_q(&st.u, &params.staircase.fd)?;
    let q_u = map_points(&intermediate_pts, |z| Ok(qu.eval(&z[..st.n - 1])?.norm()))?;
    let or_k = k_reduce(&orientation_cocycle::<f64>())?;
    let ilic_k = k_reduce(&st.ilic)?;
    let factor = C64::new(0.0, -std::f64::consts::PI);
    let reducible = map_points(&intermediate_pts, |z| {
        let w = &z[..st.n - 2];
        Ok((ilic_k.eval(w)? * factor - or_k.eval(w)?).norm())
    })?;
    let sups = estimate_sup_prefixes(&st.p, &[params.samples, 2 * params.samples], seed, params.sup_margin)?;
    let growth = if sups[0] > 0.0 { (sups[1] - sups[0]) / sups[0] } else { 0.0 };
    let mut bounded = VerificationReport::from_residuals("boundedness_witness", &[growth], seed, echo.clone());
    bounded.samples = 2 * params.samples;
    let bounded = bounded.with_detail("sup_at_samples", sups[0]).with_detail("sup_at_double_samples", sups[1]);
    let zero = BoundaryFunction::zero(5)?;
    let p_zero = crate::staircase::primitive_p(&zero, &params.staircase)?;
    let zero_res = map_points(&intermediate_pts, |z| Ok(p_zero.eval(z)?.norm()))?;
    let mut reports = vec![
        with_echo(primitive, 0.05),
        with_echo(cauchy, 0.05),
        with_echo(VerificationReport::from_residuals("intermediate_delta_u", &delta_u, seed ^ 0x61, ConfigEcho::new()), 1e-4),
        with_echo(VerificationReport::from_residuals("intermediate_q_u", &q_u, seed ^ 0x61, ConfigEcho::new()), 1e-3),
        with_echo(VerificationReport::from_residuals("reducible_ilic_reduction", &reducible, seed ^ 0x61, ConfigEcho::new()), 1e-6),
        with_echo(bounded, 0.05),
        with_echo(VerificationReport::from_residuals("zero_cocycle_primitive", &zero_res, seed ^ 0x61, ConfigEcho::new()), 1e-10),
    ];
    if let Some(tail) = st.psi_table_tail {
        for r in &mut reports {
            r.details.insert("psi_table_tail".into(), tail);
        }
    }
    Ok(reports)
}

/// One rung of a convergence ladder.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LadderRow {
    /// Name of the refined parameter.
    pub parameter: String,
    /// Its value on this rung.
    pub value: f64,
    /// Largest residual.
    pub sup_residual: f64,
    /// Mean residual.
    pub mean_residual: f64,
    /// Additional named columns.
    pub details: BTreeMap<String, f64>,
}

/// Empirical orders `log2(e_k / e_{k+1})` between consecutive rungs that double the parameter.
pub fn empirical_orders(rows: &[LadderRow]) -> Vec<f64> {
    rows.windows(2).map(|w| (w[0].sup_residual / w[1].sup_residual).ln() / (w[1].value / w[0].value).ln()).collect()
}

/// Trapezoid error of `I or` against its closed form at each `N`, with the
/// contraction identity residual of [`discontinuous_test_function`] as the
/// `identity_sup` column.
pub fn contraction_ladder(params: &SuiteParams, nodes: &[usize]) -> Result<Vec<LadderRow>> {
    let or = orientation_cocycle::<f64>();
    let f = discontinuous_test_function();
    let pts2 = params.points(0x12, 2)?;
    let pts3 = params.points(0x11, 3)?;
    nodes
        .iter()
        .map(|&n| {
            let quad = QuadratureSpec::trapezoid(n);
            let i_or = contraction_i(&or, &quad)?;
            let closed =
                map_points(&pts2, |z| Ok((i_or.eval_real(z)? - contraction_of_or_closed_form(z[0], z[1])).abs()))?;
            let (sup, mean) = crate::staircase::sup_mean(&closed);
            let (identity, _) = crate::staircase::sup_mean(&contraction_identity_residuals(&f, &quad, &pts3)?);
            Ok(LadderRow {
                parameter: "circle_nodes".into(),
                value: n as f64,
                sup_residual: sup,
                mean_residual: mean,
                details: BTreeMap::from([("identity_sup".to_string(), identity)]),
            })
        })
        .collect()
}

/// The function `I L I or` under `quad`, with `L I or` evaluated by differentiating under the integral.
pub fn ili_or(quad: &QuadratureSpec, fd: &FdSpec) -> Result<F> {
    let or = orientation_cocycle::<f64>();
    let la = derivative_under_i(&or, Subgroup::A, quad, fd)?;
    let ln = derivative_under_i(&or, Subgroup::N, quad, fd)?;
    let lio = BoundaryFunction::linear_combination(&[(C64::new(1.0, 0.0), &la), (C64::new(0.0, 1.0), &ln)])?;
    contraction_i(&lio, quad)
}

/// `|I L I or(θ) − (i/π) e^{iθ}|` at `samples` seeded angles.
pub fn ili_or_residuals(quad: &QuadratureSpec, fd: &FdSpec, samples: usize, seed: u64) -> Result<Vec<f64>> {
    let f = ili_or(quad, fd)?;
    let mut rng = Xorshift64Star::new(seed);
    let angles: Vec<Vec<f64>> = (0..samples).map(|_| vec![rng.angle::<f64>()]).collect();
    map_points(&angles, |z| Ok((f.eval(z)? - C64::new(0.0, 1.0 / std::f64::consts::PI) * cis(z[0])).norm()))
}

/// Closed-form check of `I L I or` on the trapezoid rule with `params.or_quad_nodes`
/// nodes; the value at `θ = 0` is recorded in the details.
pub fn ili_or_report(params: &SuiteParams) -> Result<VerificationReport> {
    let quad = QuadratureSpec::trapezoid(params.or_quad_nodes);
    let fd = params.fd();
    let res = ili_or_residuals(&quad, &fd, params.samples, params.seed)?;
    let at_zero = ili_or(&quad, &fd)?.eval(&[0.0])?;
    Ok(VerificationReport::from_residuals("ili_or_closed_form", &res, params.seed, params.echo())
        .with_budget(5e-3)
        .with_detail("value_at_zero_re", at_zero.re)
        .with_detail("value_at_zero_im", at_zero.im))
}

/// `I L I or` residual under the trapezoid rule at each `N`.
pub fn ili_or_ladder(params: &SuiteParams, nodes: &[usize]) -> Result<Vec<LadderRow>> {
    let fd = params.fd();
    nodes
        .iter()
        .map(|&n| {
            let res = ili_or_residuals(&QuadratureSpec::trapezoid(n), &fd, params.samples, params.seed)?;
            let (sup, mean) = crate::staircase::sup_mean(&res);
            Ok(LadderRow {
                parameter: "circle_nodes".into(),
                value: n as f64,
                sup_residual: sup,
                mean_residual: mean,
                details: BTreeMap::new(),
            })
        })
        .collect()
}

/// Coarse-to-default staircase configurations: arc-Gauss budgets 8, 12, 20, 40
/// with line and table resolutions refined alongside.
pub fn primitive_ladder_configs() -> Vec<StaircaseConfig> {
    [(8usize, 1.0, 12usize), (12, 2.0, 16), (20, 3.0, 24), (40, 4.0, 48)]
        .into_iter()
        .map(|(nodes, per_unit, table)| StaircaseConfig {
            quad: QuadratureSpec::arc_gauss(nodes),
            line: LineIntegralSpec { nodes_per_unit: per_unit, min_nodes: (6.0 * per_unit) as usize },
            table_nodes: table,
            ..StaircaseConfig::default()
        })
        .collect()
}

/// Staircase residual `max(|δ(Pc) − c|, |L(Pc)|)` for `c = or ∪ or` on each configuration.
pub fn primitive_ladder(params: &SuiteParams, configs: &[StaircaseConfig]) -> Result<Vec<LadderRow>> {
    let c = or_cup_or();
    configs
        .iter()
        .map(|cfg| {
            let st = Staircase::build(&c, cfg)?;
            let r = verify_primitive_with(&c, &st.p, params.samples, params.seed, params.staircase_margin, &cfg.fd)?;
            Ok(LadderRow {
                parameter: "circle_nodes".into(),
                value: cfg.quad.circle_nodes as f64,
                sup_residual: r.sup_residual.max(r.details["sup_cauchy_l"]),
                mean_residual: r.mean_residual.max(r.details["mean_cauchy_l"]),
                details: BTreeMap::from([
                    ("sup_coboundary".to_string(), r.sup_residual),
                    ("sup_cauchy_l".to_string(), r.details["sup_cauchy_l"]),
                ]),
            })
        })
        .collect()
}
