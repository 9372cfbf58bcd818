//! The staircase primitive operator `P` and its verification probes.
//!
//! For a bounded G-invariant cocycle `c` on `T^{n+1}` with `n > 2`,
//!
//! ```text
//! u = (Id − δ S I Q)(I L I c),        p = I c − δ R_B u,
//! ```
//!
//! satisfies `δp = c` and `L p = 0`. Degrees: `c` on `T^{n+1}`, `I c` and
//! `L I c` on `Tⁿ`, `I L I c` and `Q(I L I c)` on `T^{n−1}`, `ψ = I Q I L I c`
//! and `Sψ` on `T^{n−2}`, `u` and `R_B u` on `T^{n−1}`, `p` on `Tⁿ`.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use crate::boundary::{BoundaryFunction, KInvariantTable, DEFAULT_CACHE_CAPACITY};
use crate::cochain::{cauchy_l, coboundary, contraction_i, derivative_under_i, frobenius_q, FdSpec};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::quadrature::{QuadratureRule, QuadratureSpec};
use crate::sampling::{configuration_points, random_configuration, random_element, Xorshift64Star};
use crate::scalar::Real;
use crate::solvers::{solve_cauchy_r, solve_frobenius_s, BasepointScheme, LineIntegralSpec, TailSpec};

/// Numeric configuration of the staircase.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct StaircaseConfig {
    /// Contraction rule for every `I` layer.
    pub quad: QuadratureSpec,
    /// Finite differences for `Q` and the `L` probes.
    pub fd: FdSpec,
    /// Tail integral of `S`.
    pub tail: TailSpec,
    /// Line integral of `R_B`.
    pub line: LineIntegralSpec,
    /// Basepoint scheme of `R_B`.
    pub scheme: BasepointScheme,
    /// Chebyshev nodes used to tabulate `ψ` when it has arity 2 (0 evaluates `ψ` directly).
    pub table_nodes: usize,
    /// Entries per memo cache.
    pub cache_capacity: usize,
}

impl Default for StaircaseConfig {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::arc_gauss(40),
            fd: FdSpec::default(),
            tail: TailSpec { t_max: 40.0, nodes: 160, panel_order: 8 },
            line: LineIntegralSpec { nodes_per_unit: 4.0, min_nodes: 24 },
            scheme: BasepointScheme::default(),
            table_nodes: 48,
            cache_capacity: DEFAULT_CACHE_CAPACITY,
        }
    }
}

impl StaircaseConfig {
    /// Validates every component.
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        self.fd.validate()?;
        self.tail.validate()?;
        self.line.validate()?;
        self.scheme.validate()
    }

    /// Flat `key = value` summary used in reports.
    pub fn echo(&self) -> ConfigEcho {
        let rule = match self.quad.rule {
            QuadratureRule::Trapezoid => "trapezoid",
            QuadratureRule::ArcGauss => "arc-gauss",
        };
        [
            ("quad.rule", rule.to_string()),
            ("quad.nodes", self.quad.circle_nodes.to_string()),
            ("fd.h", format!("{:e}", self.fd.h)),
            ("tail.t_max", self.tail.t_max.to_string()),
            ("tail.nodes", self.tail.nodes.to_string()),
            ("tail.panel_order", self.tail.panel_order.to_string()),
            ("line.nodes_per_unit", self.line.nodes_per_unit.to_string()),
            ("line.min_nodes", self.line.min_nodes.to_string()),
            ("basepoint.margin", format!("{:e}", self.scheme.margin)),
            ("table.nodes", self.table_nodes.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// Flat configuration summary echoed into reports.
pub type ConfigEcho = BTreeMap<String, String>;

/// Residual statistics of one checked identity.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VerificationReport {
    /// Name of the identity.
    pub identity_name: String,
    /// Number of sample points.
    pub samples: usize,
    /// Largest residual (non-finite residuals count as infinite).
    pub sup_residual: f64,
    /// Mean residual.
    pub mean_residual: f64,
    /// Seed of the sample points.
    pub seed: u64,
    /// Configuration summary.
    pub config_echo: ConfigEcho,
    /// Declared budget for `sup_residual`, if any.
    pub budget: Option<f64>,
    /// Additional named statistics.
    pub details: BTreeMap<String, f64>,
}

impl VerificationReport {
    /// Builds a report from residuals listed in sample order.
    pub fn from_residuals(name: &str, residuals: &[f64], seed: u64, config_echo: ConfigEcho) -> Self {
        let (sup, mean) = sup_mean(residuals);
        Self {
            identity_name: name.to_string(),
            samples: residuals.len(),
            sup_residual: sup,
            mean_residual: mean,
            seed,
            config_echo,
            budget: None,
            details: BTreeMap::new(),
        }
    }

    /// Attaches a budget.
    pub fn with_budget(mut self, budget: f64) -> Self {
        self.budget = Some(budget);
        self
    }

    /// Adds a named statistic.
    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    /// True when there is no budget or `sup_residual ≤ budget`.
    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.sup_residual <= b)
    }
}

/// `(sup, mean)` of residuals; non-finite entries make both infinite.
pub fn sup_mean(residuals: &[f64]) -> (f64, f64) {
    if residuals.is_empty() {
        return (0.0, 0.0);
    }
    if residuals.iter().any(|r| !r.is_finite()) {
        return (f64::INFINITY, f64::INFINITY);
    }
    let sup = residuals.iter().fold(0.0f64, |m, &r| m.max(r));
    (sup, residuals.iter().sum::<f64>() / residuals.len() as f64)
}

/// Evaluates `probe` at every point in parallel, keeping sample order.
pub fn map_points<T: Real, R: Send>(points: &[Vec<T>], probe: impl Fn(&[T]) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    points.par_iter().map(|z| probe(z)).collect()
}

/// Every intermediate function of the staircase for one cocycle.
#[derive(Debug, Clone)]
pub struct Staircase<T: Real> {
    /// Degree `n`; the cocycle has arity `n + 1`.
    pub n: usize,
    /// `I c` on `Tⁿ`.
    pub ic: BoundaryFunction<T>,
    /// `L I c` on `Tⁿ`, evaluated by differentiating under the integral.
    pub lic: BoundaryFunction<T>,
    /// `I L I c` on `T^{n−1}`.
    pub ilic: BoundaryFunction<T>,
    /// `Q I L I c` on `T^{n−1}`.
    pub q: BoundaryFunction<T>,
    /// `ψ = I Q I L I c` on `T^{n−2}`.
    pub psi: BoundaryFunction<T>,
    /// `Sψ` on `T^{n−2}`.
    pub s: BoundaryFunction<T>,
    /// `u = I L I c − δ S ψ` on `T^{n−1}`.
    pub u: BoundaryFunction<T>,
    /// `R_B u` on `T^{n−1}`.
    pub r: BoundaryFunction<T>,
    /// `p = I c − δ R_B u` on `Tⁿ`.
    pub p: BoundaryFunction<T>,
    /// Coefficient-tail estimate of the `ψ` table, when `ψ` was tabulated.
    pub psi_table_tail: Option<f64>,
}

/// Seed of the cocycle and invariance spot checks run before construction.
pub const PRECHECK_SEED: u64 = 0x5EED_C0C1;

/// Number of spot-check points.
pub const PRECHECK_POINTS: usize = 8;

fn precheck<T: Real>(c: &BoundaryFunction<T>) -> Result<()> {
    let arity = c.arity();
    let mut rng = Xorshift64Star::new(PRECHECK_SEED);
    let delta = coboundary(c)?;
    let mut values = Vec::new();
    let mut cocycle_residual = 0.0f64;
    let mut invariance_residual = 0.0f64;
    for _ in 0..PRECHECK_POINTS {
        let z = random_configuration::<T>(&mut rng, arity + 1, T::lit(0.1))?;
        cocycle_residual = cocycle_residual.max(delta.eval(&z)?.norm().as_f64());
        let w = &z[..arity];
        let g = random_element::<T>(&mut rng);
        let v = c.eval(w)?;
        values.push(v.re.as_f64());
        invariance_residual = invariance_residual.max((c.eval(&g.act_config(w))? - v).norm().as_f64());
    }
    let integer_valued = values.iter().all(|v| v.fract() == 0.0);
    let tolerance = if integer_valued { 1e-8 } else { 1e-5 };
    if cocycle_residual > tolerance {
        return Err(Error::NotCocycle { residual: cocycle_residual, tolerance });
    }
    if invariance_residual > tolerance {
        return Err(Error::NotInvariant { residual: invariance_residual, tolerance });
    }
    Ok(())
}

impl<T: Real> Staircase<T> {
    /// Builds every layer of the staircase for the cocycle `c` of arity `n + 1`.
    pub fn build(c: &BoundaryFunction<T>, cfg: &StaircaseConfig) -> Result<Self> {
        cfg.validate()?;
        let n = c.arity().saturating_sub(1);
        if n <= 2 {
            return Err(Error::DegreeTooSmall { n });
        }
        if !c.codomain().is_real() {
            return Err(Error::CodomainMismatch("the staircase takes a real cocycle".into()));
        }
        precheck(c)?;
        let cap = cfg.cache_capacity;
        let i_unit = Complex::new(T::zero(), T::one());
        let one = Complex::new(T::one(), T::zero());

        let ic = contraction_i(c, &cfg.quad)?.memoized(cap);
        let lic_a = derivative_under_i(c, Subgroup::A, &cfg.quad, &cfg.fd)?;
        let lic_n = derivative_under_i(c, Subgroup::N, &cfg.quad, &cfg.fd)?;
        let lic = BoundaryFunction::linear_combination(&[(one, &lic_a), (i_unit, &lic_n)])?
            .with_codomain(crate::boundary::Codomain::complex(1));
        let ilic = contraction_i(&lic, &cfg.quad)?.memoized(cap);
        let q = frobenius_q(&ilic, &cfg.fd)?;
        let psi_direct = contraction_i(&q, &cfg.quad)?.memoized(cap);
        let (psi, psi_table_tail) = if psi_direct.arity() == 2 && cfg.table_nodes > 0 {
            let table = KInvariantTable::build(&psi_direct, cfg.table_nodes)?;
            let tail = table.tail_estimate().as_f64();
            (table.into_function(&psi_direct)?, Some(tail))
        } else {
            (psi_direct, None)
        };
        let s = solve_frobenius_s(&psi, &cfg.tail)?;
        let u = ilic.sub(&coboundary(&s)?)?.with_codomain(crate::boundary::Codomain::complex(1));
        let r = solve_cauchy_r(&u, &cfg.scheme, &cfg.line)?.memoized(cap);
        let p = ic.sub(&coboundary(&r)?)?.with_codomain(crate::boundary::Codomain::real_invariant());
        Ok(Self { n, ic, lic, ilic, q, psi, s, u, r, p, psi_table_tail })
    }
}

/// The staircase primitive `P c = I c − δ R_B (Id − δ S I Q) I L I c`.
pub fn primitive_p<T: Real>(c: &BoundaryFunction<T>, cfg: &StaircaseConfig) -> Result<BoundaryFunction<T>> {
    Ok(Staircase::build(c, cfg)?.p)
}

/// Checks `δp = c` and `L p = 0` at seeded configuration points.
///
/// The report's residual is `|δp − c|`; the details carry `sup_cauchy_l` and
/// `mean_cauchy_l` for `|L p|`, evaluated at the first `n` angles of each point.
pub fn verify_primitive<T: Real>(
    c: &BoundaryFunction<T>,
    p: &BoundaryFunction<T>,
    samples: usize,
    seed: u64,
    margin: f64,
) -> Result<VerificationReport> {
    verify_primitive_with(c, p, samples, seed, margin, &FdSpec::default())
}

/// [`verify_primitive`] with an explicit finite-difference step for `L p`.
pub fn verify_primitive_with<T: Real>(
    c: &BoundaryFunction<T>,
    p: &BoundaryFunction<T>,
    samples: usize,
    seed: u64,
    margin: f64,
    fd: &FdSpec,
) -> Result<VerificationReport> {
    if p.arity() + 1 != c.arity() {
        return Err(Error::ArityMismatch { primitive: p.arity(), cocycle: c.arity() });
    }
    let dp = coboundary(p)?;
    let lp = cauchy_l(&p.clone().with_codomain(crate::boundary::Codomain::real_invariant()), fd)?;
    let points = configuration_points::<T>(seed, samples, c.arity(), T::lit(margin))?;
    let n = p.arity();
    let pairs = map_points(&points, |z| {
        let r = (dp.eval(z)? - c.eval(z)?).norm().as_f64();
        let l = lp.eval(&z[..n])?.norm().as_f64();
        Ok((r, l))
    })?;
    let (res, cauchy): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let (sup_l, mean_l) = sup_mean(&cauchy);
    let mut echo = ConfigEcho::new();
    echo.insert("margin".into(), margin.to_string());
    echo.insert("fd.h".into(), format!("{:e}", fd.h));
    Ok(VerificationReport::from_residuals("coboundary_of_primitive", &res, seed, echo)
        .with_detail("sup_cauchy_l", sup_l)
        .with_detail("mean_cauchy_l", mean_l))
}

/// `max |f|` over `samples` seeded configuration points with the given margin.
pub fn estimate_sup<T: Real>(f: &BoundaryFunction<T>, samples: usize, seed: u64, margin: f64) -> Result<f64> {
    Ok(*estimate_sup_prefixes(f, &[samples.max(1)], seed, margin)?.first().expect("one prefix"))
}

/// `max |f|` over the first `k` points of one seeded sample sequence, for each `k` in `prefixes`.
pub fn estimate_sup_prefixes<T: Real>(f: &BoundaryFunction<T>, prefixes: &[usize], seed: u64, margin: f64) -> Result<Vec<f64>> {
    let total = prefixes.iter().copied().max().unwrap_or(0);
    let points = configuration_points::<T>(seed, total, f.arity(), T::lit(margin))?;
    let values = map_points(&points, |z| Ok(f.eval(z)?.norm().as_f64()))?;
    Ok(prefixes.iter().map(|&k| sup_mean(&values[..k.min(values.len())]).0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{cup, orientation_cocycle};

    #[test]
    fn degree_and_arity_errors() {
        let or = orientation_cocycle::<f64>();
        assert!(matches!(primitive_p(&or, &StaircaseConfig::default()), Err(Error::DegreeTooSmall { n: 2 })));
        let c = cup(&or, &or).unwrap();
        assert!(matches!(verify_primitive(&c, &or, 1, 0, 0.1), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn precheck_rejects_non_cocycles() {
        let f = BoundaryFunction::<f64>::real_fn(5, |z| (z[0] - z[3]).cos()).unwrap();
        assert!(matches!(primitive_p(&f, &StaircaseConfig::default()), Err(Error::NotCocycle { .. })));
    }

    #[test]
    fn zero_cocycle_has_zero_primitive() {
        let zero = BoundaryFunction::<f64>::zero(5).unwrap();
        let p = primitive_p(&zero, &StaircaseConfig::default()).unwrap();
        for z in configuration_points::<f64>(3, 5, 4, 0.1).unwrap() {
            assert!(p.eval(&z).unwrap().norm() < 1e-10);
        }
        let report = verify_primitive(&zero, &p, 5, 1, 0.1).unwrap();
        assert_eq!(report.sup_residual, 0.0);
    }

    #[test]
    fn sup_of_orientation() {
        let or = orientation_cocycle::<f64>();
        assert_eq!(estimate_sup(&or, 50, 9, 0.01).unwrap(), 1.0);
        assert_eq!(estimate_sup(&BoundaryFunction::<f64>::zero(2).unwrap(), 10, 9, 0.01).unwrap(), 0.0);
    }

    #[test]
    fn report_statistics() {
        let r = VerificationReport::from_residuals("x", &[1.0, 3.0], 5, ConfigEcho::new()).with_budget(2.0);
        assert_eq!((r.sup_residual, r.mean_residual), (3.0, 2.0));
        assert!(!r.within_budget());
        let r = VerificationReport::from_residuals("x", &[1.0, f64::NAN], 5, ConfigEcho::new());
        assert!(r.sup_residual.is_infinite());
    }
}
