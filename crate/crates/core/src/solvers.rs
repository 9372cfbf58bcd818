//! Integral solution operators: `S` for the Frobenius problem `Q v = ψ` and
//! `R_B` for the Cauchy problem `L p = u` on the kernel of `Q`.

use num_complex::Complex;

use crate::boundary::{in_configuration, BoundaryFunction, Codomain, MAX_ARITY};
use crate::cochain::{frobenius_q, FdSpec};
use crate::error::{Error, Result};
use crate::group::{cartan, inverse, map_triple, one_param, CartanCoords, GroupElement, Subgroup};
use crate::quadrature::{composite_gauss, gauss_on_interval};
use crate::scalar::{cis, reduce_angle, Real};

/// Truncated tail integral `∫_0^{t_max} … e^{−t} dt` by composite Gauss–Legendre.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TailSpec {
    /// Truncation horizon.
    pub t_max: f64,
    /// Total node count, split into panels of `panel_order` nodes.
    pub nodes: usize,
    /// Gauss–Legendre order per panel.
    pub panel_order: usize,
}

impl Default for TailSpec {
    fn default() -> Self {
        Self { t_max: 40.0, nodes: 400, panel_order: 8 }
    }
}

/// Largest `‖ψ‖_∞` for which the truncation bound is guaranteed.
pub const TAIL_PSI_BOUND: f64 = 10.0;

impl TailSpec {
    /// Checks the node counts and `10 · e^{−t_max} ≤ 1e−15`.
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 || self.panel_order == 0 {
            return Err(Error::InvalidSpec("tail nodes and panel order must be positive".into()));
        }
        let truncation = TAIL_PSI_BOUND * (-self.t_max).exp();
        if truncation.is_nan() || truncation > 1e-15 {
            return Err(Error::InvalidSpec(format!("tail t_max = {} leaves a truncation error above 1e-15", self.t_max)));
        }
        Ok(())
    }

    /// Largest sample `|ψ|` for which `|ψ| e^{−t_max} ≤ 1e−15` still holds.
    pub fn sample_bound(&self) -> f64 {
        1e-15 * self.t_max.exp()
    }

    /// Nodes `t_k` with weights `w_k e^{−t_k}`.
    pub fn weighted_nodes<T: Real>(&self) -> Vec<(T, T)> {
        let panels = self.nodes.div_ceil(self.panel_order);
        composite_gauss(panels, self.panel_order, T::zero(), T::lit(self.t_max))
            .into_iter()
            .map(|(t, w)| (t, w * (-t).exp()))
            .collect()
    }
}

/// Canonical orbit representatives: the leading triple of a configuration is
/// moved to a reference triple of matching orientation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BasepointScheme {
    /// Separation required of the leading triple.
    pub margin: f64,
}

impl Default for BasepointScheme {
    fn default() -> Self {
        Self { margin: 1e-6 }
    }
}

impl BasepointScheme {
    /// Reference triple for positively oriented configurations.
    pub fn reference_pos<T: Real>() -> [T; 3] {
        [T::zero(), T::FRAC_PI_2(), T::PI()]
    }

    /// Reference triple for negatively oriented configurations.
    pub fn reference_neg<T: Real>() -> [T; 3] {
        [T::zero(), T::PI(), T::FRAC_PI_2()]
    }

    /// Checks `margin ≥ 0`.
    pub fn validate(&self) -> Result<()> {
        if self.margin.is_nan() || self.margin < 0.0 {
            return Err(Error::InvalidSpec(format!("basepoint margin {} must be non-negative", self.margin)));
        }
        Ok(())
    }
}

/// Gauss–Legendre line integral on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LineIntegralSpec {
    /// Nodes per unit of flow time.
    pub nodes_per_unit: f64,
    /// Minimum node count.
    pub min_nodes: usize,
}

impl Default for LineIntegralSpec {
    fn default() -> Self {
        Self { nodes_per_unit: 32.0, min_nodes: 64 }
    }
}

impl LineIntegralSpec {
    /// `max(min_nodes, ⌈|T| · nodes_per_unit⌉)`.
    pub fn node_count(&self, t: f64) -> usize {
        self.min_nodes.max((t.abs() * self.nodes_per_unit).ceil() as usize)
    }

    /// Checks positivity.
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_unit.is_nan() || self.nodes_per_unit <= 0.0 || self.min_nodes == 0 {
            return Err(Error::InvalidSpec("line integral node counts must be positive".into()));
        }
        Ok(())
    }
}

/// Canonical basepoint `b` and element `g` with `g.b = z`.
///
/// `h = map_triple((z_0, z_1, z_2), reference)`, `b = h.z` (with the leading
/// triple set to the reference exactly) and `g = h⁻¹`.
pub fn canonical_basepoint<T: Real>(z: &[T], scheme: &BasepointScheme) -> Result<(Vec<T>, GroupElement<T>)> {
    if z.len() < 3 {
        return Err(Error::ArityError(format!("basepoints need arity at least 3, got {}", z.len())));
    }
    let lead = [z[0], z[1], z[2]];
    let widened = lead.map(|t| t.as_f64());
    if !in_configuration(&lead, T::lit(scheme.margin)) {
        return Err(Error::DegenerateLeadingTriple(widened));
    }
    let reference = match crate::group::orientation(lead[0], lead[1], lead[2]) {
        1 => BasepointScheme::reference_pos(),
        -1 => BasepointScheme::reference_neg(),
        _ => return Err(Error::DegenerateLeadingTriple(widened)),
    };
    let h = map_triple(lead, reference).map_err(|_| Error::DegenerateLeadingTriple(widened))?;
    let mut b = h.act_config(z);
    b[..3].copy_from_slice(&reference);
    Ok((b, inverse(h)))
}

/// Separation below which a flowed tuple in the tail of `S` counts as collapsed.
///
/// Along `a_t` the arguments converge to a fixed point; once they are this
/// close, functions with a singular margin (the or-derived ones) are taken to
/// vanish there, as everywhere off the configuration space. The neglected
/// weight is below `e^{−23}`.
pub const TAIL_COLLAPSE_SEPARATION: f64 = 1e-10;

/// Solution operator of the Frobenius problem,
/// `(Sψ)(z) = i e^{iθ_0} ∫_0^∞ ψ(0, a_t.(θ_1 − θ_0), …, a_t.(θ_{m−1} − θ_0)) e^{−t} dt`,
/// truncated at `t_max`. The output has weight 1. Tail nodes where the flowed
/// tuple has collapsed (see [`TAIL_COLLAPSE_SEPARATION`]) are skipped for
/// functions with a singular margin.
pub fn solve_frobenius_s<T: Real>(psi: &BoundaryFunction<T>, tail: &TailSpec) -> Result<BoundaryFunction<T>> {
    tail.validate()?;
    if !psi.codomain().is_real() {
        return Err(Error::CodomainMismatch("the Frobenius solver takes a real function".into()));
    }
    let m = psi.arity();
    if m == 0 {
        return Err(Error::ArityError("the Frobenius solver needs arity at least 1".into()));
    }
    let nodes: Vec<(GroupElement<T>, T)> =
        tail.weighted_nodes::<T>().into_iter().map(|(t, w)| (one_param(Subgroup::A, t), w)).collect();
    let bound = T::lit(tail.sample_bound());
    let collapse = if psi.singular_margin() > T::zero() { T::lit(TAIL_COLLAPSE_SEPARATION) } else { T::zero() };
    let g = psi.clone();
    let out = BoundaryFunction::new(m, Codomain::complex(1), move |z: &[T]| {
        let mut shifted = [T::zero(); MAX_ARITY];
        for j in 1..m {
            shifted[j] = reduce_angle(z[j] - z[0]);
        }
        let mut buf = [T::zero(); MAX_ARITY];
        let mut acc = T::zero();
        for (a, w) in &nodes {
            for j in 1..m {
                buf[j] = a.act_angle(shifted[j]);
            }
            if collapse > T::zero() && !in_configuration(&buf[..m], collapse) {
                continue;
            }
            let v = g.eval(&buf[..m])?.re;
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { context: "Frobenius tail integral" });
            }
            if v.abs() > bound {
                return Err(Error::TailBudgetExceeded { value: v.as_f64(), bound: bound.as_f64() });
            }
            acc = acc + *w * v;
        }
        Ok(Complex::new(T::zero(), acc) * cis(z[0]))
    })?
    .with_singular_margin(psi.singular_margin());
    Ok(out)
}

/// `∫_0^{t_end} Re f(a_t.z) dt` by Gauss–Legendre (the integral is signed when `t_end < 0`).
pub fn integrate_along_a<T: Real>(f: &BoundaryFunction<T>, z: &[T], t_end: T, line: &LineIntegralSpec) -> Result<T> {
    let n = line.node_count(t_end.as_f64());
    let mut buf = [T::zero(); MAX_ARITY];
    let m = z.len();
    let mut acc = T::zero();
    for (t, w) in gauss_on_interval(n, T::zero(), t_end) {
        let a = one_param(Subgroup::A, t);
        for j in 0..m {
            buf[j] = a.act_angle(z[j]);
        }
        let v = f.eval(&buf[..m])?.re;
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { context: "Cauchy line integral" });
        }
        acc = acc + w * v;
    }
    Ok(acc)
}

/// `∫_0^T Re u(a_t k.b) dt` for given Cartan coordinates `(k′, T, k)`.
pub fn cauchy_line_value<T: Real>(
    u: &BoundaryFunction<T>,
    b: &[T],
    coords: &CartanCoords<T>,
    line: &LineIntegralSpec,
) -> Result<T> {
    if coords.t.abs() < T::lit(1e-14) {
        return Ok(T::zero());
    }
    let kb: Vec<T> = b.iter().map(|&x| reduce_angle(x + coords.t_k_right)).collect();
    integrate_along_a(u, &kb, coords.t, line)
}

fn cauchy_value<T: Real>(u: &BoundaryFunction<T>, z: &[T], scheme: &BasepointScheme, line: &LineIntegralSpec) -> Result<T> {
    if !in_configuration(z, T::lit(scheme.margin)) {
        return Ok(T::zero());
    }
    let (b, g) = canonical_basepoint(z, scheme)?;
    cauchy_line_value(u, &b, &cartan(&g), line)
}

fn check_cauchy_input<T: Real>(u: &BoundaryFunction<T>, scheme: &BasepointScheme, line: &LineIntegralSpec) -> Result<()> {
    scheme.validate()?;
    line.validate()?;
    if u.arity() < 3 {
        return Err(Error::ArityError(format!("the Cauchy solver needs arity at least 3, got {}", u.arity())));
    }
    if u.codomain().is_real() {
        return Err(Error::CodomainMismatch("the Cauchy solver takes a complex weight-1 function".into()));
    }
    Ok(())
}

/// Solution operator of the Cauchy problem,
/// `(R_B u)(g.b) = ∫_0^T Re u(a_t k.b) dt` with `g = k′ a_T k`, vanishing on
/// basepoints and off the configuration space.
pub fn solve_cauchy_r<T: Real>(
    u: &BoundaryFunction<T>,
    scheme: &BasepointScheme,
    line: &LineIntegralSpec,
) -> Result<BoundaryFunction<T>> {
    check_cauchy_input(u, scheme, line)?;
    let (g, scheme, line) = (u.clone(), *scheme, *line);
    let out = BoundaryFunction::new(u.arity(), Codomain::real_invariant(), move |z: &[T]| {
        Ok(Complex::new(cauchy_value(&g, z, &scheme, &line)?, T::zero()))
    })?
    .with_singular_margin(u.singular_margin());
    Ok(out)
}

/// [`solve_cauchy_r`] with a spot check of `|Q u|` at every evaluation point,
/// failing with [`Error::IntegrabilityViolation`] above `tolerance`.
pub fn solve_cauchy_r_strict<T: Real>(
    u: &BoundaryFunction<T>,
    scheme: &BasepointScheme,
    line: &LineIntegralSpec,
    fd: &FdSpec,
    tolerance: f64,
) -> Result<BoundaryFunction<T>> {
    check_cauchy_input(u, scheme, line)?;
    let q = frobenius_q(u, fd)?;
    let (g, scheme, line) = (u.clone(), *scheme, *line);
    let out = BoundaryFunction::new(u.arity(), Codomain::real_invariant(), move |z: &[T]| {
        if in_configuration(z, T::lit(scheme.margin)) {
            let residual = q.eval(z)?.re.abs().as_f64();
            if residual > tolerance {
                return Err(Error::IntegrabilityViolation { residual, tolerance });
            }
        }
        Ok(Complex::new(cauchy_value(&g, z, &scheme, &line)?, T::zero()))
    })?
    .with_singular_margin(u.singular_margin());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn canonical_basepoint_examples() {
        let scheme = BasepointScheme::default();
        let z = [0.0, FRAC_PI_2, PI, 4.0];
        let (b, g) = canonical_basepoint(&z, &scheme).unwrap();
        assert!(g.approx_eq(&GroupElement::identity(), 1e-14));
        assert!((b[3] - 4.0).abs() < 1e-14);
        let t = 0.6;
        let (b, g) = canonical_basepoint(&[t, FRAC_PI_2 + t, PI + t, 1.0 + t], &scheme).unwrap();
        assert!(g.approx_eq(&one_param(Subgroup::K, t), 1e-14));
        assert!((b[3] - 1.0).abs() < 1e-13);
        assert!(matches!(
            canonical_basepoint(&[0.0, 1e-8, 2.0], &scheme),
            Err(Error::DegenerateLeadingTriple(_))
        ));
    }

    #[test]
    fn tail_spec_validation() {
        assert!(TailSpec::default().validate().is_ok());
        assert!(TailSpec { t_max: 20.0, ..TailSpec::default() }.validate().is_err());
        let total: f64 = TailSpec::default().weighted_nodes::<f64>().iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frobenius_solver_on_constants() {
        let one = BoundaryFunction::<f64>::constant(1, 1.0).unwrap();
        let s = solve_frobenius_s(&one, &TailSpec::default()).unwrap();
        let v = s.eval(&[0.7]).unwrap();
        assert!((v - Complex::new(0.0, 1.0) * cis(0.7)).norm() < 1e-14);
        let zero = BoundaryFunction::<f64>::zero(3).unwrap();
        let s = solve_frobenius_s(&zero, &TailSpec::default()).unwrap();
        assert_eq!(s.eval(&[0.1, 2.0, 4.0]).unwrap().norm(), 0.0);
    }

    #[test]
    fn cauchy_solver_vanishes_on_basepoints_and_zero_data() {
        let u = BoundaryFunction::<f64>::from_fn(3, Codomain::complex(1), |z| cis(z[0]) * (z[1] - z[2]).sin()).unwrap();
        let r = solve_cauchy_r(&u, &BasepointScheme::default(), &LineIntegralSpec::default()).unwrap();
        assert_eq!(r.eval_real(&[0.0, FRAC_PI_2, PI]).unwrap(), 0.0);
        assert_eq!(r.eval_real(&[0.0, PI, FRAC_PI_2]).unwrap(), 0.0);
        assert_eq!(r.eval_real(&[0.0, 0.0, 1.0]).unwrap(), 0.0);
        let zero = BoundaryFunction::<f64>::zero(3).unwrap().with_codomain(Codomain::complex(1));
        let r0 = solve_cauchy_r(&zero, &BasepointScheme::default(), &LineIntegralSpec::default()).unwrap();
        assert_eq!(r0.eval_real(&[0.3, 2.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn solver_arity_checks() {
        let u = BoundaryFunction::<f64>::zero(2).unwrap().with_codomain(Codomain::complex(1));
        assert!(matches!(
            solve_cauchy_r(&u, &BasepointScheme::default(), &LineIntegralSpec::default()),
            Err(Error::ArityError(_))
        ));
    }
}
