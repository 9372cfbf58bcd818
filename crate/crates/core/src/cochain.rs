//! The calculus layer: coboundary and contraction, flow derivatives, and the
//! Cauchy and Frobenius operators.
//!
//! The fundamental vector fields act diagonally on all arguments,
//! `L_K = Σ ∂_j`, `L_A = Σ sin θ_j ∂_j`, `L_N = Σ (1 − cos θ_j) ∂_j`, and are
//! evaluated by central differences along the flows `k_t`, `a_t`, `n_t`.

use num_complex::Complex;

use crate::boundary::{BoundaryFunction, Codomain, ValueKind, MAX_ARITY};
use crate::error::{Error, Result};
use crate::group::{one_param, GroupElement, Subgroup};
use crate::quadrature::QuadratureSpec;
use crate::scalar::Real;

/// Finite-difference scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FdScheme {
    /// `(f(φ_h z) − f(φ_{−h} z)) / 2h`.
    Central2,
}

/// Finite-difference configuration.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FdSpec {
    /// Step `h`, with `0 < h < 0.1`.
    pub h: f64,
    /// Scheme.
    pub scheme: FdScheme,
}

impl Default for FdSpec {
    fn default() -> Self {
        Self { h: 1e-4, scheme: FdScheme::Central2 }
    }
}

impl FdSpec {
    /// Central differences with step `h`.
    pub fn with_step(h: f64) -> Self {
        Self { h, scheme: FdScheme::Central2 }
    }

    /// Checks `0 < h < 0.1`.
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h < 0.1) {
            return Err(Error::InvalidSpec(format!("fd step h = {} must lie in (0, 0.1)", self.h)));
        }
        Ok(())
    }
}

/// Velocity `v(θ)` of the fundamental vector field of a subgroup.
pub fn velocity<T: Real>(field: Subgroup, theta: T) -> T {
    match field {
        Subgroup::K => T::one(),
        Subgroup::A => theta.sin(),
        Subgroup::N => T::one() - theta.cos(),
    }
}

/// Derivative `v′(θ)` of the velocity.
pub fn velocity_derivative<T: Real>(field: Subgroup, theta: T) -> T {
    match field {
        Subgroup::K => T::zero(),
        Subgroup::A => theta.cos(),
        Subgroup::N => theta.sin(),
    }
}

/// The pair of flow maps `φ_{±h}` of one subgroup.
#[derive(Debug, Clone, Copy)]
pub struct FlowStep<T: Real> {
    field: Subgroup,
    h: T,
    forward: GroupElement<T>,
    backward: GroupElement<T>,
}

impl<T: Real> FlowStep<T> {
    /// Flow maps at times `±h`.
    pub fn new(field: Subgroup, h: T) -> Self {
        Self { field, h, forward: one_param(field, h), backward: one_param(field, -h) }
    }

    /// Writes `φ_{±h}(z)` (diagonal action) into `out`.
    pub fn apply(&self, forward: bool, z: &[T], out: &mut [T]) {
        match self.field {
            Subgroup::K => {
                let t = if forward { self.h } else { -self.h };
                for (o, &x) in out.iter_mut().zip(z) {
                    *o = x + t;
                }
            }
            _ => {
                let g = if forward { &self.forward } else { &self.backward };
                for (o, &x) in out.iter_mut().zip(z) {
                    *o = g.act_angle(x);
                }
            }
        }
    }

    /// Central difference of `f` at `z`. Declared G-invariant functions give exactly zero.
    pub fn derivative(&self, f: &BoundaryFunction<T>, z: &[T]) -> Result<Complex<T>> {
        if f.is_g_invariant() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let m = z.len();
        let mut buf = [T::zero(); MAX_ARITY];
        self.apply(true, z, &mut buf[..m]);
        let fp = f.eval(&buf[..m])?;
        self.apply(false, z, &mut buf[..m]);
        let fm = f.eval(&buf[..m])?;
        let d = (fp - fm) / (self.h + self.h);
        if !(d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::NonFiniteSample { context: "flow derivative" });
        }
        Ok(d)
    }
}

fn step<T: Real>(field: Subgroup, fd: &FdSpec) -> FlowStep<T> {
    FlowStep::new(field, T::lit(fd.h))
}

/// Homogeneous coboundary `(δf)(z_0, …, z_m) = Σ_j (−1)^j f(z_0, …, ẑ_j, …, z_m)`.
pub fn coboundary<T: Real>(f: &BoundaryFunction<T>) -> Result<BoundaryFunction<T>> {
    let m = f.arity();
    if m == 0 {
        return Err(Error::ArityError("coboundary needs arity at least 1".into()));
    }
    let g = f.clone();
    let out = BoundaryFunction::new(m + 1, f.codomain(), move |z: &[T]| {
        let mut buf = [T::zero(); MAX_ARITY];
        let mut acc = Complex::new(T::zero(), T::zero());
        for j in 0..=m {
            buf[..j].copy_from_slice(&z[..j]);
            buf[j..m].copy_from_slice(&z[j + 1..]);
            let v = g.eval(&buf[..m])?;
            acc = if j % 2 == 0 { acc + v } else { acc - v };
        }
        Ok(acc)
    })?
    .with_singular_margin(f.singular_margin());
    Ok(if f.is_g_invariant() { out.assume_g_invariant() } else { out })
}

fn check_finite<T: Real>(v: Complex<T>, eta: T) -> Result<Complex<T>> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::QuadratureOverflow { angle: eta.as_f64() })
    }
}

/// Cochain contraction `(I f)(z_0, …, z_{m−1}) = (1/2π) ∫ f(η, z_0, …, z_{m−1}) dη`.
pub fn contraction_i<T: Real>(f: &BoundaryFunction<T>, quad: &QuadratureSpec) -> Result<BoundaryFunction<T>> {
    quad.validate()?;
    let m = match f.arity() {
        0 | 1 => return Err(Error::ArityError(format!("contraction needs arity at least 2, got {}", f.arity()))),
        a => a - 1,
    };
    let (g, quad) = (f.clone(), *quad);
    let out = BoundaryFunction::new(m, f.codomain(), move |z: &[T]| {
        let mut buf = [T::zero(); MAX_ARITY];
        buf[1..=m].copy_from_slice(z);
        let mut acc = Complex::new(T::zero(), T::zero());
        quad.for_each_node(z, |eta, w| {
            buf[0] = eta;
            acc = acc + check_finite(g.eval(&buf[..=m])?, eta)? * w;
            Ok(())
        })?;
        Ok(acc)
    })?
    .with_singular_margin(f.singular_margin());
    Ok(out)
}

/// Flow derivative `L_X f(z)` by central differences along the flow of `field`.
pub fn flow_derivative<T: Real>(f: &BoundaryFunction<T>, field: Subgroup, z: &[T], fd: &FdSpec) -> Result<Complex<T>> {
    if z.len() != f.arity() {
        return Err(Error::ArityError(format!("expected {} arguments, got {}", f.arity(), z.len())));
    }
    step(field, fd).derivative(f, z)
}

/// The function `L_X f`, evaluated by central differences.
pub fn flow_derivative_fn<T: Real>(f: &BoundaryFunction<T>, field: Subgroup, fd: &FdSpec) -> Result<BoundaryFunction<T>> {
    let codomain = match field {
        Subgroup::K => f.codomain(),
        _ => Codomain { kind: f.codomain().kind, weight: None },
    };
    if f.is_g_invariant() {
        return Ok(BoundaryFunction::zero(f.arity())?.with_codomain(codomain));
    }
    let (g, st) = (f.clone(), step::<T>(field, fd));
    let out = BoundaryFunction::new(f.arity(), codomain, move |z: &[T]| st.derivative(&g, z))?
        .with_singular_margin(f.singular_margin());
    Ok(out)
}

/// Cauchy operator `L f = L_A f + i L_N f` for real `f`; tagged weight 1 when `f` is K-invariant.
pub fn cauchy_l<T: Real>(f: &BoundaryFunction<T>, fd: &FdSpec) -> Result<BoundaryFunction<T>> {
    if !f.codomain().is_real() {
        return Err(Error::CodomainMismatch("the Cauchy operator takes a real function".into()));
    }
    let weight = if f.codomain().weight == Some(0) { Some(1) } else { None };
    let codomain = Codomain { kind: ValueKind::Complex, weight };
    if f.is_g_invariant() {
        return Ok(BoundaryFunction::zero(f.arity())?.with_codomain(codomain));
    }
    let g = f.clone();
    let (sa, sn) = (step::<T>(Subgroup::A, fd), step::<T>(Subgroup::N, fd));
    let out = BoundaryFunction::new(f.arity(), codomain, move |z: &[T]| {
        let da = sa.derivative(&g, z)?;
        let dn = sn.derivative(&g, z)?;
        Ok(da + dn * Complex::new(T::zero(), T::one()))
    })?
    .with_singular_margin(f.singular_margin());
    Ok(out)
}

/// Frobenius operator `Q u = u♭ − L_A u♭ + L_N u♯` where `u = u♯ + i u♭`.
pub fn frobenius_q<T: Real>(u: &BoundaryFunction<T>, fd: &FdSpec) -> Result<BoundaryFunction<T>> {
    let weight = if u.codomain().weight == Some(1) { Some(0) } else { None };
    let codomain = Codomain { kind: ValueKind::Real, weight };
    let g = u.clone();
    let (sa, sn) = (step::<T>(Subgroup::A, fd), step::<T>(Subgroup::N, fd));
    let out = BoundaryFunction::new(u.arity(), codomain, move |z: &[T]| {
        let v = g.eval(z)?;
        let da = sa.derivative(&g, z)?;
        let dn = sn.derivative(&g, z)?;
        Ok(Complex::new(v.im - da.im + dn.re, T::zero()))
    })?
    .with_singular_margin(u.singular_margin());
    Ok(out)
}

/// `L_X (I f)` by differentiating under the integral:
/// `L_X I f = I(L_X f) + (1/2π) ∫ v_X′(η) f(η, …) dη`,
/// with `v_A′ = cos`, `v_N′ = sin` and `v_K′ = 0`.
pub fn derivative_under_i<T: Real>(
    f: &BoundaryFunction<T>,
    field: Subgroup,
    quad: &QuadratureSpec,
    fd: &FdSpec,
) -> Result<BoundaryFunction<T>> {
    quad.validate()?;
    let m = match f.arity() {
        0 | 1 => return Err(Error::ArityError(format!("contraction needs arity at least 2, got {}", f.arity()))),
        a => a - 1,
    };
    let codomain = match field {
        Subgroup::K => f.codomain(),
        _ => Codomain { kind: f.codomain().kind, weight: None },
    };
    let (g, quad, st) = (f.clone(), *quad, step::<T>(field, fd));
    let out = BoundaryFunction::new(m, codomain, move |z: &[T]| {
        let mut buf = [T::zero(); MAX_ARITY];
        buf[1..=m].copy_from_slice(z);
        let mut acc = Complex::new(T::zero(), T::zero());
        quad.for_each_node(z, |eta, w| {
            buf[0] = eta;
            let point = &buf[..=m];
            let value = g.eval(point)? * velocity_derivative(field, eta) + st.derivative(&g, point)?;
            acc = acc + check_finite(value, eta)? * w;
            Ok(())
        })?;
        Ok(acc)
    })?
    .with_singular_margin(f.singular_margin());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{k_extend, orientation_cocycle};
    use std::f64::consts::PI;

    fn real(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, arity: usize) -> BoundaryFunction<f64> {
        BoundaryFunction::real_fn(arity, f).unwrap()
    }

    #[test]
    fn coboundary_of_constants() {
        let c = BoundaryFunction::<f64>::constant(1, 2.5).unwrap();
        assert_eq!(coboundary(&c).unwrap().eval_real(&[0.1, 0.2]).unwrap(), 0.0);
        let c2 = BoundaryFunction::<f64>::constant(2, 2.5).unwrap();
        assert_eq!(coboundary(&c2).unwrap().eval_real(&[0.1, 0.2, 0.3]).unwrap(), 2.5);
    }

    #[test]
    fn orientation_is_a_cocycle() {
        let d = coboundary(&orientation_cocycle::<f64>()).unwrap();
        assert_eq!(d.eval_real(&[0.1, 1.0, 2.0, 4.0]).unwrap(), 0.0);
        assert_eq!(d.eval_real(&[5.0, 1.0, 2.0, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn contraction_of_constant() {
        let c = BoundaryFunction::<f64>::constant(3, 1.5).unwrap();
        for quad in [QuadratureSpec::trapezoid(16), QuadratureSpec::arc_gauss(16)] {
            let i = contraction_i(&c, &quad).unwrap();
            assert!((i.eval_real(&[0.2, 3.0]).unwrap() - 1.5).abs() < 1e-14);
        }
    }

    #[test]
    fn contraction_of_orientation_matches_arc_length() {
        let i = contraction_i(&orientation_cocycle::<f64>(), &QuadratureSpec::arc_gauss(16)).unwrap();
        for &(a, b) in &[(0.3f64, 2.0f64), (4.0, 1.0), (6.0, 0.1)] {
            let expect = (a - b).rem_euclid(2.0 * PI) / PI - 1.0;
            assert!((i.eval_real(&[a, b]).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn flow_derivative_of_sine_along_a() {
        let f = real(|z| z[0].sin(), 1);
        let d = flow_derivative(&f, Subgroup::A, &[1.0], &FdSpec::with_step(1e-4)).unwrap();
        assert!((d.re - 1f64.sin() * 1f64.cos()).abs() < 1e-7);
    }

    #[test]
    fn flow_derivative_of_weighted_function() {
        let base = real(|z| (z[0]).cos() + 2.0 * (z[1]).sin(), 2);
        let f = k_extend(&base, 2).unwrap();
        let z = [0.3, 1.4, 2.9];
        let d = flow_derivative(&f, Subgroup::K, &z, &FdSpec::default()).unwrap();
        let expect = f.eval(&z).unwrap() * Complex::new(0.0, 2.0);
        assert!((d - expect).norm() < 1e-7);
    }

    #[test]
    fn frobenius_of_rotating_exponential() {
        let u = BoundaryFunction::<f64>::from_fn(1, Codomain::complex(1), |z| {
            Complex::new(0.0, 1.0) * Complex::new(z[0].cos(), z[0].sin())
        })
        .unwrap();
        let q = frobenius_q(&u, &FdSpec::default()).unwrap();
        for &t in &[0.0, 1.0, 2.5, 5.0] {
            assert!((q.eval_real(&[t]).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn extra_term_of_derivative_under_integral() {
        let f = real(|z| z[0].cos(), 2);
        let quad = QuadratureSpec::trapezoid(64);
        let du = derivative_under_i(&f, Subgroup::A, &quad, &FdSpec::default()).unwrap();
        assert!(du.eval_real(&[0.8]).unwrap().abs() < 1e-8);
        let extra = contraction_i(&real(|z| z[0].cos() * z[0].cos(), 2), &quad).unwrap();
        assert!((extra.eval_real(&[0.8]).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cauchy_requires_real_input() {
        let u = BoundaryFunction::<f64>::from_fn(1, Codomain::complex(1), |_| Complex::new(0.0, 1.0)).unwrap();
        assert!(matches!(cauchy_l(&u, &FdSpec::default()), Err(Error::CodomainMismatch(_))));
    }
}
