//! Functions on the m-torus in angular coordinates.
//!
//! A [`BoundaryFunction`] is a shared evaluator closure tagged with its arity,
//! its codomain (real, or complex with an optional K-weight) and a singular
//! margin. Operations build new functions by closing over existing ones, so a
//! composite operator is an evaluator tree that is only ever evaluated
//! pointwise. Every evaluation reduces its angles to `[0, 2π)` before handing
//! them to the evaluator.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::group::orientation;
use crate::sampling::min_separation;
use crate::scalar::{cis, reduce_angle, Real};

/// Largest supported arity.
pub const MAX_ARITY: usize = 16;

/// Default singular margin for sampling-based tests, in radians.
pub const DEFAULT_SINGULAR_MARGIN: f64 = 1e-3;

/// Angle quantum used for memo-cache keys.
pub const CACHE_QUANTUM: f64 = 1e-12;

/// Default number of entries kept by a memo cache before it is flushed.
pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 16;

/// Pointwise evaluator over reduced angles.
pub trait Evaluator<T: Real>: Send + Sync {
    /// Evaluates at `z`, whose entries are already reduced to `[0, 2π)`.
    fn eval(&self, z: &[T]) -> Result<Complex<T>>;
}

impl<T: Real, F> Evaluator<T> for F
where
    F: Fn(&[T]) -> Result<Complex<T>> + Send + Sync,
{
    fn eval(&self, z: &[T]) -> Result<Complex<T>> {
        self(z)
    }
}

/// Whether values are real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ValueKind {
    /// Imaginary part is identically zero.
    Real,
    /// General complex values.
    Complex,
}

/// Codomain tag: value kind plus an optional declared K-weight `μ`,
/// meaning `f(θ + t) = e^{iμt} f(θ)` for a simultaneous rotation of all arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Codomain {
    /// Real or complex.
    pub kind: ValueKind,
    /// Declared K-weight, if any.
    pub weight: Option<i32>,
}

impl Codomain {
    /// Real values with no declared weight.
    pub const fn real() -> Self {
        Self { kind: ValueKind::Real, weight: None }
    }

    /// Real, K-invariant values (weight 0).
    pub const fn real_invariant() -> Self {
        Self { kind: ValueKind::Real, weight: Some(0) }
    }

    /// Complex values with declared weight `μ`.
    pub const fn complex(weight: i32) -> Self {
        Self { kind: ValueKind::Complex, weight: Some(weight) }
    }

    /// Complex values with no declared weight.
    pub const fn complex_unweighted() -> Self {
        Self { kind: ValueKind::Complex, weight: None }
    }

    /// True for real codomains.
    pub fn is_real(&self) -> bool {
        self.kind == ValueKind::Real
    }
}

/// A function on the m-torus with codomain tag and evaluator.
#[derive(Clone)]
pub struct BoundaryFunction<T: Real> {
    arity: usize,
    codomain: Codomain,
    singular_margin: T,
    g_invariant: bool,
    evaluator: Arc<dyn Evaluator<T>>,
}

impl<T: Real> fmt::Debug for BoundaryFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryFunction")
            .field("arity", &self.arity)
            .field("codomain", &self.codomain)
            .field("singular_margin", &self.singular_margin)
            .field("g_invariant", &self.g_invariant)
            .finish()
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity > MAX_ARITY {
        return Err(Error::ArityError(format!("arity {arity} exceeds the supported maximum {MAX_ARITY}")));
    }
    Ok(())
}

impl<T: Real> BoundaryFunction<T> {
    /// Wraps an evaluator.
    pub fn new(arity: usize, codomain: Codomain, evaluator: impl Evaluator<T> + 'static) -> Result<Self> {
        check_arity(arity)?;
        Ok(Self { arity, codomain, singular_margin: T::zero(), g_invariant: false, evaluator: Arc::new(evaluator) })
    }

    /// Wraps an infallible complex-valued closure.
    pub fn from_fn<F>(arity: usize, codomain: Codomain, f: F) -> Result<Self>
    where
        F: Fn(&[T]) -> Complex<T> + Send + Sync + 'static,
    {
        Self::new(arity, codomain, move |z: &[T]| Ok(f(z)))
    }

    /// Wraps an infallible real-valued closure with no declared weight.
    pub fn real_fn<F>(arity: usize, f: F) -> Result<Self>
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        Self::new(arity, Codomain::real(), move |z: &[T]| Ok(Complex::new(f(z), T::zero())))
    }

    /// The constant real function `c` on the `arity`-torus.
    pub fn constant(arity: usize, c: T) -> Result<Self> {
        let v = Complex::new(c, T::zero());
        Ok(Self::new(arity, Codomain::real_invariant(), move |_: &[T]| Ok(v))?.assume_g_invariant())
    }

    /// The zero function.
    pub fn zero(arity: usize) -> Result<Self> {
        Self::constant(arity, T::zero())
    }

    /// Number of circle arguments.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Codomain tag.
    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    /// Separation below which evaluations are considered off the configuration space.
    pub fn singular_margin(&self) -> T {
        self.singular_margin
    }

    /// Whether the function is declared invariant under the diagonal action of PU(1,1).
    pub fn is_g_invariant(&self) -> bool {
        self.g_invariant
    }

    /// Replaces the singular margin.
    pub fn with_singular_margin(mut self, margin: T) -> Self {
        self.singular_margin = margin;
        self
    }

    /// Replaces the codomain tag.
    pub fn with_codomain(mut self, codomain: Codomain) -> Self {
        self.codomain = codomain;
        self
    }

    /// Declares the function invariant under the diagonal action of PU(1,1)
    /// on configurations. Flow derivatives of such functions are exactly zero
    /// and are not computed by finite differences.
    pub fn assume_g_invariant(mut self) -> Self {
        self.g_invariant = true;
        self
    }

    /// Evaluates at `z` after reducing every angle to `[0, 2π)`.
    #[inline]
    pub fn eval(&self, z: &[T]) -> Result<Complex<T>> {
        if z.len() != self.arity {
            return Err(Error::ArityError(format!("expected {} arguments, got {}", self.arity, z.len())));
        }
        let mut buf = [T::zero(); MAX_ARITY];
        for (slot, &theta) in buf.iter_mut().zip(z) {
            *slot = reduce_angle(theta);
        }
        self.evaluator.eval(&buf[..self.arity])
    }

    /// Real part of [`BoundaryFunction::eval`].
    pub fn eval_real(&self, z: &[T]) -> Result<T> {
        self.eval(z).map(|v| v.re)
    }

    /// Attaches a bounded memo cache keyed by angles quantized to [`CACHE_QUANTUM`].
    pub fn memoized(&self, capacity: usize) -> Self {
        let inner = self.clone();
        let cache = Memo { inner: inner.clone(), capacity: capacity.max(1), table: Mutex::new(HashMap::new()) };
        Self { evaluator: Arc::new(cache), ..inner }
    }

    /// `Σ coefficient · function`, all of one arity.
    pub fn linear_combination(terms: &[(Complex<T>, &BoundaryFunction<T>)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::ArityError("empty linear combination".into()))?.1;
        let arity = first.arity;
        if terms.iter().any(|(_, f)| f.arity != arity) {
            return Err(Error::ArityError("linear combination of functions of different arity".into()));
        }
        let real = terms.iter().all(|(c, f)| f.codomain.is_real() && c.im == T::zero());
        let weight = terms.iter().try_fold(first.codomain.weight, |w, (_, f)| match (w, f.codomain.weight) {
            (Some(a), Some(b)) if a == b => Some(Some(a)),
            _ => None,
        });
        let codomain = Codomain { kind: if real { ValueKind::Real } else { ValueKind::Complex }, weight: weight.flatten() };
        let parts: Vec<(Complex<T>, BoundaryFunction<T>)> = terms.iter().map(|(c, f)| (*c, (*f).clone())).collect();
        let margin = terms.iter().fold(T::zero(), |m, (_, f)| m.max(f.singular_margin));
        let invariant = terms.iter().all(|(_, f)| f.g_invariant);
        let mut out = Self::new(arity, codomain, move |z: &[T]| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (c, f) in &parts {
                acc = acc + *c * f.evaluator.eval(z)?;
            }
            Ok(acc)
        })?
        .with_singular_margin(margin);
        out.g_invariant = invariant;
        Ok(out)
    }

    /// `self − other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        Self::linear_combination(&[(one, self), (-one, other)])
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        Self::linear_combination(&[(one, self), (one, other)])
    }

    /// `c · self`.
    pub fn scale(&self, c: Complex<T>) -> Result<Self> {
        Self::linear_combination(&[(c, self)])
    }
}

struct Memo<T: Real> {
    inner: BoundaryFunction<T>,
    capacity: usize,
    table: Mutex<HashMap<[i64; MAX_ARITY], Complex<T>>>,
}

impl<T: Real> Evaluator<T> for Memo<T> {
    fn eval(&self, z: &[T]) -> Result<Complex<T>> {
        let mut key = [i64::MIN; MAX_ARITY];
        for (k, &theta) in key.iter_mut().zip(z) {
            *k = (theta.as_f64() / CACHE_QUANTUM).round() as i64;
        }
        if let Some(v) = self.table.lock().expect("memo cache lock").get(&key) {
            return Ok(*v);
        }
        let v = self.inner.evaluator.eval(z)?;
        let mut table = self.table.lock().expect("memo cache lock");
        if table.len() >= self.capacity {
            table.clear();
        }
        table.insert(key, v);
        Ok(v)
    }
}

/// True iff every pair of angles in `z` is at circle distance `≥ margin`.
pub fn in_configuration<T: Real>(z: &[T], margin: T) -> bool {
    min_separation(z) >= margin
}

/// The orientation cocycle: `+1` on counter-clockwise triples, `−1` on
/// clockwise ones, `0` when two arguments are closer than `1e−13`.
pub fn orientation_cocycle<T: Real>() -> BoundaryFunction<T> {
    BoundaryFunction::from_fn(3, Codomain::real_invariant(), |z: &[T]| {
        Complex::new(T::lit(f64::from(orientation(z[0], z[1], z[2]))), T::zero())
    })
    .expect("arity 3 is supported")
    .with_singular_margin(T::lit(DEFAULT_SINGULAR_MARGIN))
    .assume_g_invariant()
}

/// Cup product `(f ∪ g)(z_0, …, z_{p+q−2}) = f(z_0, …, z_{p−1}) · g(z_{p−1}, …, z_{p+q−2})`.
pub fn cup<T: Real>(f: &BoundaryFunction<T>, g: &BoundaryFunction<T>) -> Result<BoundaryFunction<T>> {
    let (p, q) = (f.arity, g.arity);
    if p == 0 || q == 0 {
        return Err(Error::ArityError(format!("cup needs positive arities, got {p} and {q}")));
    }
    let kind = if f.codomain.is_real() && g.codomain.is_real() { ValueKind::Real } else { ValueKind::Complex };
    let weight = match (f.codomain.weight, g.codomain.weight) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let (fe, ge) = (f.evaluator.clone(), g.evaluator.clone());
    let mut out = BoundaryFunction::new(p + q - 1, Codomain { kind, weight }, move |z: &[T]| {
        Ok(fe.eval(&z[..p])? * ge.eval(&z[p - 1..])?)
    })?
    .with_singular_margin(f.singular_margin.max(g.singular_margin));
    out.g_invariant = f.g_invariant && g.g_invariant;
    Ok(out)
}

/// K-reduction `f_K(z_1, …, z_m) = f(0, z_1, …, z_m)`.
pub fn k_reduce<T: Real>(f: &BoundaryFunction<T>) -> Result<BoundaryFunction<T>> {
    if f.arity == 0 {
        return Err(Error::ArityError("k_reduce needs arity at least 1".into()));
    }
    let m = f.arity - 1;
    let fe = f.evaluator.clone();
    let codomain = Codomain { kind: f.codomain.kind, weight: if f.g_invariant { Some(0) } else { None } };
    let out = BoundaryFunction::new(m, codomain, move |z: &[T]| {
        let mut buf = [T::zero(); MAX_ARITY];
        buf[1..=m].copy_from_slice(z);
        fe.eval(&buf[..=m])
    })?
    .with_singular_margin(f.singular_margin);
    Ok(out)
}

/// K-extension with weight `μ`: `e^{iμθ_0} · f(θ_1 − θ_0, …, θ_m − θ_0)`.
pub fn k_extend<T: Real>(f: &BoundaryFunction<T>, mu: i32) -> Result<BoundaryFunction<T>> {
    let m = f.arity;
    check_arity(m + 1)?;
    let fe = f.evaluator.clone();
    let codomain = if mu == 0 && f.codomain.is_real() { Codomain::real_invariant() } else { Codomain::complex(mu) };
    let muf = T::lit(f64::from(mu));
    let out = BoundaryFunction::new(m + 1, codomain, move |z: &[T]| {
        let mut buf = [T::zero(); MAX_ARITY];
        for j in 0..m {
            buf[j] = reduce_angle(z[j + 1] - z[0]);
        }
        let v = fe.eval(&buf[..m])?;
        Ok(if mu == 0 { v } else { cis(muf * z[0]) * v })
    })?
    .with_singular_margin(f.singular_margin);
    Ok(out)
}

/// Chebyshev interpolant of the K-reduction of a K-invariant arity-2 function.
///
/// A K-invariant `f(θ_0, θ_1)` depends only on `x = θ_1 − θ_0 mod 2π`. The table
/// samples `x ↦ f(0, x)` at Chebyshev points of the first kind on `[0, 2π]`
/// and evaluates the interpolant by Clenshaw recurrence.
#[derive(Debug, Clone)]
pub struct KInvariantTable<T: Real> {
    re: Vec<T>,
    im: Vec<T>,
}

impl<T: Real> KInvariantTable<T> {
    /// Samples `f` at `nodes` Chebyshev points.
    pub fn build(f: &BoundaryFunction<T>, nodes: usize) -> Result<Self> {
        if f.arity != 2 {
            return Err(Error::ArityError(format!("K-invariant table needs arity 2, got {}", f.arity)));
        }
        if nodes < 2 {
            return Err(Error::InvalidSpec("K-invariant table needs at least 2 nodes".into()));
        }
        let n = nodes;
        let nf = T::lit(n as f64);
        let pi = T::PI();
        let angles: Vec<T> = (0..n).map(|j| pi * T::lit((2 * j + 1) as f64) / (T::lit(2.0) * nf)).collect();
        let samples = angles
            .iter()
            .map(|&a| f.eval(&[T::zero(), pi * (T::one() + a.cos())]))
            .collect::<Result<Vec<_>>>()?;
        let mut re = vec![T::zero(); n];
        let mut im = vec![T::zero(); n];
        for k in 0..n {
            let kf = T::lit(k as f64);
            let (mut sr, mut si) = (T::zero(), T::zero());
            for (a, v) in angles.iter().zip(&samples) {
                let w = (kf * *a).cos();
                sr = sr + w * v.re;
                si = si + w * v.im;
            }
            let scale = if k == 0 { T::one() / nf } else { T::lit(2.0) / nf };
            re[k] = sr * scale;
            im[k] = si * scale;
        }
        Ok(Self { re, im })
    }

    /// Largest magnitude among the last three coefficients, a proxy for the interpolation error.
    pub fn tail_estimate(&self) -> T {
        let n = self.re.len();
        (n.saturating_sub(3)..n).fold(T::zero(), |m, k| m.max(Complex::new(self.re[k], self.im[k]).norm()))
    }

    /// Value of the interpolant at `x ∈ [0, 2π]`.
    pub fn eval_at(&self, x: T) -> Complex<T> {
        let s = x / T::PI() - T::one();
        Complex::new(clenshaw(&self.re, s), clenshaw(&self.im, s))
    }

    /// Wraps the table as a K-invariant arity-2 function. Exactly coincident
    /// arguments are delegated to `fallback`.
    pub fn into_function(self, fallback: &BoundaryFunction<T>) -> Result<BoundaryFunction<T>> {
        let fb = fallback.evaluator.clone();
        let eps = T::lit(1e-13);
        let table = self;
        let out = BoundaryFunction::new(2, fallback.codomain, move |z: &[T]| {
            let x = reduce_angle(z[1] - z[0]);
            if x < eps || T::two_pi() - x < eps {
                fb.eval(z)
            } else {
                Ok(table.eval_at(x))
            }
        })?
        .with_singular_margin(fallback.singular_margin);
        Ok(out)
    }
}

fn clenshaw<T: Real>(c: &[T], s: T) -> T {
    let two_s = s + s;
    let (mut b1, mut b2) = (T::zero(), T::zero());
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + two_s * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + s * b1 - b2
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn configuration_membership() {
        assert!(in_configuration(&[0.0, PI], 0.1));
        assert!(!in_configuration(&[0.0, 0.0, PI], 0.01));
        assert!(!in_configuration(&[0.0, 1e-3, PI], 1e-2));
    }

    #[test]
    fn orientation_values() {
        let or = orientation_cocycle::<f64>();
        assert_eq!(or.eval_real(&[0.0, FRAC_PI_2, PI]).unwrap(), 1.0);
        assert_eq!(or.eval_real(&[0.0, PI, FRAC_PI_2]).unwrap(), -1.0);
        assert_eq!(or.eval_real(&[0.0, 0.0, PI]).unwrap(), 0.0);
        assert_eq!(or.eval_real(&[2.0 * PI, 1e-14, PI]).unwrap(), 0.0);
    }

    #[test]
    fn cup_of_orientations() {
        let or = orientation_cocycle::<f64>();
        let c = cup(&or, &or).unwrap();
        assert_eq!(c.arity(), 5);
        let z = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, FRAC_PI_4];
        let expect = or.eval_real(&z[..3]).unwrap() * or.eval_real(&z[2..]).unwrap();
        assert_eq!(c.eval_real(&z).unwrap(), expect);
        assert_eq!(expect, 1.0);
        assert!(c.is_g_invariant());
        assert!(matches!(cup(&BoundaryFunction::<f64>::zero(0).unwrap(), &or), Err(Error::ArityError(_))));
    }

    #[test]
    fn reduction_and_extension() {
        let or = orientation_cocycle::<f64>();
        let r = k_reduce(&or).unwrap();
        assert_eq!(r.eval_real(&[1.0, 2.0]).unwrap(), or.eval_real(&[0.0, 1.0, 2.0]).unwrap());
        let one = BoundaryFunction::<f64>::constant(0, 1.0).unwrap();
        let e = k_extend(&one, 1).unwrap();
        assert!((e.eval(&[0.7]).unwrap() - cis(0.7)).norm() < 1e-15);
        assert_eq!(e.codomain(), Codomain::complex(1));
        let k = k_reduce(&BoundaryFunction::<f64>::constant(2, 3.0).unwrap()).unwrap();
        assert_eq!(k.eval_real(&[0.4]).unwrap(), 3.0);
    }

    #[test]
    fn memo_returns_identical_values() {
        let f = BoundaryFunction::<f64>::real_fn(2, |z| (z[0] - 2.0 * z[1]).sin()).unwrap();
        let m = f.memoized(4);
        for i in 0..10 {
            let z = [0.1 * i as f64, 0.3];
            assert_eq!(m.eval(&z).unwrap(), f.eval(&z).unwrap());
            assert_eq!(m.eval(&z).unwrap(), f.eval(&z).unwrap());
        }
    }

    #[test]
    fn arity_is_checked() {
        let or = orientation_cocycle::<f64>();
        assert!(matches!(or.eval(&[0.0, 1.0]), Err(Error::ArityError(_))));
        assert!(BoundaryFunction::<f64>::zero(MAX_ARITY + 1).is_err());
    }

    #[test]
    fn chebyshev_table_reproduces_smooth_invariant() {
        let f = BoundaryFunction::<f64>::real_fn(2, |z| (z[1] - z[0]).cos() + 0.3 * (2.0 * (z[1] - z[0])).sin()).unwrap();
        let table = KInvariantTable::build(&f, 40).unwrap();
        assert!(table.tail_estimate() < 1e-12);
        let t = table.into_function(&f).unwrap();
        for &(a, b) in &[(0.3, 2.0), (5.0, 1.0), (1.0, 1.0 + 1e-9)] {
            assert!((t.eval(&[a, b]).unwrap() - f.eval(&[a, b]).unwrap()).norm() < 1e-12);
        }
    }
}
