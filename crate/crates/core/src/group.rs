//! Arithmetic in PU(1,1) and its boundary action on the circle.
//!
//! An element is the projective class of `g_{a,b} = [[a, b], [b̄, ā]]` with
//! `|a|² − |b|² = 1`. It acts on the unit circle by `z ↦ (a z + b)/(b̄ z + ā)`,
//! which in angular coordinates is [`GroupElement::act_angle`].

use std::fmt;
use std::ops::Mul;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{circle_distance, cis, reduce_angle, Real};

/// One of the three one-parameter subgroups `K`, `A`, `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Subgroup {
    /// Rotations `k_t = [g_{e^{it/2}, 0}]`.
    K,
    /// Hyperbolic flow `a_t = [g_{cosh(−t/2), sinh(−t/2)}]`, fixing `±1`.
    A,
    /// Parabolic flow `n_t = [g_{1+it/2, −it/2}]`, fixing `1`.
    N,
}

impl Subgroup {
    /// All three subgroups in the order `K, A, N`.
    pub const ALL: [Subgroup; 3] = [Subgroup::K, Subgroup::A, Subgroup::N];
}

/// A normalized representative `(a, b)` of an element of PU(1,1).
///
/// The representative is chosen with `Re(a) > 0`, or `Im(a) ≥ 0` when
/// `Re(a) = 0`, so that `(a, b)` and `(−a, −b)` are stored identically.
#[derive(Clone, Copy, PartialEq)]
pub struct GroupElement<T: Real> {
    a: Complex<T>,
    b: Complex<T>,
}

impl<T: Real> fmt::Debug for GroupElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g[a = {} , b = {}]", self.a, self.b)
    }
}

/// Coordinates of the Iwasawa decomposition `g = k_{tK} · a_{tA} · n_{tN}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaCoords<T: Real> {
    /// Rotation angle in `[0, 2π)`.
    pub t_k: T,
    /// Hyperbolic flow time.
    pub t_a: T,
    /// Parabolic flow time.
    pub t_n: T,
}

/// Coordinates of a Cartan decomposition `g = k_{tK_left} · a_T · k_{tK_right}` with `T ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanCoords<T: Real> {
    /// Left rotation angle in `[0, 2π)`.
    pub t_k_left: T,
    /// Hyperbolic flow time, non-negative.
    pub t: T,
    /// Right rotation angle in `[0, 2π)`.
    pub t_k_right: T,
}

impl<T: Real> IwasawaCoords<T> {
    /// Recomposes `k_{tK} · a_{tA} · n_{tN}`.
    pub fn recompose(&self) -> GroupElement<T> {
        one_param(Subgroup::K, self.t_k) * one_param(Subgroup::A, self.t_a) * one_param(Subgroup::N, self.t_n)
    }
}

impl<T: Real> CartanCoords<T> {
    /// Recomposes `k_{tK_left} · a_T · k_{tK_right}`.
    pub fn recompose(&self) -> GroupElement<T> {
        one_param(Subgroup::K, self.t_k_left) * one_param(Subgroup::A, self.t) * one_param(Subgroup::K, self.t_k_right)
    }
}

/// Builds the projective class of `(a, b)/√(|a|² − |b|²)`.
///
/// Fails with [`Error::DegenerateMatrix`] when `|a|² − |b|² ≤ 1e−14`.
pub fn make_element<T: Real>(a: Complex<T>, b: Complex<T>) -> Result<GroupElement<T>> {
    let det = a.norm_sqr() - b.norm_sqr();
    if det.is_nan() || det <= T::lit(1e-14) {
        return Err(Error::DegenerateMatrix { det: det.as_f64() });
    }
    Ok(GroupElement::normalized(a, b, det))
}

/// Returns `k_t`, `a_t` or `n_t` per the explicit matrix formulas.
pub fn one_param<T: Real>(kind: Subgroup, t: T) -> GroupElement<T> {
    let half = t / T::lit(2.0);
    let (a, b) = match kind {
        Subgroup::K => (cis(half), Complex::new(T::zero(), T::zero())),
        Subgroup::A => (Complex::new((-half).cosh(), T::zero()), Complex::new((-half).sinh(), T::zero())),
        Subgroup::N => (Complex::new(T::one(), half), Complex::new(T::zero(), -half)),
    };
    GroupElement::canonical(a, b)
}

/// Group product `g · h`, renormalized.
pub fn compose<T: Real>(g: GroupElement<T>, h: GroupElement<T>) -> GroupElement<T> {
    g * h
}

/// Group inverse.
pub fn inverse<T: Real>(g: GroupElement<T>) -> GroupElement<T> {
    g.inverse()
}

impl<T: Real> GroupElement<T> {
    /// The identity element.
    pub fn identity() -> Self {
        Self::canonical(Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    fn normalized(a: Complex<T>, b: Complex<T>, det: T) -> Self {
        let s = det.sqrt();
        Self::canonical(a / s, b / s)
    }

    fn canonical(a: Complex<T>, b: Complex<T>) -> Self {
        if a.re < T::zero() || (a.re == T::zero() && a.im < T::zero()) {
            Self { a: -a, b: -b }
        } else {
            Self { a, b }
        }
    }

    /// The entry `a` of the normalized representative.
    pub fn a(&self) -> Complex<T> {
        self.a
    }

    /// The entry `b` of the normalized representative.
    pub fn b(&self) -> Complex<T> {
        self.b
    }

    /// `|a|² − |b|²`, equal to one up to rounding.
    pub fn det(&self) -> T {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    /// Group inverse `(ā, −b)`.
    pub fn inverse(&self) -> Self {
        Self::canonical(self.a.conj(), -self.b)
    }

    /// Action on a point `z` of the closed unit disk.
    pub fn act_point(&self, z: Complex<T>) -> Complex<T> {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// Angle of `g.e^{iθ}`, reduced to `[0, 2π)`.
    pub fn act_angle(&self, theta: T) -> T {
        let w = self.act_point(cis(theta));
        reduce_angle(w.im.atan2(w.re))
    }

    /// Applies the action to every angle of a configuration.
    pub fn act_config(&self, z: &[T]) -> Vec<T> {
        z.iter().map(|&t| self.act_angle(t)).collect()
    }

    /// Projective distance `min(‖(a,b) − (a',b')‖, ‖(a,b) + (a',b')‖)` (max-norm on entries).
    pub fn distance(&self, other: &Self) -> T {
        let minus = (self.a - other.a).norm().max((self.b - other.b).norm());
        let plus = (self.a + other.a).norm().max((self.b + other.b).norm());
        minus.min(plus)
    }

    /// Projective equality within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.distance(other) <= tol
    }

    /// Unique Iwasawa coordinates `g = k_{tK} a_{tA} n_{tN}`.
    ///
    /// `a_t` and `n_t` fix the angle `0`, so `tK = g.0`. The remaining factor
    /// `p = k_{−tK} g` fixes `0`; its derivative there is `e^{tA}`, and the
    /// residual `a_{−tA} p` is `n_{tN}`.
    pub fn iwasawa(&self) -> IwasawaCoords<T> {
        let t_k = self.act_angle(T::zero());
        let p = one_param(Subgroup::K, -t_k) * *self;
        let t_a = -T::lit(2.0) * (p.a + p.b).norm().ln();
        let n = one_param(Subgroup::A, -t_a) * p;
        let t_n = n.a.im - n.b.im;
        IwasawaCoords { t_k, t_a, t_n }
    }

    /// A Cartan decomposition `g = k′ a_T k` with `T = 2·asinh|b| ≥ 0`.
    ///
    /// From `k_{α′} a_T k_α = [[e^{i(α′+α)/2} cosh(T/2), −e^{i(α′−α)/2} sinh(T/2)], …]`
    /// the phases are `α′ = arg a + arg(−b)` and `α = arg a − arg(−b)`.
    pub fn cartan(&self) -> CartanCoords<T> {
        let t = T::lit(2.0) * self.b.norm().asinh();
        let arg_a = self.a.im.atan2(self.a.re);
        let (left, right) = if self.b.norm() == T::zero() {
            (T::lit(2.0) * arg_a, T::zero())
        } else {
            let arg_mb = (-self.b.im).atan2(-self.b.re);
            (arg_a + arg_mb, arg_a - arg_mb)
        };
        CartanCoords { t_k_left: reduce_angle(left), t, t_k_right: reduce_angle(right) }
    }
}

impl<T: Real> Mul for GroupElement<T> {
    type Output = GroupElement<T>;

    fn mul(self, h: GroupElement<T>) -> GroupElement<T> {
        let a = self.a * h.a + self.b * h.b.conj();
        let b = self.a * h.b + self.b * h.a.conj();
        let det = a.norm_sqr() - b.norm_sqr();
        GroupElement::normalized(a, b, det)
    }
}

/// Angle of `g.e^{iθ}` in `[0, 2π)`.
pub fn act_angle<T: Real>(g: &GroupElement<T>, theta: T) -> T {
    g.act_angle(theta)
}

/// Unique Iwasawa coordinates of `g`.
pub fn iwasawa<T: Real>(g: &GroupElement<T>) -> IwasawaCoords<T> {
    g.iwasawa()
}

/// A Cartan decomposition of `g` with `T ≥ 0`.
pub fn cartan<T: Real>(g: &GroupElement<T>) -> CartanCoords<T> {
    g.cartan()
}

/// Cyclic orientation of three angles: `+1` counter-clockwise, `−1` clockwise,
/// `0` when two of them are closer than `1e−13`.
pub fn orientation<T: Real>(t0: T, t1: T, t2: T) -> i8 {
    let eps = T::lit(1e-13);
    if circle_distance(t0, t1) < eps || circle_distance(t1, t2) < eps || circle_distance(t0, t2) < eps {
        return 0;
    }
    let (x, y, z) = (reduce_angle(t0), reduce_angle(t1), reduce_angle(t2));
    if (x < y && y < z) || (y < z && z < x) || (z < x && x < y) {
        1
    } else {
        -1
    }
}

/// Complex 2×2 matrix used by the cross-ratio construction.
type Mat2<T> = [[Complex<T>; 2]; 2];

/// The Möbius matrix sending `z0 ↦ 0`, `z1 ↦ 1`, `z2 ↦ ∞`.
fn cross_ratio_matrix<T: Real>(z: [Complex<T>; 3]) -> Mat2<T> {
    let d12 = z[1] - z[2];
    let d10 = z[1] - z[0];
    [[d12, -z[0] * d12], [d10, -z[2] * d10]]
}

fn mat_mul<T: Real>(x: &Mat2<T>, y: &Mat2<T>) -> Mat2<T> {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

fn adjugate<T: Real>(x: &Mat2<T>) -> Mat2<T> {
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

/// Minimal pairwise circle distance accepted by [`map_triple`].
pub const TRIPLE_EPS: f64 = 1e-12;

fn check_triple<T: Real>(t: [T; 3]) -> Result<i8> {
    let widened = [t[0].as_f64(), t[1].as_f64(), t[2].as_f64()];
    let eps = T::lit(TRIPLE_EPS);
    if circle_distance(t[0], t[1]) <= eps || circle_distance(t[1], t[2]) <= eps || circle_distance(t[0], t[2]) <= eps {
        return Err(Error::DegenerateTriple(widened));
    }
    match orientation(t[0], t[1], t[2]) {
        0 => Err(Error::DegenerateTriple(widened)),
        o => Ok(o),
    }
}

/// The unique element sending the angle triple `src` to `dst`.
///
/// Both triples are sent to `(0, 1, ∞)` by cross-ratio matrices; the answer
/// is `M_dst⁻¹ M_src` normalized to determinant one.
pub fn map_triple<T: Real>(src: [T; 3], dst: [T; 3]) -> Result<GroupElement<T>> {
    let o_src = check_triple(src)?;
    let o_dst = check_triple(dst)?;
    if o_src != o_dst {
        return Err(Error::OrientationMismatch { src: o_src, dst: o_dst });
    }
    let ms = cross_ratio_matrix(src.map(cis));
    let md = cross_ratio_matrix(dst.map(cis));
    let m = mat_mul(&adjugate(&md), &ms);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let s = det.sqrt();
    let two = T::lit(2.0);
    let a = (m[0][0] / s + (m[1][1] / s).conj()) / two;
    let b = (m[0][1] / s + (m[1][0] / s).conj()) / two;
    make_element(a, b)
}
