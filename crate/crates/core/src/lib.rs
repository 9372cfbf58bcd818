//! Operator calculus on the circle boundary of PU(1,1).
//!
//! The crate builds bounded cochains on tori of circle arguments and the
//! operators acting on them:
//!
//! * [`group`]: PU(1,1) elements with their Iwasawa and Cartan decompositions,
//!   acting 3-transitively on the boundary circle;
//! * [`boundary`]: functions on the m-torus, including the orientation cocycle
//!   and its cup products;
//! * [`cochain`]: coboundary `δ` and contraction `I`, with the Cauchy operator
//!   `L` and the Frobenius operator `Q` built from flow derivatives;
//! * [`solvers`]: the integral solution operators `S` and `R_B`;
//! * [`staircase`]: the primitive operator `P c = I c − δ R_B (Id − δ S I Q) I L I c`;
//! * [`suites`]: seeded verification suites and convergence ladders.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`). The aliases at the crate root fix `f64`, which every
//! documented tolerance assumes.
//!
//! ```
//! use staircase_core::{cochain, orientation_cocycle, QuadratureSpec};
//!
//! let or = orientation_cocycle::<f64>();
//! let i_or = cochain::contraction_i(&or, &QuadratureSpec::arc_gauss(16)).unwrap();
//! // (I or)(θ0, θ1) = ((θ0 − θ1) mod 2π)/π − 1
//! let v = i_or.eval_real(&[2.0, 0.5]).unwrap();
//! assert!((v - (1.5 / std::f64::consts::PI - 1.0)).abs() < 1e-14);
//! ```

pub mod boundary;
pub mod cochain;
pub mod error;
pub mod group;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod solvers;
pub mod staircase;
pub mod suites;

pub use boundary::{cup, in_configuration, k_extend, k_reduce, orientation_cocycle, Codomain, ValueKind};
pub use cochain::{FdScheme, FdSpec};
pub use error::{Error, Result};
pub use group::{map_triple, one_param, Subgroup};
pub use quadrature::{QuadratureRule, QuadratureSpec};
pub use sampling::Xorshift64Star;
pub use scalar::Real;
pub use solvers::{BasepointScheme, LineIntegralSpec, TailSpec};
pub use staircase::{StaircaseConfig, VerificationReport};

/// Complex numbers over `f64`.
pub type Complex64 = num_complex::Complex<f64>;
/// Double-precision group element.
pub type GroupElement = group::GroupElement<f64>;
/// Single-precision group element.
pub type GroupElement32 = group::GroupElement<f32>;
/// Double-precision Iwasawa coordinates.
pub type IwasawaCoords = group::IwasawaCoords<f64>;
/// Double-precision Cartan coordinates.
pub type CartanCoords = group::CartanCoords<f64>;
/// Double-precision boundary function.
pub type BoundaryFunction = boundary::BoundaryFunction<f64>;
/// Single-precision boundary function.
pub type BoundaryFunction32 = boundary::BoundaryFunction<f32>;
/// Double-precision staircase intermediates.
pub type Staircase = staircase::Staircase<f64>;
