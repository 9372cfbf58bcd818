//! Error type shared by all operations.

use thiserror::Error;

/// Failure modes of group arithmetic and of function construction or evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The pair `(a, b)` does not satisfy `|a|² − |b|² > 0`.
    #[error("degenerate matrix: |a|^2 - |b|^2 = {det:e} is not positive")]
    DegenerateMatrix { det: f64 },
    /// A triple passed to the 3-transitivity solver has coincident points.
    #[error("degenerate triple {0:?}: points are not pairwise distinct")]
    DegenerateTriple([f64; 3]),
    /// Source and destination triples have opposite cyclic orientation.
    #[error("orientation mismatch: source orientation {src}, destination orientation {dst}")]
    OrientationMismatch { src: i8, dst: i8 },
    /// An operation received a function or point of unsupported arity.
    #[error("arity error: {0}")]
    ArityError(String),
    /// A quadrature node evaluated to a non-finite value.
    #[error("quadrature overflow: non-finite integrand value at node angle {angle}")]
    QuadratureOverflow { angle: f64 },
    /// A finite-difference or line-integral sample was not finite.
    #[error("non-finite sample encountered while evaluating {context}")]
    NonFiniteSample { context: &'static str },
    /// A sampled value exceeds the bound assumed by the tail truncation.
    #[error("tail budget exceeded: |psi| = {value:e} exceeds bound {bound:e}")]
    TailBudgetExceeded { value: f64, bound: f64 },
    /// The first three angles of a configuration are not separated.
    #[error("degenerate leading triple {0:?}")]
    DegenerateLeadingTriple([f64; 3]),
    /// The spot-checked Frobenius residual of a Cauchy datum is too large.
    #[error("integrability violation: |Q u| = {residual:e} exceeds {tolerance:e}")]
    IntegrabilityViolation { residual: f64, tolerance: f64 },
    /// The staircase operator was asked for a degree `n ≤ 2`.
    #[error("degree too small: n = {n}, the staircase needs n > 2")]
    DegreeTooSmall { n: usize },
    /// A candidate primitive does not have arity one less than the cocycle.
    #[error("arity mismatch: primitive arity {primitive}, cocycle arity {cocycle}")]
    ArityMismatch { primitive: usize, cocycle: usize },
    /// The codomain of an input is not the one an operation expects.
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    /// The input to the staircase failed the cocycle spot check.
    #[error("not a cocycle: |delta c| = {residual:e} exceeds {tolerance:e}")]
    NotCocycle { residual: f64, tolerance: f64 },
    /// The input to the staircase failed the invariance spot check.
    #[error("not invariant: |c(g.z) - c(z)| = {residual:e} exceeds {tolerance:e}")]
    NotInvariant { residual: f64, tolerance: f64 },
    /// A numeric-method specification is out of range.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    /// Rejection sampling could not find a configuration point with the requested margin.
    #[error("could not sample {arity} points with pairwise margin {margin}")]
    SamplingFailed { arity: usize, margin: f64 },
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
