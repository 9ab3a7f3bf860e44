//! Graded invariants of reduced plane curves.
//!
//! Given a homogeneous `f ∈ k[x, y, z]` defining a reduced curve `C`, this
//! crate computes the dimensions of the Jacobian syzygy module `AR(f)`, the
//! minimal syzygy degree `mdr(f)`, the Hilbert function of the Milnor algebra
//! `M(f) = S/J_f`, the global Tjurina number `τ(C)`, and the graded pieces of
//! `N(f) = I_f/J_f` together with `ν(C) = max n(f)_k`. Everything reduces to
//! ranks of integer matrices, computed modulo random word-sized primes with a
//! multi-prime agreement check.
//!
//! On top of the invariants sit the closed-form bounds and characterizations
//! ([`classify`]) and generators for curve families and line arrangements
//! ([`atlas`]).

pub mod atlas;
pub mod classify;
pub mod field;
pub mod graded;
pub mod jacobian;
pub mod matrix;
pub mod poly;

pub use atlas::{Arrangement, IntersectionLattice};
pub use classify::{ClassLabel, Classification, DpwReport, SplittingType};
pub use field::PrimeField;
pub use graded::GradedMap;
pub use jacobian::{analyze, AnalysisConfig, CurveAnalysis};
pub use matrix::ExactMatrix;
pub use poly::{graded_dim, parse_poly, HomogPoly, Monomial};

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] poly::ParseError),
    #[error("polynomial is not homogeneous: terms of degree {first} and {second}")]
    NonHomogeneous { first: u32, second: u32 },
    #[error("the zero polynomial does not define a curve")]
    ZeroPolynomial,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("requested degree {requested} exceeds the cap {cap}")]
    DegreeCap { requested: i64, cap: i64 },
    #[error("curve is not reduced (repeated factor detected on a generic line)")]
    NotReduced,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Input errors are the caller's fault; everything else is a failed
    /// cross-check.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

/// `n(n-1)/2` as a polynomial in `n`, valid for every integer.
///
/// This is the continuation used by Euler characteristics of line bundles on
/// the plane, e.g. `binom2(-1) = 1`.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}
