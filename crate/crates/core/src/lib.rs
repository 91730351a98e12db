//! Exact symbolic-numeric toolkit for rational (quasi)-exactly-solvable
//! quantum models in invariant coordinates.
//!
//! The crate is organized around one carrier type: a differential operator
//! with multivariate polynomial coefficients over arbitrary-precision
//! rationals ([`exactpoly::DiffOp`]). Model constructors ([`models`]) produce
//! the gauge-rotated Hamiltonians of the O(N), (Z2)^N, Calogero, BC_N, G2,
//! H3 and H4 rational models; [`flags`] realizes their invariant polynomial
//! subspaces as exact matrices; [`algebra`] builds the hidden-algebra
//! generator sets; [`spectra`] extracts exact eigenvalues, QES blocks and
//! commuting integrals; [`xcheck`] ties everything back to the Cartesian
//! Hamiltonians numerically via hyper-dual second derivatives.

pub mod algebra;
pub mod exactpoly;
pub mod flags;
pub mod linalg;
pub mod models;
pub mod spectra;
pub mod xcheck;

use thiserror::Error;

/// Arbitrary-precision rational scalar used everywhere in the crate.
pub type Rational = num::BigRational;

/// Big integer re-export matching [`Rational`].
pub type Integer = num::BigInt;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown model: {0}")]
    UnknownModel(String),
    #[error("flag not preserved: monomial {monomial} maps onto {image_term}")]
    FlagViolation { monomial: String, image_term: String },
    #[error("generator set mark {mark} does not equal basis degree {degree}")]
    MarkMismatch { mark: String, degree: i64 },
    #[error("invariant subspace violated: {0}")]
    InvarianceViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Parses a rational from a `p/q` or integer string.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
