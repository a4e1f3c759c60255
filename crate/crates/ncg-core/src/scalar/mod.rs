//! Exact scalar arithmetic: the field ℚ(i) of Gaussian rationals and the
//! involutive ring ℚ(i)[q, q⁻¹] of Laurent scalars in a formal parameter q.
//!
//! Both types have a canonical text form (whitespace-insensitive to parse,
//! deterministic to print) used by the JSON encodings of every other module:
//!
//! ```
//! use ncg_core::scalar::{GaussianRational, LaurentScalar};
//!
//! let z: GaussianRational = "3/2-1/3*i".parse().unwrap();
//! assert_eq!(z.to_string(), "3/2-1/3*i");
//!
//! let s: LaurentScalar = "(1)*q^-1 + (2) + (1)*q".parse().unwrap();
//! assert_eq!(s, s.star());
//! ```

mod gaussian;
mod laurent;

pub use gaussian::GaussianRational;
pub use laurent::LaurentScalar;

use thiserror::Error;

/// Errors from scalar arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    /// Division by zero in ℚ(i).
    #[error("division by zero in Q(i)")]
    DivisionByZero,
    /// Only monomials c·q^m are invertible in ℚ(i)[q, q⁻¹].
    #[error("cannot invert `{0}`: only nonzero monomials c*q^m are invertible")]
    NotAMonomial(String),
    /// Malformed scalar text.
    #[error("cannot parse {kind} from `{input}`: {reason}")]
    Parse {
        /// Which scalar type was being parsed.
        kind: &'static str,
        /// The offending input.
        input: String,
        /// What went wrong.
        reason: String,
    },
}

pub(crate) fn parse_error(kind: &'static str, input: &str, reason: impl Into<String>) -> ScalarError {
    ScalarError::Parse {
        kind,
        input: input.to_string(),
        reason: reason.into(),
    }
}
