use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A regularization length was zero, negative or not finite.
    #[error("regularization length must be positive and finite, got {0}")]
    NonPositiveEpsilon(f64),

    /// The velocity jump `u1` is zero, so the front speed is undefined.
    #[error("degenerate jump data: velocity jump u1 must be nonzero")]
    DegenerateJump,

    /// A parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A quadrature node produced NaN or an infinity.
    #[error("non-finite integrand value {value} at x = {x}")]
    NonFiniteIntegrand { x: f64, value: f64 },

    /// An epsilon grid violated its shape requirements.
    #[error("invalid epsilon grid: {0}")]
    InvalidGrid(String),

    /// A sequence of pairings did not settle to a limit.
    #[error("coefficient extraction failed for `{family}`: {reason}")]
    Extraction { family: String, reason: String },

    /// An operation was called outside the regime it is defined for.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Jump data violates an overcompressivity margin.
    #[error("inadmissible data: {0}")]
    Inadmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon(eps))
    }
}
