use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    /// The logarithmic formulation is only defined for |v| below the terminal speed.
    #[error("|v| = {speed} reaches the terminal speed {terminal} (log formulation undefined)")]
    TerminalSpeed { speed: f64, terminal: f64 },

    #[error("{what}: argument {value} outside supported range [{min}, {max}]")]
    OutOfRange { what: &'static str, value: f64, min: f64, max: f64 },

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("closed form requires alpha > 0; use the frictionless expressions for alpha = 0")]
    Frictionless,

    #[error("quadrature did not converge: estimate {value} with error {error} ({context})")]
    QuadratureNotConverged { value: f64, error: f64, context: &'static str },

    #[error("non-positive factor {value} in {context}")]
    NonPositiveFactor { value: f64, context: &'static str },

    #[error("root finding failed: {0}")]
    RootNotFound(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason: "must be finite and > 0" })
    }
}
