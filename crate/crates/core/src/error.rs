use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {what} at {at}")]
    Pole { what: &'static str, at: Complex64 },

    #[error("quadrature did not converge (estimate {abs_error_estimate:e} after {nodes_used} nodes)")]
    NoConvergence {
        abs_error_estimate: f64,
        nodes_used: usize,
    },

    #[error("integrand grows too fast at the origin (local exponent {exponent:.3})")]
    SingularAtOrigin { exponent: f64 },

    #[error("order {a} is below the reach of recurrence continuation")]
    OrderOutOfRange { a: Complex64 },

    #[error("closed form denominator vanishes (|denominator| = {magnitude:e})")]
    DegenerateRationalPoint { magnitude: f64 },

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
