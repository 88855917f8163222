use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The result does not fit in the double-precision exponent range.
    #[error("{what} overflows the floating-point range at r = {r}")]
    Range { what: &'static str, r: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A formula is singular for the given input (e.g. `α = π/2`).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("root not bracketed on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("no convergence after {iterations} iterations (last = {last}, residual = {residual:e})")]
    NoConvergence {
        iterations: usize,
        last: f64,
        residual: f64,
    },

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    Quadrature { estimate: f64 },

    #[error("spectral solver unstable at t = {t}; retry with dt <= {suggested_dt}")]
    Instability { t: f64, suggested_dt: f64 },

    #[error("wave speed undefined: order parameter vanishes on the window")]
    UndefinedSpeed,

    #[error("histogram is empty")]
    EmptyHistogram,
}
