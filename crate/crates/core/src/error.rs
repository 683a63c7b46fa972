use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge: value {value:e}, error estimate {abs_err:e} after {intervals} intervals")]
    Quadrature {
        value: f64,
        abs_err: f64,
        intervals: usize,
    },
    #[error("series did not converge within {terms} terms: partial sum {partial:e}, bound {bound:e}")]
    Series { partial: f64, bound: f64, terms: usize },
    #[error("cancellation: largest term {max_term:e} against sum {sum:e} at t = {t}; the series is not evaluated below t_min = {t_min}")]
    Cancellation {
        t: f64,
        t_min: f64,
        max_term: f64,
        sum: f64,
    },
    #[error("tail bound {bound:e} exceeds tolerance {tol:e} at cutoff {cutoff:e}")]
    Tail { bound: f64, tol: f64, cutoff: f64 },
    #[error("non-finite integrand value at {0}")]
    NonFinite(f64),
    #[error("root not found: {0}")]
    RootNotFound(String),
    #[error("sampler: {0}")]
    Sampler(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

