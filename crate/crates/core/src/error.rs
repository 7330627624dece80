//! Shared error type for the solver crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("well overlap: centers {i} and {j} at distance {dist:.6} < 2*rho = {min_dist:.6}")]
    Overlap {
        i: usize,
        j: usize,
        dist: f64,
        min_dist: f64,
    },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("invalid configuration: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
