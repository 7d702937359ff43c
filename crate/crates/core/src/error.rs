use thiserror::Error;

/// Errors raised by construction, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the routine is defined.
    #[error("domain error: {param} = {value} ({reason})")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Evaluation hit a pole of the factor with the given index.
    #[error("pole encountered in factor {index}")]
    Pole { index: usize },

    /// An iterative solver ran out of budget before meeting its tolerance.
    #[error("{what} did not converge (residual {residual:e})")]
    Convergence { what: &'static str, residual: f64 },

    /// No unit-circle preimage exists for the requested point.
    #[error("branch error: {0}")]
    Branch(String),

    /// The extremum count is below theory and depends on the grid.
    #[error("insufficient resolution: {found} alternations at grid {grid}, {refined} at grid {refined_grid}, expected {expected}")]
    InsufficientResolution {
        expected: usize,
        found: usize,
        grid: usize,
        refined: usize,
        refined_grid: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        param,
        value,
        reason,
    }
}
