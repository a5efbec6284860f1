use thiserror::Error;

/// Errors raised by the dephasing engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(
        "quadrature did not converge: error estimate {error_estimate:.3e} exceeds tolerance \
         {tolerance:.3e} after {subdivisions} panels"
    )]
    QuadratureNotConverged {
        error_estimate: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("resolving the integrand needs {needed:.3e} initial panels, more than the limit of {limit}")]
    QuadratureMeshTooLarge { needed: f64, limit: usize },

    #[error("Hilbert dimension {requested} exceeds budget {budget}")]
    BudgetExceeded { requested: usize, budget: usize },

    #[error("metric exponent overflows f64 at tau = {tau}, fock_dim = {fock_dim}")]
    MetricOverflow { tau: f64, fock_dim: usize },

    #[error("bath file: {0}")]
    BathFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(
    ok: bool,
    name: &'static str,
    value: f64,
    reason: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
