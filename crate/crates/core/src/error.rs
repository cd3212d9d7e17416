use thiserror::Error;

/// Errors raised by the numerics in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("pole of {op} at s = 1")]
    Pole { op: &'static str },

    #[error("overflow in {op}")]
    Overflow { op: &'static str },

    #[error("quadrature did not converge: value {value:e}, error estimate {abs_error:e} after {subdivisions} panels")]
    NonConvergence {
        value: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error("integral appears to diverge near {near}")]
    Divergence { near: f64 },

    #[error("non-finite integrand value at t = {at}")]
    NonFinite { at: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    SeriesNonConvergence { what: &'static str, iterations: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("derivative of order {order} at 0+ is not available for density '{density}'")]
    MissingDerivative { density: String, order: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("function evaluation failed at x = {at}: {detail}")]
    Evaluation { at: f64, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow { .. }
                | Error::NonConvergence { .. }
                | Error::Divergence { .. }
                | Error::NonFinite { .. }
                | Error::SeriesNonConvergence { .. }
                | Error::Evaluation { .. }
        )
    }
}
