use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// Quadrature stopped at its refinement limit before meeting the tolerance.
    #[error("quadrature did not reach tolerance: estimate {estimate:e}, error bound {error_bound:e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    /// An iterative scheme (continued fraction, root finder) did not converge.
    #[error("{func} did not converge: {detail}")]
    Convergence { func: &'static str, detail: String },

    /// Invalid configuration or user input.
    #[error("invalid {field}: {detail}")]
    Validation { field: &'static str, detail: String },

    /// Some Monte Carlo replications failed; the estimate is withheld.
    #[error("{failed} of {reps} replications failed; first failure: {first}")]
    Replications {
        failed: usize,
        reps: usize,
        first: Box<Error>,
    },

    /// An error annotated with the evaluation that produced it.
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn validation(field: &'static str, detail: impl Into<String>) -> Self {
        Error::Validation {
            field,
            detail: detail.into(),
        }
    }

    pub(crate) fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True for failures of a numerical routine rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Quadrature { .. } | Error::Convergence { .. } | Error::Replications { .. } => true,
            Error::Context { source, .. } => source.is_numerical(),
            Error::Domain { .. } | Error::Validation { .. } => false,
        }
    }
}
