use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates the precondition of an operation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Evaluation requested outside the mathematical domain (e.g. log of zero).
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A tabulated spectral density is too coarse for the requested kernel horizon.
    #[error("tabulated spectrum too coarse: spacing {spacing} x horizon {horizon} = {product} >= pi/4")]
    Resolution {
        spacing: f64,
        horizon: f64,
        product: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The Volterra integrator produced |a| > 1 + 0.01.
    #[error("unstable integration at step {step} (t = {time}): |a| = {magnitude}")]
    Instability {
        step: usize,
        time: f64,
        magnitude: f64,
    },

    /// Step-size guard violated (jump probability or explicit integrator bound).
    #[error("step guard violated: {0}")]
    StepGuard(String),

    #[error("trajectory {index} (seed {seed}) failed: {source}")]
    Trajectory {
        index: usize,
        seed: u64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures caused by numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Instability { .. } | Error::OutOfDomain(_) => true,
            Error::Trajectory { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
