use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or adaptive routine stopped before reaching its tolerance.
    #[error("{what} did not converge (achieved error estimate {achieved:e})")]
    NoConvergence { what: &'static str, achieved: f64 },

    /// The diagonal weight of the time discretisation does not dominate the
    /// most negative reaction coefficient, so the step matrix is not an
    /// M-matrix.
    #[error(
        "step restriction violated at step {step} (t = {time}): diagonal weight {diagonal} \
         + min c {min_reaction} <= 0; reduce the step below {max_step:e}"
    )]
    StepRestriction {
        step: usize,
        time: f64,
        diagonal: f64,
        min_reaction: f64,
        max_step: f64,
    },

    /// The assembled step matrix failed the M-matrix check requested by the
    /// caller.
    #[error("step matrix at step {step} (t = {time}) is not an M-matrix (row {row})")]
    NotMMatrix { step: usize, time: f64, row: usize },

    /// Zero pivot during tridiagonal elimination.
    #[error("singular system at step {step} (t = {time})")]
    Singular { step: usize, time: f64 },

    /// Inputs that are individually valid but do not belong together.
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
