use thiserror::Error;

/// Errors produced by the physics pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature failed to converge for {context}: estimated error {error:e} after {subdivisions} subdivisions")]
    Quadrature {
        context: String,
        error: f64,
        subdivisions: usize,
    },

    #[error("dissipation matrix is not positive: |gamma_cross| = {gamma_cross} exceeds gamma_self = {gamma_self}")]
    LindbladViolation { gamma_self: f64, gamma_cross: f64 },

    #[error("non-physical density matrix: {0}")]
    NonPhysicalState(String),

    #[error("initial state has weight outside the propagated sector: {0}")]
    OutsideSector(String),

    #[error("step control failed between t = {t_start} and t = {t_end}")]
    StepControl { t_start: f64, t_end: f64 },

    #[error("minimisation bracket failed: objective is not unimodal on the scanned interval")]
    Bracket { samples: Vec<(f64, f64)> },

    #[error("sweep cell (x = {x}, z = {z}) failed: {source}")]
    SweepCell {
        x: f64,
        z: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True when the error comes from bad input rather than a numerical failure.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::InvalidArgument(_) | Error::NonPhysicalState(_) | Error::OutsideSector(_) => true,
            Error::SweepCell { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
