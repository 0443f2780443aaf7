use thiserror::Error;

/// Errors raised while constructing or checking operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular or too ill-conditioned (sigma_min/sigma_max = {ratio:e})")]
    SingularMatrix { ratio: f64 },

    #[error("degenerate deformation parameter: {0}")]
    DegenerateParameter(String),

    #[error("operator dimension {dim} exceeds the size budget {budget}")]
    SizeBudgetExceeded { dim: usize, budget: usize },

    #[error("spectral parameter must be non-zero")]
    ZeroSpectralParameter,

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("no scalar Casimir value fits (forward order residual {forward:e}, reversed order residual {reversed:e})")]
    ConventionMismatch { forward: f64, reversed: f64 },

    #[error("projector normalisation failed: {0}")]
    NormalizationFailure(String),

    #[error("eigensolver did not converge")]
    ConvergenceFailure,

    #[error("no consistent isotypic assignment: {0}")]
    NoConsistentAssignment(String),

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, for machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::DegenerateParameter(_) => "DegenerateParameter",
            Error::SizeBudgetExceeded { .. } => "SizeBudgetExceeded",
            Error::ZeroSpectralParameter => "ZeroSpectralParameter",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::ConventionMismatch { .. } => "ConventionMismatch",
            Error::NormalizationFailure(_) => "NormalizationFailure",
            Error::ConvergenceFailure => "ConvergenceFailure",
            Error::NoConsistentAssignment(_) => "NoConsistentAssignment",
            Error::Overflow(_) => "Overflow",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// Whether the error reflects bad input rather than a failed check.
    pub fn is_config_error(&self) -> bool {
        !matches!(
            self,
            Error::ConventionMismatch { .. }
                | Error::NormalizationFailure(_)
                | Error::ConvergenceFailure
                | Error::NoConsistentAssignment(_)
        )
    }
}
