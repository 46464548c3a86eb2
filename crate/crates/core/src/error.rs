use thiserror::Error;

/// Failures raised by spectrum construction and the orthogonality engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("degenerate spectrum: {0}")]
    Degenerate(String),

    #[error("spectrum is not bimodal: {0}")]
    NotBimodal(String),

    #[error("invalid separation: {0}")]
    InvalidSeparation(String),

    #[error("criterion never met for theta in (0, {theta_max}]")]
    NoOrthogonality { theta_max: f64 },

    #[error("cutoff {cutoff} too small for Poisson mean {mean}")]
    CutoffTooSmall { mean: f64, cutoff: usize },

    #[error("grid too narrow: implied tail mass {tail_mass:e} exceeds 1e-6")]
    GridTooNarrow { tail_mass: f64 },

    #[error("overlapping slits: {0}")]
    OverlappingSlits(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable variant name, used on the CLI diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidSpectrum(_) => "InvalidSpectrum",
            Error::InvalidRange(_) => "InvalidRange",
            Error::Degenerate(_) => "Degenerate",
            Error::NotBimodal(_) => "NotBimodal",
            Error::InvalidSeparation(_) => "InvalidSeparation",
            Error::NoOrthogonality { .. } => "NoOrthogonality",
            Error::CutoffTooSmall { .. } => "CutoffTooSmall",
            Error::GridTooNarrow { .. } => "GridTooNarrow",
            Error::OverlappingSlits(_) => "OverlappingSlits",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
