use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("{n_sites} sites exceeds the site cap of {cap}")]
    SiteCapExceeded { n_sites: usize, cap: usize },

    #[error("Pauli string has {actual} axes, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("analytic formula is singular: {0}")]
    Singular(String),

    #[error("symmetry check disagreement: matrix says {matrix}, term parity says {parity}")]
    SymmetryDisagreement { matrix: bool, parity: bool },

    #[error("flat objective: coherence vanishes over the whole search bracket")]
    FlatObjective,

    #[error("objective is not unimodal; candidate maxima at {candidates:?}")]
    NotUnimodal { candidates: Vec<f64> },

    #[error("tail fit: {0}")]
    Fit(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown model tag `{0}`")]
    UnknownModel(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical contract (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonHermitian { .. }
                | Error::NoConvergence
                | Error::Singular(_)
                | Error::SymmetryDisagreement { .. }
                | Error::FlatObjective
                | Error::NotUnimodal { .. }
                | Error::Fit(_)
        )
    }
}
