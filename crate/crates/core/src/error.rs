use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: {0}")]
    Context(String),
    #[error("composition argument has a nonzero constant term in the series variables")]
    NonzeroConstantTerm,
    #[error("series is not reversible: {0}")]
    NotReversible(String),
    #[error("index {index} out of range (have {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("unknown root datum {0:?}; supported presets: Torus<r>, SL<n>, GL<n>, PGL2, Sp4, G2")]
    UnknownPreset(String),
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("truncation order {have} too small; need at least {need}")]
    TruncationTooSmall { have: u32, need: u32 },
    #[error("degree {degree} exceeds available bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
