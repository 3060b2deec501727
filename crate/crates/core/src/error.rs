use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid rank: sl_n requires n >= 2, got n = {0}")]
    InvalidRank(usize),
    #[error("weight {weight:?} is not a dominant weight of level <= {level}")]
    WeightOutOfRange { weight: Vec<i64>, level: i64 },
    #[error("unsupported weight {0:?}: only 0 and fundamental weights (exterior powers) are realized")]
    UnsupportedWeight(Vec<i64>),
    #[error("truncation violation: result degree {degree} exceeds module bound {max}")]
    TruncationViolation { degree: i64, max: i64 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("zero top-space vector")]
    ZeroVector,
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("pole: level k = -h^vee makes the Sugawara normalization singular")]
    Pole,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("blow-up at t = {t}: leading coefficient |a1| = {a1:e} fell below the censoring threshold")]
    BlowUp { t: f64, a1: f64 },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
