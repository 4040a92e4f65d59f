use thiserror::Error;

#[derive(Debug, Error)]
pub enum VoaError {
    #[error("weight {requested} exceeds the configured cutoff {cutoff}")]
    CutoffExceeded { requested: i64, cutoff: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("vector is not primary: {0}")]
    NotPrimary(String),

    #[error("vector has no component in sector {0}")]
    WrongSector(i32),

    #[error("numeric evaluation did not converge: {0}")]
    NotConverged(String),

    #[error("linear system has no solution: {0}")]
    Inconsistent(String),

    #[error("golden file error: {0}")]
    Golden(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, VoaError>;
