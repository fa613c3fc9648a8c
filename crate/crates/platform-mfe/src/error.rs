use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("threshold {v_bar} is not admissible: {reason}")]
    NotAdmissible { v_bar: f64, reason: String },

    #[error("the GenAI region {{r < r_bar}} is empty at v_bar = {0}")]
    EmptyAiRegion(f64),

    #[error("indifferent content mass reaches 1 at v_bar = {0}")]
    FullIndifference(f64),

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
