use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the benchmark pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("SchemaMismatch: {0}")]
    SchemaMismatch(String),
    #[error("EmptySeries: no parseable rows in {0}")]
    EmptySeries(String),
    #[error("TimestampMismatch: {0}")]
    TimestampMismatch(String),
    #[error("EmptyInput: {0}")]
    EmptyInput(&'static str),
    #[error("MissingWeatherColumn: {0}")]
    MissingWeatherColumn(String),
    #[error("DimensionMismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("EmptyTrainSet: training partition has no rows")]
    EmptyTrainSet,
    #[error("DivergenceDetected: training loss became {loss} at epoch {epoch}")]
    DivergenceDetected { epoch: usize, loss: f64 },
    #[error("InvalidHyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("UnknownColumn: {0}")]
    UnknownColumn(String),
    #[error("InvalidTarget: {0}")]
    InvalidTarget(String),
    #[error("DegenerateStats: standard deviation is {0}")]
    DegenerateStats(f64),
    #[error("LengthMismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("AllPointsExcluded: every actual value is below the MAPE floor {0}")]
    AllPointsExcluded(f64),
    #[error("ZeroDenominator: reference error is zero")]
    ZeroDenominator,
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("config: {0}")]
    Config(String),
    #[error("scenario {scenario}: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Process exit code for the command-line front end.
    ///
    /// 1 config, 2 data, 3 training, 4 evaluation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Scenario { source, .. } => source.exit_code(),
            Error::Config(_) => 1,
            Error::FileNotFound(_)
            | Error::Io { .. }
            | Error::SchemaMismatch(_)
            | Error::EmptySeries(_)
            | Error::TimestampMismatch(_)
            | Error::EmptyInput(_)
            | Error::MissingWeatherColumn(_)
            | Error::UnknownColumn(_)
            | Error::InvalidTarget(_)
            | Error::ModelFormat(_) => 2,
            Error::DimensionMismatch { .. }
            | Error::EmptyTrainSet
            | Error::DivergenceDetected { .. }
            | Error::InvalidHyperparameter(_) => 3,
            Error::DegenerateStats(_)
            | Error::LengthMismatch { .. }
            | Error::AllPointsExcluded(_)
            | Error::ZeroDenominator => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path)
        } else {
            Error::Io { path, source }
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
