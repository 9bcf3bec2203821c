use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} must be non-negative and finite, got {value}")]
    NegativeInput { what: &'static str, value: f64 },

    #[error("invalid radio parameters: {0}")]
    InvalidRadio(String),

    #[error("exclusion radius {radius} m is inadmissible: must satisfy 0 <= R < M/sqrt(pi) = {bound} m")]
    InadmissibleRadius { radius: f64, bound: f64 },

    #[error("cluster count must be >= 1, got {0}")]
    InvalidClusterCount(f64),

    #[error("no clustered nodes: excluded count {excluded} must be below node count {total}")]
    NoClusteredNodes { excluded: usize, total: usize },

    #[error("empty range: {0}")]
    EmptyRange(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("average energy {0} J is not positive; network state is degenerate")]
    DegenerateAverage(f64),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// `true` for failures caused by user input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::Csv(_) | Error::Json(_))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn non_negative(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::NegativeInput { what, value })
    }
}
