use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("method not applicable: {0}")]
    Method(String),
    #[error("contour at height {height} is within margin {margin} of spectrum (omega0 = {omega0})")]
    ContourTooClose { height: f64, omega0: f64, margin: f64 },
    #[error("function is not elementary: {0}")]
    NotElementary(String),
    #[error("grid mismatch: {0}")]
    Grid(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
