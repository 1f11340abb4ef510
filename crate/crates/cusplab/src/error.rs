use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("divergent result: {0}")]
    Divergent(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("ray obstruction: {0}")]
    RayObstruction(String),
    #[error("optimal truncation unavailable: {0}")]
    TruncationUnavailable(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that signal a numeric range problem rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Range(_)
                | Error::Divergent(_)
                | Error::Resolution(_)
                | Error::RayObstruction(_)
                | Error::TruncationUnavailable(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
