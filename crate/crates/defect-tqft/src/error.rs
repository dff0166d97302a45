use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown label: {0}")]
    Label(String),
    #[error("invalid group table: {0}")]
    Group(String),
    #[error("invalid defect data: {0}")]
    DefectData(String),
    #[error("word chain mismatch: {0}")]
    Chain(String),
    #[error("invalid category data: {0}")]
    Category(String),
    #[error("degenerate pairing: {0}")]
    Degeneracy(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("inadmissible colour: {0}")]
    Colour(String),
    #[error("stratification is not fine: {0}")]
    Fineness(String),
    #[error("diagrams are not parallel: {0}")]
    Parallel(String),
    #[error("composition mismatch: {0}")]
    Compose(String),
    #[error("invalid refinement site: {0}")]
    InvalidSite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
