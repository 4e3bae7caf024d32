use thiserror::Error;

use crate::base::CategoryViolation;
use crate::report::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("invalid category:\n{0}")]
    InvalidCategory(ValidationReport<CategoryViolation>),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("functor is not faithful: `{first}` and `{second}` both map to `{image}`")]
    NotFaithful {
        first: String,
        second: String,
        image: String,
    },

    #[error("presheaf enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("missing colimit: {0}")]
    MissingColimit(String),

    #[error("adjunction certificate rejected: {0}")]
    InvalidAdjunction(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::TypeMismatch(msg.into())
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
