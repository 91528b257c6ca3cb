use thiserror::Error;

/// Errors raised by locale, fuzzy-set, sheaf and Vietoris-Rips operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("locale mismatch: {0}")]
    LocaleMismatch(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not a sheaf: {0} (apply sheafify first)")]
    NotSheaf(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
