use thiserror::Error;

/// Errors raised by the engine. Check failures are not errors; they are
/// reported through [`crate::report::Report`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes the denominator factor `{0}` vanish")]
    SingularSubstitution(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("negative power of non-invertible generator `{0}`")]
    NotInvertible(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("calculus is not inner: {0}")]
    NotInner(String),
    #[error("morphism has not been verified")]
    Unverified,
    #[error("relation `{relation}` violated, residue {residue}")]
    RelationViolated { relation: String, residue: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
