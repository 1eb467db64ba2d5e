use alloc::string::String;

use crate::hyperfield::Field;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("elements of {0} and {1} cannot be combined")]
    FieldMismatch(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} has no exact hyperaddition; use the dequantization layer")]
    Unsupported(Field),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("search too large: {0}")]
    TooLarge(String),
    #[error("no registered {0}")]
    NotRegistered(String),
}
