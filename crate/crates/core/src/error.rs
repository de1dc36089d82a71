use thiserror::Error;

use crate::ring::Model;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("model mismatch: {0:?} vs {1:?}")]
    ModelMismatch(Model, Model),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("negative exponent {0:?} in affine model")]
    NegativeExponent(Vec<i32>),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("arity mismatch: cochain of degree {degree} needs {expected} arguments, got {got}")]
    Arity { degree: usize, expected: usize, got: usize },
    #[error("degree {got} out of range: {reason}")]
    DegreeOutOfRange { got: usize, reason: String },
    #[error("form is not closed: d(form) = {0}")]
    NotClosed(String),
    #[error("not a crossed homomorphism: {0}")]
    NotCrossedHomomorphism(String),
    #[error("not a representation: {0}")]
    NotRepresentation(String),
    #[error("Jacobi identity fails: {0}")]
    Jacobi(String),
    #[error("structure constants are not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
