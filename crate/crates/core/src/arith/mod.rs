//! Exact arithmetic: rationals, imaginary quadratic fields, integer lattices.

pub mod linalg;
pub mod matrix;
pub mod quad;
pub mod rational;
pub mod squarefree;

pub use matrix::IntMatrix;
pub use quad::{quad_sign_real, QuadFieldElem, RealQuad, Sign};
pub use rational::Rational;
pub use squarefree::{squarefree_decompose, squarefree_part};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("MixedFields: cannot combine elements of Q(√-{0}) and Q(√-{1})")]
    MixedFields(u64, u64),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("NonPositive: expected a positive integer, got {0}")]
    NonPositive(String),
    #[error("malformed rational {0:?} (expected \"p/q\")")]
    BadRational(String),
}
