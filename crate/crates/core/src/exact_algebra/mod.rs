//! Exact arithmetic in ℚ(√2) and exact 3-vector geometry.
//!
//! Every component of the rays used by the contextuality prover lives in
//! this field, so orthogonality is decided by exact comparison with zero.

mod quadrat;
mod vec3;

use thiserror::Error;

pub use quadrat::{qr_add, qr_inv, qr_mul, to_float, QuadRat};
pub use vec3::{canonicalize, cross, dot, Ray, Vec3Exact};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero in Q(sqrt2)")]
    DivisionByZero,
    #[error("cross product of parallel vectors")]
    ParallelVectors,
    #[error("zero vector has no projective ray")]
    ZeroVector,
    #[error("cannot parse {0:?} as an element of Q(sqrt2)")]
    Parse(String),
}
