//! Finite-dimensional quantum states, POVMs, Kraus instruments and the
//! operations built on them: Born probabilities, conditioning on an
//! outcome, preparation detection, the two-qubit preparation circuits,
//! classical Bayesian updating and MUB state reconstruction.
//!
//! Matrices are dense `nalgebra` matrices over `Complex64`. Tolerances are
//! global: [`ALGEBRA_TOL`] for algebraic identities, [`SPECTRAL_TOL`] for
//! eigenvalue floors and round trips.

mod bayes;
mod circuit;
mod instrument;
mod state;
mod tomography;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub use bayes::bayes_update;
pub use circuit::{
    circuit_instrument, cnot_apparatus_controls, cnot_system_controls, measure_and_correct, pauli_x, run_circuit,
    CircuitRun, PrepCircuit,
};
pub use instrument::{
    born_prob, certainty_check, choi_matrix, classify_preparation, povm_probs, reshuffle, update, Instrument,
    Preparation,
};
pub use state::{
    check_orthonormal_basis, hermitian_eigenvalues, orthonormal_completion, partial_trace_first, partial_trace_second,
    trace_distance, DensityOperator, Effect, Observable, Povm, PureState,
};
pub use tomography::{mub_set, probs_to_state, state_to_probs, MubSet, ProbTable, Reconstruction};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ALGEBRA_TOL: f64 = 1e-12;
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    state::max_abs(m)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state not normalized (|norm² − 1| = {0:e})")]
    NotNormalized(f64),
    #[error("matrix not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace differs from 1 by {0:e}")]
    NotUnitTrace(f64),
    #[error("negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("effect spectrum [{min}, {max}] outside [0, 1]")]
    EffectOutOfRange { min: f64, max: f64 },
    #[error("POVM effects do not sum to identity (deviation {0:e})")]
    PovmNotComplete(f64),
    #[error("Kraus operators are not complete (deviation {0:e})")]
    InstrumentNotComplete(f64),
    #[error("unknown outcome {0}")]
    UnknownOutcome(usize),
    #[error("cannot condition on an outcome of probability {0:e}")]
    ImpossibleOutcome(f64),
    #[error("vectors are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("invalid probabilities: {0}")]
    BadProbability(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("malformed probability table: {0}")]
    MalformedTable(String),
    #[error("empty input")]
    Empty,
}
