//! Two-qubit preparation circuits: a system qubit entangled with an
//! apparatus qubit by CNOT, followed either by an apparatus measurement and
//! a classically controlled flip (`A`) or by a second CNOT controlled by the
//! apparatus (`B`, and `C` which is `B` run with the apparatus in `|1⟩`).
//!
//! Joint states are ordered system ⊗ apparatus.

use std::fmt;
use std::str::FromStr;

use super::instrument::Instrument;
use super::state::{c, partial_trace_first, partial_trace_second, real_matrix, DensityOperator, PureState};
use super::{CMatrix, QsimError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrepCircuit {
    /// CNOT, measure the apparatus, flip the system on outcome 1.
    A,
    /// CNOT then apparatus-controlled CNOT; no measurement.
    B,
    /// Same gates as `B`; by convention started with the apparatus in `|1⟩`.
    C,
}

impl PrepCircuit {
    pub fn default_apparatus(self) -> PureState {
        match self {
            PrepCircuit::A | PrepCircuit::B => PureState::basis(2, 0),
            PrepCircuit::C => PureState::basis(2, 1),
        }
    }
}

impl fmt::Display for PrepCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrepCircuit::A => "a",
            PrepCircuit::B => "b",
            PrepCircuit::C => "c",
        })
    }
}

impl FromStr for PrepCircuit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" | "A" => Ok(PrepCircuit::A),
            "b" | "B" => Ok(PrepCircuit::B),
            "c" | "C" => Ok(PrepCircuit::C),
            _ => Err(format!("unknown circuit {s:?} (expected a, b or c)")),
        }
    }
}

/// `|s,a⟩ ↦ |s, a⊕s⟩`.
#[rustfmt::skip]
pub fn cnot_system_controls() -> CMatrix {
    real_matrix(4, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 1.0, 0.0,
    ])
}

/// `|s,a⟩ ↦ |s⊕a, a⟩`.
#[rustfmt::skip]
pub fn cnot_apparatus_controls() -> CMatrix {
    real_matrix(4, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
    ])
}

pub fn pauli_x() -> CMatrix {
    real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// Measurement of the apparatus in `{|0⟩, |1⟩}` with the system flipped on outcome 1,
/// as a two-outcome instrument on the joint space.
pub fn measure_and_correct() -> Instrument {
    let proj = |a: usize| PureState::basis(2, a).projector();
    let k0 = CMatrix::identity(2, 2).kronecker(&proj(0));
    let k1 = pauli_x().kronecker(&proj(1));
    Instrument::new(vec![vec![k0], vec![k1]]).expect("projective measurement with unitary correction")
}

#[derive(Clone, Debug)]
pub struct CircuitRun {
    pub system_out: DensityOperator,
    pub apparatus_out: DensityOperator,
    /// Probabilities of apparatus outcomes `a = 0, 1`; `None` for the unitary circuits.
    pub outcomes: Option<[f64; 2]>,
}

fn check_qubit(s: &PureState) -> Result<(), QsimError> {
    if s.dim() == 2 {
        Ok(())
    } else {
        Err(QsimError::DimensionMismatch { expected: 2, found: s.dim() })
    }
}

fn hermitized(m: CMatrix) -> Result<DensityOperator, QsimError> {
    DensityOperator::new((&m + m.adjoint()) * c(0.5, 0.0))
}

/// Simulates the circuit on `system_in ⊗ apparatus_in` and returns both reduced outputs.
///
/// For circuit `A` the outputs are averaged over the measurement result
/// (every branch is corrected to the same system state).
pub fn run_circuit(
    circuit: PrepCircuit,
    system_in: &PureState,
    apparatus_in: &PureState,
) -> Result<CircuitRun, QsimError> {
    check_qubit(system_in)?;
    check_qubit(apparatus_in)?;
    let joint = system_in.tensor(apparatus_in);
    let entangled = cnot_system_controls() * joint.amplitudes();
    let (rho, outcomes) = match circuit {
        PrepCircuit::A => {
            let rho = &entangled * entangled.adjoint();
            let inst = measure_and_correct();
            let branches = [inst.apply(0, &rho)?, inst.apply(1, &rho)?];
            let probs = [branches[0].trace().re, branches[1].trace().re];
            let [b0, b1] = branches;
            (b0 + b1, Some(probs))
        }
        PrepCircuit::B | PrepCircuit::C => {
            let out = cnot_apparatus_controls() * entangled;
            (&out * out.adjoint(), None)
        }
    };
    Ok(CircuitRun {
        system_out: hermitized(partial_trace_second(&rho, 2, 2))?,
        apparatus_out: hermitized(partial_trace_first(&rho, 2, 2))?,
        outcomes,
    })
}

/// The instrument the circuit induces on the system qubit for a given apparatus prior.
///
/// Circuit `A` has outcomes `a = 0, 1` with Kraus operators
/// `X^a ⟨a|_app CNOT |φ⟩_app`. Circuits `B`/`C` have a single outcome whose
/// Kraus operators are `⟨k|_app U |φ⟩_app`, `k = 0, 1`.
pub fn circuit_instrument(circuit: PrepCircuit, apparatus_in: &PureState) -> Result<Instrument, QsimError> {
    check_qubit(apparatus_in)?;
    let phi = apparatus_in.amplitudes();
    // ⟨k|_app U |φ⟩_app as a 2×2 system operator.
    let slice = |u: &CMatrix, k: usize| {
        CMatrix::from_fn(2, 2, |s_out, s_in| (0..2).map(|a| u[(s_out * 2 + k, s_in * 2 + a)] * phi[a]).sum())
    };
    match circuit {
        PrepCircuit::A => {
            let u = cnot_system_controls();
            Instrument::new(vec![vec![slice(&u, 0)], vec![pauli_x() * slice(&u, 1)]])
        }
        PrepCircuit::B | PrepCircuit::C => {
            let u = cnot_apparatus_controls() * cnot_system_controls();
            Instrument::new(vec![vec![slice(&u, 0), slice(&u, 1)]])
        }
    }
}
