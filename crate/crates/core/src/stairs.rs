//! Remote steering on a maximally entangled qutrit pair, checked against
//! every Peres basis, and the reduction of "pre-existing values" to the
//! uncolorable ray problem.
//!
//! Bipartite vectors are indexed A-major: amplitude of `|a⟩|b⟩` sits at `3a + b`.

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact_algebra::Ray;
use crate::json;
use crate::peres_ks::{solve_coloring, Basis, ColoringProblem, KsError, PeresStructure, SearchCertificate};
use crate::qsim::{
    born_prob, check_orthonormal_basis, CVector, DensityOperator, Effect, PureState, QsimError, ALGEBRA_TOL,
    SPECTRAL_TOL,
};

#[derive(Debug, Error)]
pub enum StairsError {
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Ks(#[from] KsError),
    #[error("basis index {0} out of range 1..={1}")]
    BasisOutOfRange(usize, usize),
}

/// A unit vector in `C^d ⊗ C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    dim: usize,
    amplitudes: CVector,
}

impl BipartiteState {
    pub fn new(dim: usize, amplitudes: CVector) -> Result<Self, StairsError> {
        if amplitudes.len() != dim * dim {
            return Err(QsimError::DimensionMismatch { expected: dim * dim, found: amplitudes.len() }.into());
        }
        let err = (amplitudes.norm_squared() - 1.0).abs();
        if err > ALGEBRA_TOL {
            return Err(QsimError::NotNormalized(err).into());
        }
        Ok(BipartiteState { dim, amplitudes })
    }

    pub fn product(a: &PureState, b: &PureState) -> Result<Self, StairsError> {
        if a.dim() != b.dim() {
            return Err(QsimError::DimensionMismatch { expected: a.dim(), found: b.dim() }.into());
        }
        Ok(BipartiteState { dim: a.dim(), amplitudes: a.amplitudes().kronecker(b.amplitudes()) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self, a: usize, b: usize) -> Complex64 {
        self.amplitudes[a * self.dim + b]
    }

    /// Reduced state of B.
    pub fn reduced_b(&self) -> DensityOperator {
        let rho = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::new(crate::qsim::partial_trace_first(&rho, self.dim, self.dim))
            .expect("partial trace of a pure state is a state")
    }
}

/// `(1/√d) Σ_k |kk⟩`.
pub fn max_entangled(d: usize) -> BipartiteState {
    let mut v = CVector::zeros(d * d);
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for k in 0..d {
        v[k * d + k] = amp;
    }
    BipartiteState { dim: d, amplitudes: v }
}

/// Entrywise complex conjugate in the computational basis.
pub fn conjugate_state(psi: &PureState) -> PureState {
    PureState::new(psi.amplitudes().conjugate()).expect("conjugation preserves the norm")
}

#[derive(Clone, Debug)]
pub struct OutcomeAtA {
    pub probability: f64,
    /// B's conditional state; `None` when the outcome has zero probability.
    pub conditional_b: Option<DensityOperator>,
}

/// Von Neumann measurement of A in `basis`; for each outcome, its
/// probability and the renormalized conditional state of B.
pub fn measure_at_a(state: &BipartiteState, basis: &[PureState]) -> Result<Vec<OutcomeAtA>, StairsError> {
    check_orthonormal_basis(basis)?;
    let d = state.dim();
    if basis[0].dim() != d {
        return Err(QsimError::DimensionMismatch { expected: d, found: basis[0].dim() }.into());
    }
    basis
        .iter()
        .map(|e| {
            // (⟨e| ⊗ I)|Ψ⟩
            let v = CVector::from_fn(d, |b, _| (0..d).map(|a| e.amplitudes()[a].conj() * state.amplitude(a, b)).sum());
            let probability = v.norm_squared();
            let conditional_b = if probability > ALGEBRA_TOL {
                let m = &v * v.adjoint() / Complex64::new(probability, 0.0);
                Some(DensityOperator::new((&m + m.adjoint()) * Complex64::new(0.5, 0.0))?)
            } else {
                None
            };
            Ok(OutcomeAtA { probability, conditional_b })
        })
        .collect()
}

/// Floating-point unit vector for an exact ray.
pub fn embed_ray(ray: &Ray) -> PureState {
    PureState::from_real(&ray.to_unit_f64()).expect("rays are nonzero")
}

#[derive(Clone, Debug)]
pub struct SteeringEntry {
    /// 1-based basis index.
    pub k: usize,
    /// 1-based outcome at A, `j_k`.
    pub outcome: usize,
    pub ray_id: usize,
    pub prob_at_a: f64,
    pub fidelity_b: f64,
    /// Born probability of each `O^k_j = |ψ^k_j⟩⟨ψ^k_j|` on B's conditional state, `j = 1..=3`.
    pub certainty: [f64; 3],
}

impl SteeringEntry {
    /// Outcome 1 certain for `O^k_{j_k}`, outcome 0 certain for the other two.
    pub fn is_certain(&self) -> bool {
        self.certainty.iter().enumerate().all(|(j, &p)| {
            if j + 1 == self.outcome {
                (p - 1.0).abs() <= SPECTRAL_TOL
            } else {
                p.abs() <= SPECTRAL_TOL
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct SteeringReport {
    pub entries: Vec<SteeringEntry>,
    pub coloring: Option<SearchCertificate>,
}

impl SteeringReport {
    pub fn all_certain(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(SteeringEntry::is_certain)
    }

    /// Largest `|Σ_j p_j − 1|` over the measured bases.
    pub fn probability_sum_error(&self) -> f64 {
        let mut sums = std::collections::BTreeMap::<usize, f64>::new();
        for e in &self.entries {
            *sums.entry(e.k).or_default() += e.prob_at_a;
        }
        sums.values().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let records: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let cert: serde_json::Map<String, Value> =
                    e.certainty.iter().enumerate().map(|(j, &p)| ((j + 1).to_string(), json::num(p))).collect();
                json!({
                    "k": e.k,
                    "outcome": e.outcome,
                    "ray": e.ray_id,
                    "prob_at_A": json::num(e.prob_at_a),
                    "fidelity_B": json::num(e.fidelity_b),
                    "certainty": cert,
                })
            })
            .collect();
        let coloring = match &self.coloring {
            Some(c) if c.is_unsat() => json!("UNSAT"),
            Some(_) => json!("SAT"),
            None => Value::Null,
        };
        json!({
            "records": records,
            "summary": {"all_certain": self.all_certain(), "coloring": coloring, "checks": self.entries.len()},
        })
    }
}

/// Steering check for the 1-based basis indices in `which` (all 40 when empty).
///
/// For each basis `{ψ^k_j}` A is measured in the conjugate basis and every
/// outcome `j_k` is visited; B's conditional state is compared with
/// `ψ^k_{j_k}` and the three projectors `O^k_j` are evaluated on it.
pub fn verify_certainties(peres: &PeresStructure, which: &[usize]) -> Result<SteeringReport, StairsError> {
    let total = peres.bases.len();
    let indices: Vec<usize> = if which.is_empty() { (1..=total).collect() } else { which.to_vec() };
    let pair = max_entangled(3);
    let mut entries = Vec::with_capacity(indices.len() * 3);
    for k in indices {
        if k == 0 || k > total {
            return Err(StairsError::BasisOutOfRange(k, total));
        }
        let basis: &Basis = &peres.bases[k - 1];
        let ids = basis.members();
        let psi: Vec<PureState> = ids.iter().map(|&id| embed_ray(&peres.rays[id])).collect();
        let conj: Vec<PureState> = psi.iter().map(conjugate_state).collect();
        let projectors: Vec<Effect> = psi.iter().map(|p| Effect::new(p.projector())).collect::<Result<_, _>>()?;
        for (j, outcome) in measure_at_a(&pair, &conj)?.into_iter().enumerate() {
            let rho_b = outcome.conditional_b.ok_or(QsimError::ImpossibleOutcome(outcome.probability))?;
            let mut certainty = [0.0; 3];
            for (slot, e) in certainty.iter_mut().zip(&projectors) {
                *slot = born_prob(&rho_b, e)?;
            }
            entries.push(SteeringEntry {
                k,
                outcome: j + 1,
                ray_id: ids[j],
                prob_at_a: outcome.probability,
                fidelity_b: rho_b.fidelity_with(&psi[j]),
                certainty,
            });
        }
    }
    Ok(SteeringReport { entries, coloring: None })
}

/// The coloring problem a local pre-existing value for every `O^k_j` would have to solve.
pub fn local_value_problem(peres: &PeresStructure) -> ColoringProblem {
    peres.problem()
}

/// Searches for the local value map; the expected result is UNSAT.
pub fn locality_contradiction() -> SearchCertificate {
    solve_coloring(&local_value_problem(&PeresStructure::build()))
}

/// Full pipeline: steering checks for all bases plus the coloring certificate.
pub fn full_report() -> Result<SteeringReport, StairsError> {
    let peres = PeresStructure::build();
    let mut report = verify_certainties(&peres, &[])?;
    report.coloring = Some(solve_coloring(&local_value_problem(&peres)));
    Ok(report)
}
