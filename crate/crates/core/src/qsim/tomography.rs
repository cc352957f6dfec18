//! State reconstruction from outcome probabilities of `d + 1` mutually
//! unbiased bases (d = 2, 3).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::instrument::trace_product;
use super::state::{c, check_orthonormal_basis, hermitian_eigenvalues, identity, DensityOperator, PureState};
use super::{CMatrix, CVector, QsimError, ALGEBRA_TOL, SPECTRAL_TOL};
use crate::json;

#[derive(Clone, Debug)]
pub struct MubSet {
    dim: usize,
    labels: Vec<String>,
    bases: Vec<Vec<PureState>>,
}

impl MubSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[Vec<PureState>] {
        &self.bases
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Largest deviation of `|⟨e^k_i|e^l_j⟩|²` from `1/d` over distinct bases.
    pub fn unbiasedness_error(&self) -> f64 {
        let target = 1.0 / self.dim as f64;
        let mut worst: f64 = 0.0;
        for (k, bk) in self.bases.iter().enumerate() {
            for bl in &self.bases[k + 1..] {
                for u in bk {
                    for v in bl {
                        worst = worst.max((u.fidelity(v) - target).abs());
                    }
                }
            }
        }
        worst
    }
}

fn state(amps: Vec<Complex64>) -> PureState {
    PureState::new(CVector::from_vec(amps)).expect("MUB vectors are unit length")
}

/// Complete MUB set: Z, X, Y eigenbases for qubits; for qutrits the
/// computational basis and the three bases `ω^{jk + s k²}/√3`, `s = 0, 1, 2`.
pub fn mub_set(d: usize) -> Result<MubSet, QsimError> {
    let (labels, bases) = match d {
        2 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let z = vec![PureState::basis(2, 0), PureState::basis(2, 1)];
            let x = vec![state(vec![c(h, 0.0), c(h, 0.0)]), state(vec![c(h, 0.0), c(-h, 0.0)])];
            let y = vec![state(vec![c(h, 0.0), c(0.0, h)]), state(vec![c(h, 0.0), c(0.0, -h)])];
            (vec!["Z", "X", "Y"], vec![z, x, y])
        }
        3 => {
            let norm = 1.0 / 3f64.sqrt();
            let omega = |n: usize| Complex64::from_polar(norm, 2.0 * PI * (n % 3) as f64 / 3.0);
            let mut bases = vec![(0..3).map(|k| PureState::basis(3, k)).collect::<Vec<_>>()];
            for s in 0..3 {
                bases.push((0..3).map(|j| state((0..3).map(|k| omega(j * k + s * k * k)).collect())).collect());
            }
            (vec!["Z", "F0", "F1", "F2"], bases)
        }
        _ => return Err(QsimError::UnsupportedDimension(d)),
    };
    for b in &bases {
        check_orthonormal_basis(b)?;
    }
    Ok(MubSet { dim: d, labels: labels.into_iter().map(String::from).collect(), bases })
}

/// `(d+1) × d` table of Born probabilities, row `k` for basis `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbTable {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ProbTable {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.labels
                .iter()
                .zip(&self.rows)
                .map(|(l, r)| json!({"basis": l, "probs": r.iter().map(|&p| json::num(p)).collect::<Vec<_>>()}))
                .collect(),
        )
    }
}

pub fn state_to_probs(rho: &DensityOperator, m: &MubSet) -> Result<ProbTable, QsimError> {
    super::state::check_dims(m.dim(), rho.dim())?;
    let rows =
        m.bases().iter().map(|b| b.iter().map(|v| trace_product(rho.matrix(), &v.projector())).collect()).collect();
    Ok(ProbTable { labels: m.labels().to_vec(), rows })
}

/// Linear inversion `ρ = Σ_{k,j} p^k_j Π^k_j − I`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub matrix: CMatrix,
    /// False when the table is not quantum-consistent and the inverse has a negative eigenvalue.
    pub positive: bool,
}

impl Reconstruction {
    pub fn into_density(self) -> Result<DensityOperator, QsimError> {
        DensityOperator::new(self.matrix)
    }
}

pub fn probs_to_state(table: &[Vec<f64>], m: &MubSet) -> Result<Reconstruction, QsimError> {
    let d = m.dim();
    if table.len() != d + 1 {
        return Err(QsimError::MalformedTable(format!("expected {} rows, found {}", d + 1, table.len())));
    }
    let mut rho = -identity(d);
    for (k, (row, basis)) in table.iter().zip(m.bases()).enumerate() {
        if row.len() != d {
            return Err(QsimError::MalformedTable(format!("row {k} has {} entries, expected {d}", row.len())));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > SPECTRAL_TOL {
            return Err(QsimError::MalformedTable(format!("row {k} sums to {sum}")));
        }
        for (&p, v) in row.iter().zip(basis) {
            rho += v.projector() * c(p, 0.0);
        }
    }
    let rho = (&rho + rho.adjoint()) * c(0.5, 0.0);
    let positive = hermitian_eigenvalues(&rho)[0] >= -SPECTRAL_TOL;
    debug_assert!((rho.trace().re - 1.0).abs() < 1e3 * ALGEBRA_TOL);
    Ok(Reconstruction { matrix: rho, positive })
}
