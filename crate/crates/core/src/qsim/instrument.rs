use super::state::{c, check_dims, identity, max_abs, DensityOperator, Effect, Observable, Povm, PureState};
use super::{CMatrix, QsimError, ALGEBRA_TOL, SPECTRAL_TOL};

/// Outcome-indexed Kraus operators `A_dj`; outcome `d` maps
/// `ρ ↦ Σ_j A_dj ρ A_dj†`, and the sum over all outcomes is trace preserving.
#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    dim: usize,
    kraus: Vec<Vec<CMatrix>>,
}

impl Instrument {
    pub fn new(kraus: Vec<Vec<CMatrix>>) -> Result<Self, QsimError> {
        let dim = kraus.iter().flatten().next().ok_or(QsimError::Empty)?.nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for a in kraus.iter().flatten() {
            check_dims(dim, a.nrows())?;
            check_dims(dim, a.ncols())?;
            sum += a.adjoint() * a;
        }
        let err = max_abs(&(sum - identity(dim)));
        if err > ALGEBRA_TOL {
            return Err(QsimError::InstrumentNotComplete(err));
        }
        Ok(Instrument { dim, kraus })
    }

    /// Single outcome, single Kraus operator `I`.
    pub fn identity(d: usize) -> Self {
        Instrument { dim: d, kraus: vec![vec![identity(d)]] }
    }

    /// Von Neumann measurement in an orthonormal basis; outcome `k` keeps `|b_k⟩⟨b_k|`.
    pub fn projective(basis: &[PureState]) -> Result<Self, QsimError> {
        super::state::check_orthonormal_basis(basis)?;
        Instrument::new(basis.iter().map(|b| vec![b.projector()]).collect())
    }

    /// Unitary evolution as a one-outcome instrument.
    pub fn unitary(u: CMatrix) -> Result<Self, QsimError> {
        Instrument::new(vec![vec![u]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcome_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self, outcome: usize) -> Result<&[CMatrix], QsimError> {
        self.kraus.get(outcome).map(Vec::as_slice).ok_or(QsimError::UnknownOutcome(outcome))
    }

    /// All Kraus operators under one outcome: the channel that ignores the result.
    pub fn coarse_grained(&self) -> Instrument {
        Instrument { dim: self.dim, kraus: vec![self.kraus.iter().flatten().cloned().collect()] }
    }

    /// `𝒜_d(ρ)` applied to an arbitrary operator.
    pub fn apply(&self, outcome: usize, m: &CMatrix) -> Result<CMatrix, QsimError> {
        check_dims(self.dim, m.nrows())?;
        let ops = self.kraus(outcome)?;
        Ok(ops.iter().map(|a| a * m * a.adjoint()).fold(CMatrix::zeros(self.dim, self.dim), |acc, x| acc + x))
    }

    /// `E_d = Σ_j A_dj† A_dj`.
    pub fn effect(&self, outcome: usize) -> Result<Effect, QsimError> {
        let e = self
            .kraus(outcome)?
            .iter()
            .map(|a| a.adjoint() * a)
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, x| acc + x);
        Effect::new(e)
    }

    pub fn povm(&self) -> Povm {
        let effects =
            (0..self.outcome_count()).map(|d| self.effect(d).expect("completeness bounds every effect")).collect();
        Povm::new(effects).expect("completeness was checked on construction")
    }

    /// `p_d(ρ) = tr Σ_j A_dj ρ A_dj†`.
    pub fn probability(&self, rho: &DensityOperator, outcome: usize) -> Result<f64, QsimError> {
        Ok(self.apply(outcome, rho.matrix())?.trace().re)
    }
}

/// `tr(ρE)`, clamped to `[0, 1]`.
pub fn born_prob(rho: &DensityOperator, e: &Effect) -> Result<f64, QsimError> {
    check_dims(rho.dim(), e.dim())?;
    Ok(trace_product(rho.matrix(), e.matrix()).clamp(0.0, 1.0))
}

pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    // tr(AB) = Σ_ij A_ij B_ji
    let mut s = c(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s.re
}

/// Probability of each outcome of a POVM.
pub fn povm_probs(rho: &DensityOperator, povm: &Povm) -> Result<Vec<f64>, QsimError> {
    povm.effects().iter().map(|e| born_prob(rho, e)).collect()
}

/// Posterior `𝒜_d(ρ)/p_d(ρ)`; conditioning on an outcome with `p_d ≤ 1e−12` is an error.
pub fn update(rho: &DensityOperator, inst: &Instrument, outcome: usize) -> Result<DensityOperator, QsimError> {
    let out = inst.apply(outcome, rho.matrix())?;
    let p = out.trace().re;
    if p <= ALGEBRA_TOL {
        return Err(QsimError::ImpossibleOutcome(p));
    }
    let m = out / c(p, 0.0);
    DensityOperator::new((&m + m.adjoint()) * c(0.5, 0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Preparation {
    NotPreparation,
    /// Prepares `σ` whenever the outcome occurs, but the outcome is not certain.
    Stochastic(DensityOperator),
    /// Prepares `σ` with probability one for every input.
    Deterministic(DensityOperator),
}

impl Preparation {
    pub fn state(&self) -> Option<&DensityOperator> {
        match self {
            Preparation::NotPreparation => None,
            Preparation::Stochastic(s) | Preparation::Deterministic(s) => Some(s),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Preparation::NotPreparation => "not_preparation",
            Preparation::Stochastic(_) => "stochastic",
            Preparation::Deterministic(_) => "deterministic",
        }
    }
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ 𝒜_d(|i⟩⟨j|)`, input factor first.
pub fn choi_matrix(inst: &Instrument, outcome: usize) -> Result<CMatrix, QsimError> {
    let d = inst.dim();
    let mut j = CMatrix::zeros(d * d, d * d);
    for r in 0..d {
        for s in 0..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(r, s)] = c(1.0, 0.0);
            let img = inst.apply(outcome, &unit)?;
            for a in 0..d {
                for b in 0..d {
                    j[(r * d + a, s * d + b)] = img[(a, b)];
                }
            }
        }
    }
    Ok(j)
}

/// Realignment `R[(r,s),(a,b)] = J[(r,a),(s,b)]`; a product `X ⊗ Y` becomes `vec(X) vec(Y)ᵀ`.
pub fn reshuffle(j: &CMatrix, d: usize) -> CMatrix {
    CMatrix::from_fn(d * d, d * d, |row, col| {
        let (r, s) = (row / d, row % d);
        let (a, b) = (col / d, col % d);
        j[(r * d + a, s * d + b)]
    })
}

/// Decides whether outcome `d` is a preparation `𝒜_d(ρ) = tr(ρE_d) σ`.
///
/// The outcome prepares a state iff its realigned Choi matrix
/// `vec(E_dᵀ) vec(σ)ᵀ` has rank one (all singular values after the first
/// at most 1e−10). It is deterministic when additionally `E_d = I`.
pub fn classify_preparation(inst: &Instrument, outcome: usize) -> Result<Preparation, QsimError> {
    let d = inst.dim();
    let r = reshuffle(&choi_matrix(inst, outcome)?, d);
    let mut sv: Vec<f64> = r.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv[0] <= SPECTRAL_TOL || sv[1..].iter().any(|&s| s > SPECTRAL_TOL) {
        return Ok(Preparation::NotPreparation);
    }
    // 𝒜_d(I) = tr(E_d) σ
    let img = inst.apply(outcome, &identity(d))?;
    let t = img.trace().re;
    let sigma = img / c(t, 0.0);
    let sigma = DensityOperator::new((&sigma + sigma.adjoint()) * c(0.5, 0.0))?;
    let e = inst.effect(outcome)?;
    if max_abs(&(e.matrix() - identity(d))) <= ALGEBRA_TOL {
        Ok(Preparation::Deterministic(sigma))
    } else {
        Ok(Preparation::Stochastic(sigma))
    }
}

/// The eigenvalue whose eigenspace has probability ≥ 1 − 1e−10, if any.
///
/// Projectors sharing an eigenvalue are pooled, so a degenerate outcome
/// counts as one.
pub fn certainty_check(rho: &DensityOperator, obs: &Observable) -> Result<Option<f64>, QsimError> {
    check_dims(obs.dim(), rho.dim())?;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    for (k, &lambda) in obs.eigenvalues().iter().enumerate() {
        let p = trace_product(rho.matrix(), &obs.projector(k));
        match pooled.iter_mut().find(|(l, _)| (l - lambda).abs() <= ALGEBRA_TOL) {
            Some((_, acc)) => *acc += p,
            None => pooled.push((lambda, p)),
        }
    }
    Ok(pooled.into_iter().find(|&(_, p)| p >= 1.0 - SPECTRAL_TOL).map(|(l, _)| l))
}
