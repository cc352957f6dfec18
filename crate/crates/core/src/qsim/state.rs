use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, CVector, QsimError, ALGEBRA_TOL, SPECTRAL_TOL};

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn hermiticity_error(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

fn check_square(m: &CMatrix) -> Result<usize, QsimError> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(QsimError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    Ok(m.nrows())
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<(), QsimError> {
    if expected == found {
        Ok(())
    } else {
        Err(QsimError::DimensionMismatch { expected, found })
    }
}

/// A unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self, QsimError> {
        if amplitudes.is_empty() {
            return Err(QsimError::DimensionMismatch { expected: 1, found: 0 });
        }
        let err = (amplitudes.norm_squared() - 1.0).abs();
        if err > ALGEBRA_TOL {
            return Err(QsimError::NotNormalized(err));
        }
        Ok(PureState { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self, QsimError> {
        let n = amplitudes.norm();
        if n <= 0.0 || !n.is_finite() {
            return Err(QsimError::NotNormalized(1.0));
        }
        PureState::new(amplitudes.unscale(n))
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self, QsimError> {
        PureState::new(CVector::from_column_slice(amplitudes))
    }

    pub fn from_real(components: &[f64]) -> Result<Self, QsimError> {
        PureState::normalized(CVector::from_iterator(components.len(), components.iter().map(|&x| c(x, 0.0))))
    }

    /// Computational basis vector `|k⟩` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = CVector::zeros(d);
        v[k] = c(1.0, 0.0);
        PureState { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator { matrix: self.projector() }
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState { amplitudes: self.amplitudes.kronecker(&other.amplitudes) }
    }

    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let v = CVector::from_fn(d, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        PureState::normalized(v).expect("gaussian vector is nonzero")
    }
}

/// A unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self, QsimError> {
        check_square(&matrix)?;
        let herm = hermiticity_error(&matrix);
        if herm > ALGEBRA_TOL {
            return Err(QsimError::NotHermitian(herm));
        }
        let tr = (trace(&matrix) - c(1.0, 0.0)).norm();
        if tr > ALGEBRA_TOL {
            return Err(QsimError::NotUnitTrace(tr));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -SPECTRAL_TOL {
            return Err(QsimError::NotPositive(min));
        }
        Ok(DensityOperator { matrix })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator { matrix: identity(d) * c(1.0 / d as f64, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with(&self, psi: &PureState) -> f64 {
        psi.amplitudes().dotc(&(&self.matrix * psi.amplitudes())).re
    }

    pub fn trace_distance(&self, other: &DensityOperator) -> f64 {
        trace_distance(&self.matrix, &other.matrix)
    }

    /// Ginibre-distributed random full-rank state.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let g = CMatrix::from_fn(d, d, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let m = &g * g.adjoint();
        let t = m.trace();
        let m = m / t;
        DensityOperator::new((&m + m.adjoint()) * c(0.5, 0.0)).expect("Ginibre state is valid")
    }
}

/// `½ Σ|λ_i(a − b)|`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b)).iter().map(|x| x.abs()).sum::<f64>()
}

/// Reduced state of the second factor of a `d_a ⊗ d_b` operator (A-major indexing).
pub fn partial_trace_first(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_b, d_b, |i, j| (0..d_a).map(|a| m[(a * d_b + i, a * d_b + j)]).sum())
}

/// Reduced state of the first factor of a `d_a ⊗ d_b` operator (A-major indexing).
pub fn partial_trace_second(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_a, d_a, |i, j| (0..d_b).map(|b| m[(i * d_b + b, j * d_b + b)]).sum())
}

/// A POVM element: Hermitian with spectrum in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    matrix: CMatrix,
}

impl Effect {
    pub fn new(matrix: CMatrix) -> Result<Self, QsimError> {
        check_square(&matrix)?;
        let herm = hermiticity_error(&matrix);
        if herm > ALGEBRA_TOL {
            return Err(QsimError::NotHermitian(herm));
        }
        let ev = hermitian_eigenvalues(&matrix);
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        if lo < -SPECTRAL_TOL || hi > 1.0 + SPECTRAL_TOL {
            return Err(QsimError::EffectOutOfRange { min: lo, max: hi });
        }
        Ok(Effect { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Effects summing to the identity; outcome `d` is the index into `effects`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<Effect>,
}

impl Povm {
    pub fn new(effects: Vec<Effect>) -> Result<Self, QsimError> {
        let first = effects.first().ok_or(QsimError::Empty)?;
        let d = first.dim();
        let mut sum = CMatrix::zeros(d, d);
        for e in &effects {
            check_dims(d, e.dim())?;
            sum += e.matrix();
        }
        let err = max_abs(&(sum - identity(d)));
        if err > ALGEBRA_TOL {
            return Err(QsimError::PovmNotComplete(err));
        }
        Ok(Povm { effects })
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }
}

/// `O = Σ λ_k |φ_k⟩⟨φ_k|` over an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Observable {
    eigenvalues: Vec<f64>,
    vectors: Vec<PureState>,
}

impl Observable {
    pub fn new(eigenvalues: Vec<f64>, vectors: Vec<PureState>) -> Result<Self, QsimError> {
        if eigenvalues.len() != vectors.len() {
            return Err(QsimError::DimensionMismatch { expected: vectors.len(), found: eigenvalues.len() });
        }
        check_orthonormal_basis(&vectors)?;
        Ok(Observable { eigenvalues, vectors })
    }

    /// The yes/no observable `|ψ⟩⟨ψ|`: eigenvalue 1 on `ψ`, 0 on an orthonormal completion.
    pub fn yes_no(psi: &PureState) -> Self {
        let mut vectors = vec![psi.clone()];
        vectors.extend(orthonormal_completion(psi));
        let mut eigenvalues = vec![0.0; vectors.len()];
        eigenvalues[0] = 1.0;
        Observable { eigenvalues, vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn projector(&self, k: usize) -> CMatrix {
        self.vectors[k].projector()
    }

    pub fn matrix(&self) -> CMatrix {
        self.vectors
            .iter()
            .zip(&self.eigenvalues)
            .map(|(v, &l)| v.projector() * c(l, 0.0))
            .fold(CMatrix::zeros(self.dim(), self.dim()), |a, b| a + b)
    }
}

/// Errors unless `vectors` is a complete orthonormal basis (to 1e−12).
pub fn check_orthonormal_basis(vectors: &[PureState]) -> Result<(), QsimError> {
    let d = vectors.first().ok_or(QsimError::Empty)?.dim();
    if vectors.len() != d {
        return Err(QsimError::DimensionMismatch { expected: d, found: vectors.len() });
    }
    for (i, u) in vectors.iter().enumerate() {
        check_dims(d, u.dim())?;
        for (j, v) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            let err = (u.inner(v) - c(target, 0.0)).norm();
            if err > ALGEBRA_TOL {
                return Err(QsimError::NotOrthonormal(err));
            }
        }
    }
    Ok(())
}

/// Gram–Schmidt completion of `psi` against the computational basis.
pub fn orthonormal_completion(psi: &PureState) -> Vec<PureState> {
    let d = psi.dim();
    let mut basis: Vec<CVector> = vec![psi.amplitudes().clone()];
    for k in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = PureState::basis(d, k).amplitudes().clone();
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        // re-orthogonalize once for stability
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let n = v.norm();
        if n > 1e-6 {
            basis.push(v.unscale(n));
        }
    }
    basis.into_iter().skip(1).map(|amplitudes| PureState { amplitudes }).collect()
}

/// Builds a matrix from real entries, row-major.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    DMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c(x, 0.0)))
}

#[cfg(test)]
pub fn real_vector(entries: &[f64]) -> CVector {
    nalgebra::DVector::from_iterator(entries.len(), entries.iter().map(|&x| c(x, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_state_norm_is_checked() {
        assert!(PureState::from_slice(&[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(PureState::from_real(&[1.0, 1.0]).is_ok());
        assert!(PureState::from_real(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn density_invariants_rejected() {
        let not_herm = real_matrix(2, 2, &[0.5, 0.1, 0.0, 0.5]);
        assert!(matches!(DensityOperator::new(not_herm), Err(QsimError::NotHermitian(_))));
        let bad_trace = real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.6]);
        assert!(matches!(DensityOperator::new(bad_trace), Err(QsimError::NotUnitTrace(_))));
        let negative = real_matrix(2, 2, &[1.5, 0.0, 0.0, -0.5]);
        assert!(matches!(DensityOperator::new(negative), Err(QsimError::NotPositive(_))));
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=9 {
            let rho = DensityOperator::random(d, &mut rng);
            assert!(DensityOperator::new(rho.matrix().clone()).is_ok());
            let psi = PureState::random(d, &mut rng);
            assert!((psi.to_density().purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn completion_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=5 {
            let psi = PureState::random(d, &mut rng);
            let mut all = vec![psi.clone()];
            all.extend(orthonormal_completion(&psi));
            check_orthonormal_basis(&all).unwrap();
            let obs = Observable::yes_no(&psi);
            assert!(max_abs(&(obs.matrix() - psi.projector())) < 1e-12);
        }
    }

    #[test]
    fn partial_traces_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = DensityOperator::random(2, &mut rng);
        let b = DensityOperator::random(3, &mut rng);
        let ab = a.matrix().kronecker(b.matrix());
        assert!(max_abs(&(partial_trace_first(&ab, 2, 3) - b.matrix())) < 1e-12);
        assert!(max_abs(&(partial_trace_second(&ab, 2, 3) - a.matrix())) < 1e-12);
    }

    #[test]
    fn effect_spectrum_checked() {
        assert!(Effect::new(real_matrix(2, 2, &[1.2, 0.0, 0.0, 0.0])).is_err());
        assert!(Effect::new(real_matrix(2, 2, &[0.3, 0.0, 0.0, 1.0])).is_ok());
        let half = Effect::new(identity(2) * c(0.5, 0.0)).unwrap();
        assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
        assert!(matches!(Povm::new(vec![half]), Err(QsimError::PovmNotComplete(_))));
    }
}
