use kscert::qsim::{
    bayes_update, born_prob, certainty_check, choi_matrix, circuit_instrument, classify_preparation, max_abs, mub_set,
    povm_probs, probs_to_state, run_circuit, state_to_probs, trace_distance, update, CMatrix, DensityOperator, Effect,
    Instrument, Observable, PrepCircuit, Preparation, PureState, QsimError,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Random instrument: a Haar-ish isometry `d → d·k·n` cut into `k·n` Kraus blocks.
fn random_instrument(d: usize, outcomes: usize, per_outcome: usize, rng: &mut ChaCha8Rng) -> Instrument {
    let blocks = outcomes * per_outcome;
    let v = gaussian(d * blocks, d, rng).qr().q();
    let kraus = (0..outcomes)
        .map(|o| (0..per_outcome).map(|i| v.rows((o * per_outcome + i) * d, d).into_owned()).collect())
        .collect();
    Instrument::new(kraus).unwrap()
}

/// Kraus set `√λ_j |v_j⟩⟨i|` that discards the input and prepares σ.
fn reset_to(sigma: &DensityOperator) -> Instrument {
    let d = sigma.dim();
    let eig = sigma.matrix().clone().symmetric_eigen();
    let mut ks = Vec::new();
    for j in 0..d {
        let lam = eig.eigenvalues[j].max(0.0);
        let v = eig.eigenvectors.column(j);
        for i in 0..d {
            let bra = PureState::basis(d, i).amplitudes().adjoint();
            ks.push(v * bra * Complex64::new(lam.sqrt(), 0.0));
        }
    }
    Instrument::new(vec![ks]).unwrap()
}

fn completeness_error(inst: &Instrument) -> f64 {
    let d = inst.dim();
    let mut sum = CMatrix::zeros(d, d);
    for o in 0..inst.outcome_count() {
        for k in inst.kraus(o).unwrap() {
            sum += k.adjoint() * k;
        }
    }
    max_abs(&(sum - CMatrix::identity(d, d)))
}

fn assert_density(rho: &DensityOperator) {
    let m = rho.matrix();
    assert!(max_abs(&(m - m.adjoint())) < 1e-12);
    assert!((m.trace().re - 1.0).abs() < 1e-12);
    assert!(rho.eigenvalues()[0] >= -1e-10);
}

#[test]
fn random_instruments_are_complete_and_probabilities_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let d = rng.random_range(2..=4);
        let inst = random_instrument(d, rng.random_range(1..=4), rng.random_range(1..=3), &mut rng);
        assert!(completeness_error(&inst) < 1e-12);
        let rho = DensityOperator::random(d, &mut rng);
        let probs = povm_probs(&rho, &inst.povm()).unwrap();
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-11);
        let o = rng.random_range(0..inst.outcome_count());
        if probs[o] > 1e-12 {
            assert_density(&update(&rho, &inst, o).unwrap());
        }
    }
}

#[test]
fn update_matches_direct_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inst = random_instrument(3, 2, 2, &mut rng);
    let rho = DensityOperator::random(3, &mut rng);
    let ks = inst.kraus(1).unwrap();
    let raw: CMatrix = ks.iter().map(|k| k * rho.matrix() * k.adjoint()).sum();
    let p = raw.trace().re;
    assert!((inst.probability(&rho, 1).unwrap() - p).abs() < 1e-12);
    let post = update(&rho, &inst, 1).unwrap();
    assert!(max_abs(&(post.matrix() - raw / Complex64::new(p, 0.0))) < 1e-12);
}

#[test]
fn impossible_outcome_is_an_error() {
    let inst = Instrument::projective(&[PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap();
    let rho = PureState::basis(2, 0).to_density();
    assert!(matches!(update(&rho, &inst, 1), Err(QsimError::ImpossibleOutcome(_))));
}

#[test]
fn preparation_means_update_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3] {
        let sigma = DensityOperator::random(d, &mut rng);
        let inst = reset_to(&sigma);
        let prep = classify_preparation(&inst, 0).unwrap();
        assert!(matches!(prep, Preparation::Deterministic(_)), "{prep:?}");
        assert!(prep.state().unwrap().trace_distance(&sigma) < 1e-10);
        for _ in 0..50 {
            let rho = DensityOperator::random(d, &mut rng);
            assert!(update(&rho, &inst, 0).unwrap().trace_distance(&sigma) < 1e-10);
        }
    }
}

#[test]
fn unitaries_and_generic_instruments_are_not_preparations() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u = gaussian(3, 3, &mut rng).qr().q();
    let inst = Instrument::unitary(u).unwrap();
    assert_eq!(classify_preparation(&inst, 0).unwrap(), Preparation::NotPreparation);
    let generic = random_instrument(2, 2, 1, &mut rng);
    assert_eq!(classify_preparation(&generic, 0).unwrap(), Preparation::NotPreparation);
}

#[test]
fn choi_matrix_trace_equals_dimension_for_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let inst = random_instrument(3, 1, 3, &mut rng);
    let j = choi_matrix(&inst, 0).unwrap();
    assert!((j.trace().re - 3.0).abs() < 1e-12);
    assert!(max_abs(&(&j - j.adjoint())) < 1e-12);
}

#[test]
fn circuit_instruments_are_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let phi = PureState::random(2, &mut rng);
        for c in [PrepCircuit::A, PrepCircuit::B, PrepCircuit::C] {
            assert!(completeness_error(&circuit_instrument(c, &phi).unwrap()) < 1e-12);
        }
    }
}

#[test]
fn circuits_a_and_b_agree_on_system_output() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let sys = PureState::random(2, &mut rng);
        let app = PureState::random(2, &mut rng);
        let a = run_circuit(PrepCircuit::A, &sys, &app).unwrap();
        let b = run_circuit(PrepCircuit::B, &sys, &app).unwrap();
        assert!(max_abs(&(a.system_out.matrix() - b.system_out.matrix())) < 1e-12);
        let [p0, p1] = a.outcomes.unwrap();
        assert!((p0 + p1 - 1.0).abs() < 1e-12);
    }
}

/// Independent oracle: B maps |s,a⟩ to |a, a⊕s⟩, so the system keeps the
/// apparatus populations and its coherence is scaled by ⟨σ_x⟩ of the input.
#[test]
fn circuit_b_system_output_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let sys = PureState::random(2, &mut rng);
        let app = PureState::random(2, &mut rng);
        let (s, g) = (sys.amplitudes(), app.amplitudes());
        let x_expect = 2.0 * (s[0] * s[1].conj()).re;
        let expected = CMatrix::from_fn(2, 2, |i, j| {
            let base = g[i] * g[j].conj();
            if i == j {
                base
            } else {
                base * x_expect
            }
        });
        let out = run_circuit(PrepCircuit::B, &sys, &app).unwrap();
        assert!(max_abs(&(out.system_out.matrix() - expected)) < 1e-12);
    }
}

#[test]
fn circuit_b_copies_pointer_states_and_plus_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
    for _ in 0..50 {
        let sys = PureState::random(2, &mut rng);
        for k in 0..2 {
            let app = PureState::basis(2, k);
            let out = run_circuit(PrepCircuit::B, &sys, &app).unwrap();
            assert!(max_abs(&(out.system_out.matrix() - app.projector())) < 1e-12);
        }
        let app = PureState::random(2, &mut rng);
        let out = run_circuit(PrepCircuit::B, &plus, &app).unwrap();
        assert!(max_abs(&(out.system_out.matrix() - app.projector())) < 1e-12);
    }
}

#[test]
fn born_probabilities_of_rank_one_effects() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let psi = PureState::random(3, &mut rng);
        let phi = PureState::random(3, &mut rng);
        let p = born_prob(&psi.to_density(), &Effect::new(phi.projector()).unwrap()).unwrap();
        assert!((p - psi.fidelity(&phi)).abs() < 1e-12);
    }
}

#[test]
fn certainty_only_for_eigenstates() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let psi = PureState::random(3, &mut rng);
    let obs = Observable::yes_no(&psi);
    let hit = certainty_check(&psi.to_density(), &obs).unwrap().expect("eigenstate");
    assert!((hit - 1.0).abs() < 1e-12);
    let other = PureState::random(3, &mut rng);
    assert_eq!(certainty_check(&other.to_density(), &obs).unwrap(), None);
}

#[test]
fn bayes_matches_hand_computation_and_normalizes() {
    let post = bayes_update(&[0.5, 0.5], &[vec![0.9, 0.1], vec![0.3, 0.7]], 0).unwrap();
    assert!((post[0] - 0.75).abs() < 1e-12 && (post[1] - 0.25).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let h = rng.random_range(2..6);
        let mut prior: Vec<f64> = (0..h).map(|_| rng.random::<f64>() + 0.01).collect();
        let s: f64 = prior.iter().sum();
        prior.iter_mut().for_each(|p| *p /= s);
        let lik: Vec<Vec<f64>> = (0..h)
            .map(|_| {
                let a = rng.random::<f64>();
                vec![a, 1.0 - a]
            })
            .collect();
        let post = bayes_update(&prior, &lik, 1).unwrap();
        assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn mub_round_trip_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in [2, 3] {
        let m = mub_set(d).unwrap();
        assert!(m.unbiasedness_error() < 1e-12);
        for _ in 0..100 {
            let rho = DensityOperator::random(d, &mut rng);
            let table = state_to_probs(&rho, &m).unwrap();
            for row in &table.rows {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            let back = probs_to_state(&table.rows, &m).unwrap();
            assert!(back.positive);
            assert!(trace_distance(&back.matrix, rho.matrix()) < 1e-10);
        }
    }
}

#[test]
fn uniform_table_gives_maximally_mixed() {
    for d in [2, 3] {
        let m = mub_set(d).unwrap();
        let rows = vec![vec![1.0 / d as f64; d]; d + 1];
        let back = probs_to_state(&rows, &m).unwrap().into_density().unwrap();
        assert!(back.trace_distance(&DensityOperator::maximally_mixed(d)) < 1e-12);
    }
}

#[test]
fn unsupported_mub_dimension() {
    assert!(mub_set(4).is_err());
}
