use kscert::peres_ks::PeresStructure;
use kscert::qsim::{PureState, QsimError};
use kscert::stairs::{
    conjugate_state, full_report, local_value_problem, max_entangled, measure_at_a, verify_certainties, StairsError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn every_basis_and_outcome_is_certain() {
    let report = verify_certainties(&PeresStructure::build(), &[]).unwrap();
    assert_eq!(report.entries.len(), 120);
    assert!(report.all_certain());
    assert!(report.probability_sum_error() < 1e-12);
    for e in &report.entries {
        assert!((e.prob_at_a - 1.0 / 3.0).abs() < 1e-12);
        assert!((e.fidelity_b - 1.0).abs() < 1e-12);
    }
}

#[test]
fn full_report_carries_unsat_certificate() {
    let r = full_report().unwrap();
    assert!(r.coloring.as_ref().unwrap().is_unsat());
    let v = r.to_json();
    assert_eq!(v["summary"]["all_certain"], true);
    assert_eq!(v["summary"]["coloring"], "UNSAT");
    assert_eq!(v["records"].as_array().unwrap().len(), 120);
}

#[test]
fn assembled_problem_matches_peres_module() {
    let p = PeresStructure::build();
    assert_eq!(local_value_problem(&p), p.problem());
}

#[test]
fn out_of_range_basis() {
    let p = PeresStructure::build();
    assert!(matches!(verify_certainties(&p, &[0]), Err(StairsError::BasisOutOfRange(0, 40))));
    assert!(matches!(verify_certainties(&p, &[41]), Err(StairsError::BasisOutOfRange(41, 40))));
}

/// Steering holds for arbitrary complex bases, not only the real Peres rays.
#[test]
fn conjugate_basis_steers_any_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let pair = max_entangled(3);
    for _ in 0..20 {
        let first = PureState::random(3, &mut rng);
        let mut psi = vec![first.clone()];
        psi.extend(kscert::qsim::orthonormal_completion(&first));
        let conj: Vec<PureState> = psi.iter().map(conjugate_state).collect();
        for (j, out) in measure_at_a(&pair, &conj).unwrap().into_iter().enumerate() {
            assert!((out.probability - 1.0 / 3.0).abs() < 1e-12);
            assert!((out.conditional_b.unwrap().fidelity_with(&psi[j]) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn measure_rejects_non_basis() {
    let pair = max_entangled(3);
    let bad = vec![PureState::basis(3, 0), PureState::basis(3, 0), PureState::basis(3, 2)];
    assert!(matches!(measure_at_a(&pair, &bad), Err(StairsError::Qsim(QsimError::NotOrthonormal(_)))));
}
