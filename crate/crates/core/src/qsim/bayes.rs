use super::QsimError;

/// Posterior `Pr(h|d) = Pr(d|h) Pr(h) / Pr(d)`.
///
/// `likelihoods[h][d]` is `Pr(d|h)`.
pub fn bayes_update(prior: &[f64], likelihoods: &[Vec<f64>], datum: usize) -> Result<Vec<f64>, QsimError> {
    if prior.is_empty() {
        return Err(QsimError::Empty);
    }
    if likelihoods.len() != prior.len() {
        return Err(QsimError::DimensionMismatch { expected: prior.len(), found: likelihoods.len() });
    }
    if prior.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(QsimError::BadProbability("prior entries must lie in [0, 1]".into()));
    }
    let total: f64 = prior.iter().sum();
    if (total - 1.0).abs() > super::ALGEBRA_TOL {
        return Err(QsimError::BadProbability(format!("prior sums to {total}")));
    }
    let mut joint = Vec::with_capacity(prior.len());
    for (row, &p) in likelihoods.iter().zip(prior) {
        let l = *row.get(datum).ok_or(QsimError::UnknownOutcome(datum))?;
        if !(0.0..=1.0).contains(&l) {
            return Err(QsimError::BadProbability(format!("likelihood {l} outside [0, 1]")));
        }
        joint.push(l * p);
    }
    let evidence: f64 = joint.iter().sum();
    if evidence <= 0.0 {
        return Err(QsimError::ImpossibleOutcome(evidence));
    }
    Ok(joint.into_iter().map(|x| x / evidence).collect())
}
