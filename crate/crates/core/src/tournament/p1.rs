use super::TournamentError;

fn check_lengths(a: &[f64], b: &[f64]) -> Result<(), TournamentError> {
    if a.len() != b.len() {
        return Err(TournamentError::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// The `ell`-th largest of `|f_i - h_i|`.
pub fn p1_distance(values_h: &[f64], values_f: &[f64], ell: usize) -> Result<f64, TournamentError> {
    check_lengths(values_h, values_f)?;
    let n = values_h.len();
    if ell == 0 || ell > n {
        return Err(TournamentError::EllOutOfRange { ell, n });
    }
    let mut diffs: Vec<f64> = values_h
        .iter()
        .zip(values_f)
        .map(|(h, f)| (f - h).abs())
        .collect();
    let (_, value, _) = diffs.select_nth_unstable_by(n - ell, f64::total_cmp);
    Ok(*value)
}

/// `sqrt(mean (h_i - f_i)^2)`.
pub fn bounded_p1_distance(values_h: &[f64], values_f: &[f64]) -> Result<f64, TournamentError> {
    check_lengths(values_h, values_f)?;
    if values_h.is_empty() {
        return Err(TournamentError::EllOutOfRange { ell: 1, n: 0 });
    }
    let sum: f64 = values_h
        .iter()
        .zip(values_f)
        .map(|(h, f)| (h - f) * (h - f))
        .sum();
    Ok((sum / values_h.len() as f64).sqrt())
}
