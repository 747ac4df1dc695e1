use super::ComplexityError;
use crate::datagen::JointSampler;
use crate::model::FunctionClass;
use crate::rng::stream;

pub const KAPPA_GRID_RATIO: f64 = 1.01;
pub const KAPPA_MAX: f64 = 1e4;

/// Smallest `kappa = 1.01^k` in `[1, 1e4]` with
/// `mean(w^2 1{|w| >= kappa ||w||}) <= xi ||w||^2`, on the empirical measure.
pub fn kappa_estimate(w: &[f64], xi: f64) -> Result<f64, ComplexityError> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(ComplexityError::InvalidArgument(format!(
            "xi must lie in (0, 1), got {xi}"
        )));
    }
    let mut abs: Vec<f64> = w.iter().map(|x| x.abs()).collect();
    if abs.iter().any(|x| !x.is_finite()) {
        return Err(ComplexityError::Degenerate("non-finite sample".into()));
    }
    abs.sort_by(f64::total_cmp);
    let n = abs.len() as f64;
    // tail[i] = sum of squares of abs[i..]
    let mut tail = vec![0.0; abs.len() + 1];
    for i in (0..abs.len()).rev() {
        tail[i] = tail[i + 1] + abs[i] * abs[i];
    }
    let second_moment = tail[0] / n;
    if second_moment <= 0.0 {
        return Err(ComplexityError::Degenerate("all samples are zero".into()));
    }
    let norm = second_moment.sqrt();
    let budget = xi * second_moment;
    let mut k = 0;
    loop {
        let kappa = KAPPA_GRID_RATIO.powi(k);
        if kappa > KAPPA_MAX {
            return Err(ComplexityError::GridExhausted);
        }
        let cut = abs.partition_point(|&a| a < kappa * norm);
        if tail[cut] / n <= budget {
            return Ok(kappa);
        }
        k += 1;
    }
}

/// `max(1, max over member pairs of kappa(xi))` from `n_draws` covariates.
pub fn class_kappa(
    class: &FunctionClass,
    sampler: &dyn JointSampler,
    xi: f64,
    n_draws: usize,
    seed: u64,
) -> Result<f64, ComplexityError> {
    let d = sampler.dim();
    let mut rng = stream(seed, "kappa", 0);
    let mut xs = vec![0.0; n_draws * d];
    for i in 0..n_draws {
        sampler.draw(&mut rng, &mut xs[i * d..(i + 1) * d]);
    }
    let coefs: Vec<&[f64]> = class
        .members()
        .iter()
        .map(|h| {
            h.coefficients()
                .ok_or(crate::model::ModelError::NotLinear(h.id))
        })
        .collect::<Result<_, _>>()?;
    let mut best: f64 = 1.0;
    let mut w = vec![0.0; n_draws];
    for a in 0..coefs.len() {
        for b in a + 1..coefs.len() {
            for (i, wi) in w.iter_mut().enumerate() {
                let x = &xs[i * d..(i + 1) * d];
                *wi = x
                    .iter()
                    .zip(coefs[a].iter().zip(coefs[b]))
                    .map(|(xv, (p, q))| xv * (p - q))
                    .sum();
            }
            match kappa_estimate(&w, xi) {
                Ok(k) => best = best.max(k),
                Err(ComplexityError::Degenerate(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(best)
}
