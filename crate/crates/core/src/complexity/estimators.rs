use rand::Rng;
use serde::{Deserialize, Serialize};

use super::localized::LocalizedClass;
use super::ComplexityError;
use crate::datagen::JointSampler;
use crate::rng::stream;
use crate::stats::RunningStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexityKind {
    /// Plain Rademacher average, compared with `kappa * r`.
    Intrinsic,
    /// Residual-weighted average, compared with `kappa * r^2`.
    Multiplier,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
    pub n: usize,
    pub kind: ComplexityKind,
}

impl ComplexityEstimate {
    /// `mean + 2 * std_error`.
    pub fn upper(&self) -> f64 {
        self.mean + 2.0 * self.std_error
    }
}

/// One trial: `max_l length_l |(1/N) sum eps_i w_i u_l(X_i)|`.
///
/// Trial `t` reads its own stream, so the first `N` points are shared by every
/// sample size (common random numbers across `N`).
fn trial_sup(
    localized: &LocalizedClass,
    sampler: &dyn JointSampler,
    kind: ComplexityKind,
    n: usize,
    seed: u64,
    trial: usize,
) -> f64 {
    let d = localized.dim();
    let mut rng = stream(seed, "complexity-trial", trial as u64);
    let mut x = vec![0.0; d];
    let mut acc = vec![0.0; d];
    for _ in 0..n {
        let y = sampler.draw(&mut rng, &mut x);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let weight = match kind {
            ComplexityKind::Intrinsic => sign,
            ComplexityKind::Multiplier => {
                let fit: f64 = x
                    .iter()
                    .zip(&localized.center_coefficients)
                    .map(|(a, b)| a * b)
                    .sum();
                sign * (fit - y)
            }
        };
        for (a, xi) in acc.iter_mut().zip(&x) {
            *a += weight * xi;
        }
    }
    localized
        .directions
        .iter()
        .zip(&localized.lengths)
        .map(|(u, len)| {
            let s: f64 = u.iter().zip(&acc).map(|(a, b)| a * b).sum();
            len * (s / n as f64).abs()
        })
        .fold(0.0, f64::max)
}

pub fn estimate(
    kind: ComplexityKind,
    localized: &LocalizedClass,
    sampler: &dyn JointSampler,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ComplexityEstimate, ComplexityError> {
    if trials < 2 {
        return Err(ComplexityError::TooFewTrials(trials));
    }
    if n == 0 {
        return Err(ComplexityError::InvalidArgument(
            "sample size must be positive".into(),
        ));
    }
    if sampler.dim() != localized.dim() {
        return Err(ComplexityError::InvalidArgument(format!(
            "sampler dimension {} does not match class dimension {}",
            sampler.dim(),
            localized.dim()
        )));
    }
    let run = |t: usize| trial_sup(localized, sampler, kind, n, seed, t);
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = (0..trials).map(run).collect();
    let stats: RunningStats = values.into_iter().collect();
    Ok(ComplexityEstimate {
        mean: stats.mean(),
        std_error: stats.std_error(),
        trials,
        n,
        kind,
    })
}

/// Estimates `E sup |(1/N) sum eps_i u(X_i)|` over the extreme points.
pub fn rademacher_sup(
    localized: &LocalizedClass,
    sampler: &dyn JointSampler,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ComplexityEstimate, ComplexityError> {
    estimate(
        ComplexityKind::Intrinsic,
        localized,
        sampler,
        n,
        trials,
        seed,
    )
}

/// As [`rademacher_sup`] with each summand weighted by `center(X_i) - Y_i`.
pub fn multiplier_sup(
    localized: &LocalizedClass,
    sampler: &dyn JointSampler,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ComplexityEstimate, ComplexityError> {
    estimate(
        ComplexityKind::Multiplier,
        localized,
        sampler,
        n,
        trials,
        seed,
    )
}
