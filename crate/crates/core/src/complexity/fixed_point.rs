use serde::{Deserialize, Serialize};

use super::estimators::{estimate, ComplexityEstimate, ComplexityKind};
use super::localized::LocalizedClass;
use super::ComplexityError;
use crate::datagen::JointSampler;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSearch {
    pub kappa_level: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FixedPoint {
    /// `n` is the first size whose `mean + 2 se` is below `threshold`;
    /// `below` is the estimate at `n - 1` when `n > n_min`.
    Found {
        n: usize,
        threshold: f64,
        at: ComplexityEstimate,
        below: Option<ComplexityEstimate>,
    },
    NotFound {
        n_max: usize,
        threshold: f64,
        at: ComplexityEstimate,
    },
}

impl FixedPoint {
    pub fn n(&self) -> Option<usize> {
        match self {
            FixedPoint::Found { n, .. } => Some(*n),
            FixedPoint::NotFound { .. } => None,
        }
    }

    /// Bracket check: at `n - 1` the estimate sits above the threshold up to
    /// two joint standard errors.
    pub fn bracket_ok(&self) -> bool {
        match self {
            FixedPoint::Found {
                threshold,
                at,
                below,
                ..
            } => {
                let upper_ok = at.upper() <= *threshold;
                let lower_ok = below.is_none_or(|b| {
                    let joint = (b.std_error.powi(2) + at.std_error.powi(2)).sqrt();
                    b.mean >= threshold - 2.0 * joint
                });
                upper_ok && lower_ok
            }
            FixedPoint::NotFound { .. } => false,
        }
    }
}

/// Threshold `kappa r` (intrinsic) or `kappa r^2` (multiplier).
pub fn threshold(kind: ComplexityKind, kappa_level: f64, radius: f64) -> f64 {
    match kind {
        ComplexityKind::Intrinsic => kappa_level * radius,
        ComplexityKind::Multiplier => kappa_level * radius * radius,
    }
}

/// Smallest `N` in `[n_min, n_max]` passing `mean + 2 se <= threshold`, by
/// doubling then bisection under common random numbers.
pub fn fixed_point(
    kind: ComplexityKind,
    localized: &LocalizedClass,
    sampler: &dyn JointSampler,
    search: &FixedPointSearch,
) -> Result<FixedPoint, ComplexityError> {
    let threshold = threshold(kind, search.kappa_level, localized.radius);
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(ComplexityError::InvalidArgument(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    if search.n_min == 0 || search.n_min > search.n_max {
        return Err(ComplexityError::InvalidArgument(format!(
            "invalid search range [{}, {}]",
            search.n_min, search.n_max
        )));
    }
    let eval = |n: usize| estimate(kind, localized, sampler, n, search.trials, search.seed);
    let passes = |e: &ComplexityEstimate| e.upper() <= threshold;

    let first = eval(search.n_min)?;
    if passes(&first) {
        return Ok(FixedPoint::Found {
            n: search.n_min,
            threshold,
            at: first,
            below: None,
        });
    }
    let (mut lo, mut lo_est) = (search.n_min, first);
    let (mut hi, mut hi_est) = loop {
        let next = (lo * 2).min(search.n_max);
        let est = eval(next)?;
        if passes(&est) {
            break (next, est);
        }
        if next == search.n_max {
            return Ok(FixedPoint::NotFound {
                n_max: search.n_max,
                threshold,
                at: est,
            });
        }
        lo = next;
        lo_est = est;
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let est = eval(mid)?;
        if passes(&est) {
            hi = mid;
            hi_est = est;
        } else {
            lo = mid;
            lo_est = est;
        }
    }
    Ok(FixedPoint::Found {
        n: hi,
        threshold,
        at: hi_est,
        below: Some(lo_est),
    })
}
