//! Monte Carlo estimates of localized complexities, their sample-size fixed
//! points, the uniform-integrability level `kappa(xi)` and the interaction `L_T`.

mod estimators;
mod fixed_point;
mod interaction;
mod kappa;
mod localized;

use thiserror::Error;

use crate::model::ModelError;

pub use estimators::{
    estimate, multiplier_sup, rademacher_sup, ComplexityEstimate, ComplexityKind,
};
pub use fixed_point::{fixed_point, threshold, FixedPoint, FixedPointSearch};
pub use interaction::{l_t_estimate, InteractionEstimate};
pub use kappa::{class_kappa, kappa_estimate, KAPPA_GRID_RATIO, KAPPA_MAX};
pub use localized::LocalizedClass;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexityError {
    #[error("need at least 2 trials, got {0}")]
    TooFewTrials(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("no kappa up to 1e4 satisfies the tail condition")]
    GridExhausted,
    #[error(transparent)]
    Model(#[from] ModelError),
}
