//! Seeded scenario generators: covariates, dictionaries and targets.

mod adversarial;
mod generate;
mod spec;

use thiserror::Error;

use crate::model::ModelError;

pub use adversarial::{adversarial_spec, adversarial_two_point};
pub use generate::{bounded_view, generate, JointSampler, Problem};
pub use spec::{CovarianceSpec, Geometry, ScenarioSpec, TargetPoint, TargetSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatagenError {
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
