//! Exact and statistical verifiers: essential subsets, the population
//! two-round midpoint argument, and the sufficient conditions behind the
//! tournament's guarantee.

mod diagnostics;
mod essential;
mod fuzz;
mod two_round;

use thiserror::Error;

use crate::model::{HypothesisId, ModelError};
use crate::tournament::TournamentError;

pub use diagnostics::{
    condition_diagnostics, ConditionParams, DiagnosticsReport, MemberDiagnostics,
};
pub use essential::{
    essential_check, p0_population_filter, EssentialReport, Violation, INEQUALITY_TOL,
};
pub use fuzz::{fuzz_two_round, random_instance, FuzzInstance, FuzzReport, FuzzViolation};
pub use two_round::{two_round_oracle, two_round_with, MidpointReport, Thinning, MAX_RHO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerificationError {
    #[error("minimizer {0} is not in the class")]
    MissingMinimizer(HypothesisId),
    #[error("rho = {0} exceeds 1/18")]
    RhoTooLarge(f64),
    #[error("invalid condition parameters: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tournament(#[from] TournamentError),
}
