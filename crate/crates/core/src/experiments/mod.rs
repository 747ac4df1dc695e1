//! Config-driven Monte Carlo runs of the tournament and its baselines.

mod baselines;
mod config;
mod output;
mod runner;
mod sample_size;
pub mod studies;

use thiserror::Error;

use crate::complexity::{ComplexityError, ComplexityKind};
use crate::datagen::DatagenError;
use crate::model::ModelError;
use crate::tournament::TournamentError;
use crate::verification::VerificationError;

pub use baselines::{erm_baseline, midpoint_oracle};
pub use config::{AutoConstants, AutoMode, ExperimentConfig, KappaSettings, Procedure, SampleSize};
pub use output::{emit_results, write_summary_csv, write_trials_csv, TRIAL_COLUMNS};
pub use runner::{
    run_experiment, run_trials, summarize, ExperimentOutput, Manifest, PreparedExperiment,
    ProcedureSummary, RiskTable, TrialRecord,
};
pub use sample_size::{
    auto_sample_size, confidence_term, worst_case_term, AutoSampleSize, ClassComplexity,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("{kind:?} fixed point not found below n = {n_max}")]
    FixedPointNotFound { kind: ComplexityKind, n_max: usize },
    #[error(transparent)]
    Datagen(#[from] DatagenError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tournament(#[from] TournamentError),
    #[error(transparent)]
    Verification(#[from] VerificationError),
}
