//! The two-round median-of-means tournament.
//!
//! Each round estimates pairwise distances on one quarter of the sample and
//! plays block-wise home matches on the next; members that win every home
//! match advance. The first round's winners are closed under midpoints and the
//! second round is played on that closure.

mod ledger;
mod p1;
mod params;
mod two_stage;

use thiserror::Error;

use crate::model::{HypothesisId, ModelError};

pub use ledger::{
    beats, block_stats, winners, BlockPartition, BlockStats, MatchLedger, PairRecord,
};
pub use p1::{bounded_p1_distance, p1_distance};
pub use params::{
    DistanceEstimator, KappaVariant, MatchRule, ParamOverrides, TournamentParams, DEFAULT_C0,
    DEFAULT_ELL_DIVISOR,
};
pub use two_stage::{run_stage, run_two_stage, StageTrace, TwoStageOutcome, TwoStageTrace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TournamentError {
    #[error("order statistic index {ell} outside 1..={n}")]
    EllOutOfRange { ell: usize, n: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cannot split {n_points} points into {n_blocks} non-empty blocks")]
    EmptyBlock { n_points: usize, n_blocks: usize },
    #[error("distance and match tables list different hypotheses")]
    TableMismatch,
    #[error("unknown hypothesis id {0}")]
    UnknownId(HypothesisId),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
