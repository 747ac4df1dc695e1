use serde::{Deserialize, Serialize};

use super::ledger::MatchLedger;
use super::params::TournamentParams;
use super::TournamentError;
use crate::model::{EvalTable, FunctionClass, Hypothesis, HypothesisId, LabeledSample, Segment};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTrace {
    pub class: Vec<HypothesisId>,
    pub ledger: MatchLedger,
    pub winners: Vec<HypothesisId>,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoStageTrace {
    pub stage1: StageTrace,
    /// Midpoint closure of the first-stage winners.
    pub closure: Vec<HypothesisId>,
    pub stage2: StageTrace,
}

impl TwoStageTrace {
    pub fn f1(&self) -> &[HypothesisId] {
        &self.stage1.winners
    }

    pub fn f2(&self) -> &[HypothesisId] {
        &self.stage2.winners
    }

    pub fn fallback(&self) -> bool {
        self.stage1.fallback || self.stage2.fallback
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoStageOutcome {
    pub selected: Hypothesis,
    pub trace: TwoStageTrace,
}

/// One round: distances on `distance`, matches on `matches`, returns the winners.
pub fn run_stage(
    class: &FunctionClass,
    sample: &LabeledSample,
    distance: Segment,
    matches: Segment,
    params: &TournamentParams,
) -> Result<(FunctionClass, StageTrace), TournamentError> {
    let distance_table = EvalTable::evaluate(class, sample, sample.segment(distance))?;
    let match_table = EvalTable::evaluate(class, sample, sample.segment(matches))?;
    let ledger = MatchLedger::build(&distance_table, &match_table, params)?;
    let winners = ledger.winners().to_vec();
    let fallback = ledger.fallback();
    let kept = class.subset(&winners)?;
    Ok((
        kept,
        StageTrace {
            class: class.ids(),
            ledger,
            winners,
            fallback,
        },
    ))
}

/// Runs both rounds and returns the smallest-id member of the final winners.
pub fn run_two_stage(
    class: &FunctionClass,
    sample: &LabeledSample,
    params: &TournamentParams,
) -> Result<TwoStageOutcome, TournamentError> {
    if sample.segment_len() != params.n_points {
        return Err(TournamentError::LengthMismatch {
            expected: params.n_points,
            found: sample.segment_len(),
        });
    }
    let (f1, stage1) = run_stage(class, sample, Segment::Distance1, Segment::Match1, params)?;
    let closure = f1.midpoint_closure()?;
    let (f2, stage2) = run_stage(
        &closure,
        sample,
        Segment::Distance2,
        Segment::Match2,
        params,
    )?;
    let selected = f2
        .members()
        .iter()
        .min_by_key(|h| h.id)
        .cloned()
        .ok_or(TournamentError::Model(crate::model::ModelError::EmptyClass))?;
    Ok(TwoStageOutcome {
        selected,
        trace: TwoStageTrace {
            stage1,
            closure: closure.ids(),
            stage2,
        },
    })
}
