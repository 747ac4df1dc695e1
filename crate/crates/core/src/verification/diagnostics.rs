use serde::{Deserialize, Serialize};

use super::VerificationError;
use crate::model::{
    population_minimizer, EvalTable, FunctionClass, HypothesisId, LabeledSample, PopulationOracle,
    Segment,
};
use crate::tournament::{
    block_stats, bounded_p1_distance, p1_distance, BlockPartition, DistanceEstimator,
    ParamOverrides, TournamentParams,
};

/// Constants of the three sufficient conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionParams {
    /// Lower isomorphism constant of the distance estimate, `< 1`.
    pub alpha: f64,
    /// Upper isomorphism constant, `> 1`.
    pub beta: f64,
    /// Oscillation allowance for the multiplier term, in units of `r^2`.
    pub gamma: f64,
    /// Relative slack on the quadratic and multiplier terms, in `(0, 1)`.
    pub nu: f64,
    /// Extra majority margin reported alongside the strict majority, in `(0, 1/2)`.
    pub eta: f64,
}

impl ConditionParams {
    /// `alpha = 1/(2 sqrt 10)`, `beta = 3 kappa1`, `gamma = 4`, `nu = 1/2`, `eta = 1/4`.
    pub fn with_kappa(kappa1: f64) -> Self {
        ConditionParams {
            alpha: 1.0 / (2.0 * 10f64.sqrt()),
            beta: 3.0 * kappa1,
            gamma: 4.0,
            nu: 0.5,
            eta: 0.25,
        }
    }

    pub fn validate(&self) -> Result<(), VerificationError> {
        let ok = self.alpha > 0.0
            && self.alpha < 1.0
            && self.beta > 1.0
            && self.gamma > 0.0
            && self.nu > 0.0
            && self.nu < 1.0
            && self.eta > 0.0
            && self.eta < 0.5;
        if ok {
            Ok(())
        } else {
            Err(VerificationError::InvalidParameter(format!("{self:?}")))
        }
    }

    pub fn theta2(&self) -> f64 {
        self.beta * self.beta / (self.alpha * self.alpha) + self.gamma
    }

    pub fn theta3(&self) -> f64 {
        2.0 * self.nu / (self.alpha * self.alpha)
    }

    pub fn theta4(&self) -> f64 {
        self.beta
    }

    /// `2 nu (1 + beta^2 / alpha^2)`.
    pub fn rho(&self) -> f64 {
        2.0 * self.nu * (1.0 + self.beta * self.beta / (self.alpha * self.alpha))
    }

    /// `sqrt(2 (gamma + beta^2/alpha^2)) r`.
    pub fn r_prime(&self, r: f64) -> f64 {
        (2.0 * (self.gamma + self.beta * self.beta / (self.alpha * self.alpha))).sqrt() * r
    }

    /// Tournament thresholds matching these conditions.
    pub fn overrides(&self, base: &ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            theta2: Some(self.theta2()),
            theta3: Some(self.theta3()),
            theta4: Some(self.theta4()),
            ..base.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberDiagnostics {
    pub id: HypothesisId,
    /// Exact `||h - h*||`.
    pub distance: f64,
    pub p1: f64,
    /// Exact `E M_{h,h*}`.
    pub expected_m: f64,
    pub condition1: bool,
    /// Blocks with the quadratic lower bound and multiplier lower bound, when `d >= r`.
    pub condition2_blocks: Option<usize>,
    /// Blocks with `|M_j - E M| <= gamma r^2`, when `d <= (beta/alpha) r`.
    pub condition3_blocks: Option<usize>,
    pub passes: bool,
    /// Every applicable block count reaches `(1/2 + eta) n`.
    pub passes_with_margin: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub minimizer: HypothesisId,
    pub n_blocks: usize,
    pub members: Vec<MemberDiagnostics>,
    pub all_pass: bool,
    /// Essential-subset constants the winners satisfy when `all_pass`.
    pub rho: f64,
    pub r_prime: f64,
    pub failing: Vec<HypothesisId>,
}

/// Evaluates the three conditions for every member against the class
/// minimizer, with distances from segment `distance` and blocks from `matches`.
/// `tournament` supplies `ell`, `n`, `r` and the distance estimator.
pub fn condition_diagnostics(
    class: &FunctionClass,
    sample: &LabeledSample,
    distance: Segment,
    matches: Segment,
    tournament: &TournamentParams,
    conditions: &ConditionParams,
    oracle: &PopulationOracle,
) -> Result<DiagnosticsReport, VerificationError> {
    conditions.validate()?;
    let r = tournament.r;
    let (alpha, beta, gamma, nu) = (
        conditions.alpha,
        conditions.beta,
        conditions.gamma,
        conditions.nu,
    );
    let star = population_minimizer(oracle, class)?;
    let star_pos = class.position(star.id).expect("minimizer is a member");
    let dist_table = EvalTable::evaluate(class, sample, sample.segment(distance))?;
    let match_table = EvalTable::evaluate(class, sample, sample.segment(matches))?;
    let partition = BlockPartition::new(match_table.n_points(), tournament.n_blocks)?;
    let n = partition.n_blocks();
    let majority = n / 2 + 1;
    let margin = ((0.5 + conditions.eta) * n as f64).ceil() as usize;

    let mut members = Vec::with_capacity(class.len());
    for (pos, h) in class.members().iter().enumerate() {
        let d = oracle.distance_between(h, star)?;
        let em = 2.0 * oracle.cross_term(h, star)?;
        let p1 = match tournament.distance {
            DistanceEstimator::OrderStatistic => p1_distance(
                dist_table.row(pos),
                dist_table.row(star_pos),
                tournament.ell,
            )?,
            DistanceEstimator::EmpiricalL2 => {
                bounded_p1_distance(dist_table.row(pos), dist_table.row(star_pos))?
            }
        };
        let condition1 = if p1 >= beta * r {
            p1 / beta <= d && d <= p1 / alpha
        } else {
            d <= beta / alpha * r
        };
        let stats = block_stats(
            match_table.row(pos),
            match_table.row(star_pos),
            match_table.responses(),
            &partition,
        )?;
        let condition2_blocks = (d >= r).then(|| {
            stats
                .q
                .iter()
                .zip(&stats.m)
                .filter(|(q, m)| **q >= (1.0 - nu) * d * d && **m - em >= -nu * d * d)
                .count()
        });
        let condition3_blocks = (d <= beta / alpha * r).then(|| {
            stats
                .m
                .iter()
                .filter(|m| (**m - em).abs() <= gamma * r * r)
                .count()
        });
        let counts = [condition2_blocks, condition3_blocks];
        let passes = condition1 && counts.iter().flatten().all(|&c| c >= majority);
        let passes_with_margin = condition1 && counts.iter().flatten().all(|&c| c >= margin);
        members.push(MemberDiagnostics {
            id: h.id,
            distance: d,
            p1,
            expected_m: em,
            condition1,
            condition2_blocks,
            condition3_blocks,
            passes,
            passes_with_margin,
        });
    }
    let failing: Vec<HypothesisId> = members.iter().filter(|m| !m.passes).map(|m| m.id).collect();
    Ok(DiagnosticsReport {
        minimizer: star.id,
        n_blocks: n,
        all_pass: failing.is_empty(),
        rho: conditions.rho(),
        r_prime: conditions.r_prime(r),
        members,
        failing,
    })
}
