use rand::Rng;
use serde::{Deserialize, Serialize};

use super::essential::{p0_population_filter, INEQUALITY_TOL};
use super::VerificationError;
use crate::model::{population_minimizer, FunctionClass, HypothesisId, PopulationOracle};
use crate::rng::StreamRng;

pub const MAX_RHO: f64 = 1.0 / 18.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MidpointReport {
    /// `max over F2 of risk - min over F of risk`.
    pub excess: f64,
    /// `3 r^2 / 2`.
    pub bound: f64,
    pub bound_ok: bool,
    pub f1: Vec<HypothesisId>,
    pub f2: Vec<HypothesisId>,
}

/// How each round's essential subset is chosen from the maximal one.
pub enum Thinning<'a> {
    /// Keep the maximal subset.
    None,
    /// Keep the minimizer and each other member independently with probability `keep`.
    Random { rng: &'a mut StreamRng, keep: f64 },
}

fn thin(
    class: FunctionClass,
    oracle: &PopulationOracle,
    thinning: &mut Thinning<'_>,
) -> Result<FunctionClass, VerificationError> {
    match thinning {
        Thinning::None => Ok(class),
        Thinning::Random { rng, keep } => {
            let star = population_minimizer(oracle, &class)?.id;
            let ids: Vec<HypothesisId> = class
                .ids()
                .into_iter()
                .filter(|id| *id == star || rng.random::<f64>() < *keep)
                .collect();
            Ok(class.subset(&ids)?)
        }
    }
}

/// Population version of the two-round procedure: essential subset of `F`,
/// midpoint closure, essential subset of the closure; reports the worst excess
/// risk among the survivors.
pub fn two_round_oracle(
    class: &FunctionClass,
    rho: f64,
    r: f64,
    oracle: &PopulationOracle,
) -> Result<MidpointReport, VerificationError> {
    two_round_with(class, rho, r, oracle, &mut Thinning::None)
}

pub fn two_round_with(
    class: &FunctionClass,
    rho: f64,
    r: f64,
    oracle: &PopulationOracle,
    thinning: &mut Thinning<'_>,
) -> Result<MidpointReport, VerificationError> {
    if !(rho > 0.0 && rho <= MAX_RHO) {
        return Err(VerificationError::RhoTooLarge(rho));
    }
    let best_risk = oracle.risk_of(population_minimizer(oracle, class)?)?;
    let f1 = thin(
        p0_population_filter(class, rho, r, oracle)?,
        oracle,
        thinning,
    )?;
    let closure = f1.midpoint_closure()?;
    let f2 = thin(
        p0_population_filter(&closure, rho, r, oracle)?,
        oracle,
        thinning,
    )?;
    let mut excess = f64::NEG_INFINITY;
    for h in f2.members() {
        excess = excess.max(oracle.risk_of(h)? - best_risk);
    }
    let bound = 1.5 * r * r;
    Ok(MidpointReport {
        excess,
        bound,
        bound_ok: excess <= bound + INEQUALITY_TOL,
        f1: f1.ids(),
        f2: f2.ids(),
    })
}
