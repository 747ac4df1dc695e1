use serde::{Deserialize, Serialize};

use super::VerificationError;
use crate::model::{population_minimizer, FunctionClass, HypothesisId, PopulationOracle};

/// Absolute slack allowed on deterministic inequalities.
pub const INEQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub id: HypothesisId,
    /// `risk(h) - risk(h*) - rho ||h - h*||^2 - r^2`, positive for violators.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EssentialReport {
    Ok,
    Violations(Vec<Violation>),
}

impl EssentialReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, EssentialReport::Ok)
    }
}

/// `risk(h) - risk(h*) - rho ||h - h*||^2 - r^2`.
fn excess_over_budget(
    oracle: &PopulationOracle,
    h: &crate::model::Hypothesis,
    h_star: &crate::model::Hypothesis,
    star_risk: f64,
    rho: f64,
    r: f64,
) -> Result<f64, VerificationError> {
    let d = oracle.distance_between(h, h_star)?;
    Ok(oracle.risk_of(h)? - star_risk - rho * d * d - r * r)
}

/// Checks that every member of `class` satisfies the essential-subset inequality
/// relative to `h_star`.
pub fn essential_check(
    class: &FunctionClass,
    h_star: HypothesisId,
    rho: f64,
    r: f64,
    oracle: &PopulationOracle,
) -> Result<EssentialReport, VerificationError> {
    let star = class
        .get(h_star)
        .ok_or(VerificationError::MissingMinimizer(h_star))?;
    let star_risk = oracle.risk_of(star)?;
    let mut violations = Vec::new();
    for h in class.members() {
        let slack = excess_over_budget(oracle, h, star, star_risk, rho, r)?;
        if slack > INEQUALITY_TOL {
            violations.push(Violation { id: h.id, slack });
        }
    }
    Ok(if violations.is_empty() {
        EssentialReport::Ok
    } else {
        EssentialReport::Violations(violations)
    })
}

/// The maximal essential subset of `class` relative to its own minimizer.
pub fn p0_population_filter(
    class: &FunctionClass,
    rho: f64,
    r: f64,
    oracle: &PopulationOracle,
) -> Result<FunctionClass, VerificationError> {
    let star = population_minimizer(oracle, class)?;
    let star_risk = oracle.risk_of(star)?;
    let mut keep = Vec::new();
    for h in class.members() {
        if excess_over_budget(oracle, h, star, star_risk, rho, r)? <= 0.0 {
            keep.push(h.id);
        }
    }
    Ok(class.subset(&keep)?)
}
