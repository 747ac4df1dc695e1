use serde::{Deserialize, Serialize};

use super::config::{AutoConstants, AutoMode};
use super::ExperimentError;
use crate::complexity::{
    fixed_point, l_t_estimate, ComplexityError, ComplexityKind, FixedPoint, FixedPointSearch,
    LocalizedClass,
};
use crate::datagen::Problem;
use crate::model::{population_minimizer, FunctionClass, HypothesisId};
use crate::rng::child_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassComplexity {
    pub n_int: usize,
    pub n_ext: usize,
    pub l_t: f64,
    pub confidence_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoSampleSize {
    pub mode: AutoMode,
    /// Requirement for the class.
    pub n1: f64,
    /// Requirement for its midpoint closure.
    pub n2: f64,
    /// `2 (n1 + n2)`, the total sample size.
    pub total: f64,
    /// Points per segment, `ceil(total / 4)`.
    pub segment_len: usize,
    pub sigma_sq: f64,
    pub class: Option<ClassComplexity>,
    pub closure: Option<ClassComplexity>,
}

/// `c (sigma^2/eps + 1)(ln m + ln(2/delta))`.
pub fn worst_case_term(m: usize, sigma_sq: f64, epsilon: f64, delta: f64, c: f64) -> f64 {
    c * (sigma_sq / epsilon + 1.0) * ((m as f64).ln() + (2.0 / delta).ln())
}

/// `c2 (L_T^2 sigma^2/eps + 1) ln(64/delta)`.
pub fn confidence_term(l_t: f64, sigma_sq: f64, epsilon: f64, delta: f64, c2: f64) -> f64 {
    c2 * (l_t * l_t * sigma_sq / epsilon + 1.0) * (64.0 / delta).ln()
}

fn assemble(mode: AutoMode, n1: f64, n2: f64, sigma_sq: f64) -> AutoSampleSize {
    let total = 2.0 * (n1 + n2);
    AutoSampleSize {
        mode,
        n1,
        n2,
        total,
        segment_len: ((total / 4.0).ceil() as usize).max(1),
        sigma_sq,
        class: None,
        closure: None,
    }
}

/// Inputs shared by the class and closure estimates.
struct Targets<'a> {
    problem: &'a Problem,
    radius: f64,
    sigma_sq: f64,
    epsilon: f64,
    delta: f64,
    constants: &'a AutoConstants,
}

fn estimate_class(
    class: &FunctionClass,
    center: HypothesisId,
    t: &Targets<'_>,
    seed: u64,
) -> Result<ClassComplexity, ExperimentError> {
    let (problem, oracle, constants) = (t.problem, &t.problem.oracle, t.constants);
    let (sigma_sq, epsilon, delta) = (t.sigma_sq, t.epsilon, t.delta);
    let localized = LocalizedClass::new(class, oracle, center, t.radius)?;
    let search = FixedPointSearch {
        kappa_level: constants.kappa_level,
        n_min: 1,
        n_max: constants.n_max,
        trials: constants.trials,
        seed,
    };
    let solve = |kind| -> Result<usize, ExperimentError> {
        match fixed_point(kind, &localized, problem, &search)? {
            FixedPoint::Found { n, .. } => Ok(n),
            FixedPoint::NotFound { n_max, .. } => {
                Err(ExperimentError::FixedPointNotFound { kind, n_max })
            }
        }
    };
    let n_int = solve(ComplexityKind::Intrinsic)?;
    let n_ext = solve(ComplexityKind::Multiplier)?;
    let l_t = if sigma_sq > 0.0 {
        match l_t_estimate(class, oracle, problem, constants.interaction_draws, seed) {
            Ok(e) => e.value,
            Err(ComplexityError::Degenerate(_)) => 0.0,
            Err(e) => return Err(e.into()),
        }
    } else {
        0.0
    };
    Ok(ClassComplexity {
        n_int,
        n_ext,
        l_t,
        confidence_term: confidence_term(l_t, sigma_sq, epsilon, delta, constants.c2),
    })
}

/// Sample size for the whole procedure: `2 (N1 + N2)` with `N1` for the class
/// and `N2` for its midpoint closure.
pub fn auto_sample_size(
    problem: &Problem,
    epsilon: f64,
    delta: f64,
    c0: f64,
    constants: &AutoConstants,
    seed: u64,
) -> Result<AutoSampleSize, ExperimentError> {
    let class = problem.class();
    let oracle = &problem.oracle;
    let best = population_minimizer(oracle, class)?;
    let sigma_sq = oracle.risk_of(best)?;
    match constants.mode {
        AutoMode::WorstCase => {
            let m = class.len();
            let n1 = worst_case_term(m, sigma_sq, epsilon, delta, constants.c_worst);
            let n2 = worst_case_term(m * (m + 1) / 2, sigma_sq, epsilon, delta, constants.c_worst);
            Ok(assemble(AutoMode::WorstCase, n1, n2, sigma_sq))
        }
        AutoMode::Estimated => {
            let targets = Targets {
                problem,
                radius: (c0 * epsilon).sqrt(),
                sigma_sq,
                epsilon,
                delta,
                constants,
            };
            let first =
                estimate_class(class, best.id, &targets, child_seed(seed, "auto-class", 0))?;
            let closure = class.midpoint_closure()?;
            let member = best.id.as_member().expect("base member");
            let second = estimate_class(
                &closure,
                HypothesisId::Midpoint(member, member),
                &targets,
                child_seed(seed, "auto-closure", 0),
            )?;
            let n1 = (first.n_int + first.n_ext) as f64 + first.confidence_term;
            let n2 = (second.n_int + second.n_ext) as f64 + second.confidence_term;
            let mut out = assemble(AutoMode::Estimated, n1, n2, sigma_sq);
            out.class = Some(first);
            out.closure = Some(second);
            Ok(out)
        }
    }
}
