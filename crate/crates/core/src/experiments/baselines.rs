use super::ExperimentError;
use crate::model::{
    population_minimizer, FunctionClass, Hypothesis, LabeledSample, PopulationOracle,
};

/// Member with the smallest empirical squared loss over the whole sample,
/// ties broken by smallest id.
pub fn erm_baseline<'a>(
    class: &'a FunctionClass,
    sample: &LabeledSample,
) -> Result<&'a Hypothesis, ExperimentError> {
    let mut best: Option<(&Hypothesis, f64)> = None;
    for h in class.members() {
        let mut loss = 0.0;
        for i in 0..sample.len() {
            let r = h.evaluate_point(i, sample.covariate(i))? - sample.responses()[i];
            loss += r * r;
        }
        best = match best {
            Some((b, bl)) if bl < loss || (bl == loss && b.id < h.id) => Some((b, bl)),
            _ => Some((h, loss)),
        };
    }
    Ok(best.expect("classes are non-empty").0)
}

/// Best member of the midpoint closure under the exact risk: the ideal
/// output of an unrestricted procedure restricted to midpoints.
pub fn midpoint_oracle(
    class: &FunctionClass,
    oracle: &PopulationOracle,
) -> Result<Hypothesis, ExperimentError> {
    let closure = class.midpoint_closure()?;
    Ok(population_minimizer(oracle, &closure)?.clone())
}
