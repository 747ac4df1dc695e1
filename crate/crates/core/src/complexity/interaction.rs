use serde::{Deserialize, Serialize};

use super::ComplexityError;
use crate::datagen::JointSampler;
use crate::model::{population_minimizer, FunctionClass, HypothesisId, PopulationOracle};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Member attaining the supremum.
    pub argmax: HypothesisId,
    pub draws: usize,
}

/// Running sums for `a = u^2 w^2`, `b = u^2`, `c = w^2` and their products.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    a: f64,
    b: f64,
    c: f64,
    aa: f64,
    bb: f64,
    cc: f64,
    ab: f64,
    ac: f64,
    bc: f64,
}

impl Moments {
    fn push(&mut self, u: f64, w: f64) {
        let b = u * u;
        let c = w * w;
        let a = b * c;
        self.a += a;
        self.b += b;
        self.c += c;
        self.aa += a * a;
        self.bb += b * b;
        self.cc += c * c;
        self.ab += a * b;
        self.ac += a * c;
        self.bc += b * c;
    }

    /// `sqrt(E a / (E b E c))` and its delta-method standard error.
    fn ratio(&self, n: f64) -> (f64, f64) {
        let (ma, mb, mc) = (self.a / n, self.b / n, self.c / n);
        let value = (ma / (mb * mc)).sqrt();
        // psi = a/ma - b/mb - c/mc has mean -1; its variance drives log(ratio).
        let e2 = self.aa / (n * ma * ma) + self.bb / (n * mb * mb) + self.cc / (n * mc * mc)
            - 2.0 * self.ab / (n * ma * mb)
            - 2.0 * self.ac / (n * ma * mc)
            + 2.0 * self.bc / (n * mb * mc);
        let var_psi = (e2 - 1.0).max(0.0);
        let se_log = (var_psi / n).sqrt();
        (value, 0.5 * value * se_log)
    }
}

/// `sup_f sqrt(E (f - f*)^2 (f* - Y)^2) / (||f - f*|| sigma)` by Monte Carlo,
/// with every expectation replaced by its empirical mean.
pub fn l_t_estimate(
    class: &FunctionClass,
    oracle: &PopulationOracle,
    sampler: &dyn JointSampler,
    draws: usize,
    seed: u64,
) -> Result<InteractionEstimate, ComplexityError> {
    if draws < 2 {
        return Err(ComplexityError::TooFewTrials(draws));
    }
    let best = population_minimizer(oracle, class)?;
    let tstar = best
        .coefficients()
        .ok_or(crate::model::ModelError::NotLinear(best.id))?;
    let mut others = Vec::new();
    for h in class.members() {
        let th = h
            .coefficients()
            .ok_or(crate::model::ModelError::NotLinear(h.id))?;
        if oracle.distance(th, tstar)? > 0.0 {
            let diff: Vec<f64> = th.iter().zip(tstar).map(|(a, b)| a - b).collect();
            others.push((h.id, diff));
        }
    }
    if others.is_empty() {
        return Err(ComplexityError::Degenerate(
            "every member coincides with the minimizer".into(),
        ));
    }
    let d = sampler.dim();
    let mut rng = stream(seed, "interaction", 0);
    let mut x = vec![0.0; d];
    let mut moments = vec![Moments::default(); others.len()];
    for _ in 0..draws {
        let y = sampler.draw(&mut rng, &mut x);
        let w = x.iter().zip(tstar).map(|(a, b)| a * b).sum::<f64>() - y;
        for ((_, diff), m) in others.iter().zip(moments.iter_mut()) {
            let u: f64 = x.iter().zip(diff).map(|(a, b)| a * b).sum();
            m.push(u, w);
        }
    }
    if moments[0].c == 0.0 {
        return Err(ComplexityError::Degenerate(
            "residuals f*(X) - Y vanish (realizable target)".into(),
        ));
    }
    let n = draws as f64;
    let mut out: Option<InteractionEstimate> = None;
    for ((id, _), m) in others.iter().zip(&moments) {
        let (value, std_error) = m.ratio(n);
        if out.is_none_or(|o| value > o.value) {
            out = Some(InteractionEstimate {
                value,
                std_error,
                argmax: *id,
                draws,
            });
        }
    }
    out.ok_or_else(|| ComplexityError::Degenerate("no comparison members".into()))
}
