use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::two_round::{two_round_with, Thinning};
use super::VerificationError;
use crate::model::{FunctionClass, PopulationOracle};
use crate::rng::{stream, StreamRng};

/// Random linear-class instance for the population two-round check.
#[derive(Debug, Clone)]
pub struct FuzzInstance {
    pub class: FunctionClass,
    pub oracle: PopulationOracle,
    pub r: f64,
}

fn gaussian(rng: &mut StreamRng) -> f64 {
    StandardNormal.sample(rng)
}

/// Dimension up to `max_dim`, up to `max_members` members, a random and
/// possibly singular PSD covariance, and a radius on the scale of the class.
pub fn random_instance(
    rng: &mut StreamRng,
    max_dim: usize,
    max_members: usize,
) -> Result<FuzzInstance, VerificationError> {
    let d = rng.random_range(1..=max_dim);
    let m = rng.random_range(1..=max_members);
    let rank = rng.random_range(1..=d);
    let a = DMatrix::from_fn(d, rank, |_, _| gaussian(rng));
    let cov = &a * a.transpose();
    let scale = (rng.random_range(-2.0..1.0f64)).exp();
    let members: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..d).map(|_| scale * gaussian(rng)).collect())
        .collect();
    let t0: Vec<f64> = (0..d).map(|_| scale * gaussian(rng)).collect();
    let noise_var = rng.random_range(0.0..2.0);
    let r = scale * (rng.random_range(-3.0..1.5f64)).exp();
    Ok(FuzzInstance {
        class: FunctionClass::linear(members)?,
        oracle: PopulationOracle::new(cov, t0, noise_var)?,
        r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzViolation {
    pub case: u64,
    pub thinned: bool,
    pub excess: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub cases: u64,
    pub checks: u64,
    pub violations: Vec<FuzzViolation>,
    /// Largest `excess / bound` seen.
    pub worst_ratio: f64,
}

/// Runs the two-round population check on `cases` random instances, each with
/// the maximal essential subsets and with randomly thinned ones.
pub fn fuzz_two_round(cases: u64, rho: f64, seed: u64) -> Result<FuzzReport, VerificationError> {
    let mut report = FuzzReport {
        cases,
        checks: 0,
        violations: Vec::new(),
        worst_ratio: f64::NEG_INFINITY,
    };
    for case in 0..cases {
        let mut rng = stream(seed, "fuzz", case);
        let inst = random_instance(&mut rng, 8, 12)?;
        let keep = rng.random_range(0.1..1.0);
        let maximal = two_round_with(&inst.class, rho, inst.r, &inst.oracle, &mut Thinning::None)?;
        let thinned = two_round_with(
            &inst.class,
            rho,
            inst.r,
            &inst.oracle,
            &mut Thinning::Random {
                rng: &mut rng,
                keep,
            },
        )?;
        for (rep, thinned) in [(maximal, false), (thinned, true)] {
            report.checks += 1;
            report.worst_ratio = report.worst_ratio.max(rep.excess / rep.bound);
            if !rep.bound_ok {
                report.violations.push(FuzzViolation {
                    case,
                    thinned,
                    excess: rep.excess,
                    bound: rep.bound,
                });
            }
        }
    }
    Ok(report)
}
