use super::generate::generate;
use super::spec::{Geometry, ScenarioSpec, TargetSpec};
use super::DatagenError;
use crate::model::{CovariateFamily, LabeledSample, NoiseFamily, PopulationOracle, Triplet};

/// One-dimensional two-point instance: members `+-gap/2`, response centred at
/// the midpoint and tilted by `bias_scale / sqrt(N)` toward member 0.
pub fn adversarial_spec(gap: f64, bias_scale: f64, sigma: f64, seed: u64) -> ScenarioSpec {
    ScenarioSpec {
        dim: 1,
        family: CovariateFamily::Gaussian,
        covariance: Default::default(),
        geometry: Geometry::TwoPoint { gap },
        target: TargetSpec::TiltedMidpoint {
            members: [0, 1],
            bias_scale,
            noise: NoiseFamily::Gaussian { sigma },
        },
        seed,
        clip: None,
    }
}

pub fn adversarial_two_point(
    gap: f64,
    bias_scale: f64,
    sigma: f64,
    segment_len: usize,
    seed: u64,
) -> Result<(Triplet, LabeledSample, PopulationOracle), DatagenError> {
    generate(&adversarial_spec(gap, bias_scale, sigma, seed), segment_len)
}
