//! Parameter sweeps and calibrations built on the experiment runner.

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Procedure, SampleSize};
use super::runner::{run_experiment, ExperimentOutput, PreparedExperiment};
use super::ExperimentError;
use crate::complexity::{
    fixed_point, ComplexityKind, FixedPoint, FixedPointSearch, LocalizedClass,
};
use crate::datagen::{adversarial_spec, Geometry, Problem, ScenarioSpec, TargetPoint, TargetSpec};
use crate::model::{CovariateFamily, HypothesisId, NoiseFamily, Segment};
use crate::rng::child_seed;
use crate::stats::{linear_fit, wilson_interval, LinearFit};
use crate::tournament::ParamOverrides;
use crate::verification::{condition_diagnostics, ConditionParams, DiagnosticsReport};

fn with_bias(config: &ExperimentConfig, bias: f64) -> Result<ExperimentConfig, ExperimentError> {
    let mut out = config.clone();
    match &mut out.scenario.target {
        TargetSpec::TiltedMidpoint { bias_scale, .. } => *bias_scale = bias,
        _ => {
            return Err(ExperimentError::InvalidConfig(
                "bias calibration needs a tilted-midpoint target".into(),
            ))
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub bias_scale: f64,
    pub erm_failure: f64,
    pub target: f64,
    pub trials: usize,
    pub met: bool,
    /// `(bias_scale, ERM failure frequency)` for every candidate tried.
    pub tried: Vec<(f64, f64)>,
}

/// First `bias_scale` among `candidates` at which ERM fails with frequency at
/// least `target`, on trials seeded independently of the main run.
pub fn calibrate_bias(
    base: &ExperimentConfig,
    candidates: &[f64],
    target: f64,
    trials: usize,
    workers: usize,
) -> Result<Calibration, ExperimentError> {
    let mut tried = Vec::new();
    for &bias in candidates {
        let mut config = with_bias(base, bias)?;
        config.procedures = vec![Procedure::Erm];
        config.trials = trials;
        config.seed = child_seed(base.seed, "calibration", 0);
        let out = run_experiment(&config, workers)?;
        let rate = out.summary[0].failure_rate;
        tried.push((bias, rate));
        if rate >= target {
            return Ok(Calibration {
                bias_scale: bias,
                erm_failure: rate,
                target,
                trials,
                met: true,
                tried,
            });
        }
    }
    let (bias_scale, erm_failure) = tried.last().copied().unwrap_or((f64::NAN, f64::NAN));
    Ok(Calibration {
        bias_scale,
        erm_failure,
        target,
        trials,
        met: false,
        tried,
    })
}

/// Runs `base` at the calibrated bias and records the calibration in the manifest.
pub fn run_calibrated(
    base: &ExperimentConfig,
    calibration: &Calibration,
    workers: usize,
) -> Result<ExperimentOutput, ExperimentError> {
    let config = with_bias(base, calibration.bias_scale)?;
    let mut out = run_experiment(&config, workers)?;
    out.manifest.calibration = Some(serde_json::to_value(calibration)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSweepRow {
    pub n_blocks: usize,
    pub segment_len: usize,
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Tournament failure frequency as the block count varies with the block
/// size held at `block_size`, so each segment has `n * block_size` points.
pub fn block_sweep(
    base: &ExperimentConfig,
    n_values: &[usize],
    block_size: usize,
    workers: usize,
) -> Result<Vec<BlockSweepRow>, ExperimentError> {
    n_values
        .iter()
        .map(|&n| {
            let mut config = base.clone();
            config.n_samples = SampleSize::Explicit(n * block_size);
            config.overrides = ParamOverrides {
                n_blocks: Some(n),
                ..base.overrides.clone()
            };
            config.procedures = vec![Procedure::Tournament];
            let out = run_experiment(&config, workers)?;
            let s = &out.summary[0];
            let (ci_low, ci_high) = wilson_interval(s.failures as u64, s.trials as u64, 1.96);
            Ok(BlockSweepRow {
                n_blocks: n,
                segment_len: n * block_size,
                trials: s.trials,
                failures: s.failures,
                failure_rate: s.failure_rate,
                ci_low,
                ci_high,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityStudy {
    pub sizes: Vec<usize>,
    /// Norm of each dictionary member.
    pub scale: f64,
    pub sigma: f64,
    pub radius: f64,
    pub kappa_level: f64,
    pub trials: usize,
    pub n_max: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub m: usize,
    pub n_int: usize,
    pub n_ext: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Fit of `ln(n_int + n_ext)` against `ln ln m`.
    pub fit: Option<LinearFit>,
}

/// Orthogonal Gaussian dictionary of `m` members in dimension `m`, localized
/// at member 0 with independent Gaussian noise.
pub fn orthogonal_scenario(m: usize, scale: f64, sigma: f64, seed: u64) -> ScenarioSpec {
    ScenarioSpec {
        dim: m,
        family: CovariateFamily::Gaussian,
        covariance: Default::default(),
        geometry: Geometry::Orthogonal { m, scale },
        target: TargetSpec::Additive {
            t0: TargetPoint::Member(0),
            noise: NoiseFamily::Gaussian { sigma },
        },
        seed,
        clip: None,
    }
}

pub fn complexity_sweep(study: &ComplexityStudy) -> Result<ScalingReport, ExperimentError> {
    let mut rows = Vec::with_capacity(study.sizes.len());
    for &m in &study.sizes {
        let problem = Problem::new(
            &orthogonal_scenario(m, study.scale, study.sigma, study.seed),
            1,
        )?;
        let loc = LocalizedClass::new(
            problem.class(),
            &problem.oracle,
            HypothesisId::Base(0),
            study.radius,
        )?;
        let search = FixedPointSearch {
            kappa_level: study.kappa_level,
            n_min: 1,
            n_max: study.n_max,
            trials: study.trials,
            seed: child_seed(study.seed, "scaling", m as u64),
        };
        let solve = |kind| match fixed_point(kind, &loc, &problem, &search)? {
            FixedPoint::Found { n, .. } => Ok(n),
            FixedPoint::NotFound { n_max, .. } => {
                Err(ExperimentError::FixedPointNotFound { kind, n_max })
            }
        };
        let n_int = solve(ComplexityKind::Intrinsic)?;
        let n_ext = solve(ComplexityKind::Multiplier)?;
        rows.push(ScalingRow { m, n_int, n_ext });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.m as f64).ln().ln()).collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|r| ((r.n_int + r.n_ext) as f64).ln())
        .collect();
    Ok(ScalingReport {
        fit: linear_fit(&xs, &ys),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialStudy {
    pub gap: f64,
    pub bias_scale: f64,
    pub sigma: f64,
    pub n_samples: SampleSize,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: usize,
    #[serde(default)]
    pub overrides: ParamOverrides,
    #[serde(default)]
    pub seed: u64,
}

impl AdversarialStudy {
    pub fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            scenario: adversarial_spec(self.gap, self.bias_scale, self.sigma, self.seed),
            epsilon: self.epsilon,
            delta: self.delta,
            n_samples: self.n_samples,
            trials: self.trials,
            procedures: vec![Procedure::Tournament, Procedure::Erm],
            overrides: self.overrides.clone(),
            seed: self.seed,
            auto: Default::default(),
            kappa: Default::default(),
            timing: false,
            reference_draws: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialReport {
    pub trials: usize,
    /// ERM returned the endpoint away from the tilt.
    pub erm_wrong: usize,
    /// The tournament returned the midpoint of the two endpoints.
    pub tournament_midpoint: usize,
    pub tournament_success: usize,
}

pub fn adversarial_study(
    study: &AdversarialStudy,
    workers: usize,
) -> Result<(AdversarialReport, ExperimentOutput), ExperimentError> {
    let out = run_experiment(&study.config(), workers)?;
    let count = |p: Procedure, pred: &dyn Fn(&super::TrialRecord) -> bool| {
        out.records
            .iter()
            .filter(|r| r.procedure == p && pred(r))
            .count()
    };
    let report = AdversarialReport {
        trials: study.trials,
        erm_wrong: count(Procedure::Erm, &|r| r.selected_id == HypothesisId::Base(1)),
        tournament_midpoint: count(Procedure::Tournament, &|r| {
            r.selected_id == HypothesisId::Midpoint(0, 1)
        }),
        tournament_success: count(Procedure::Tournament, &|r| r.success),
    };
    Ok((report, out))
}

/// Condition diagnostics for the first-round matches of one trial's sample.
pub fn diagnose(
    config: &ExperimentConfig,
    conditions: Option<ConditionParams>,
    trial: usize,
) -> Result<DiagnosticsReport, ExperimentError> {
    if config.scenario.clip.is_some() {
        return Err(ExperimentError::InvalidConfig(
            "diagnostics need an unclipped linear scenario".into(),
        ));
    }
    let prepared = PreparedExperiment::new(config)?;
    let sample = prepared.sample(trial)?;
    let conditions =
        conditions.unwrap_or_else(|| ConditionParams::with_kappa(prepared.params.kappa1));
    Ok(condition_diagnostics(
        prepared.problem.class(),
        &sample,
        Segment::Distance1,
        Segment::Match1,
        &prepared.params,
        &conditions,
        &prepared.problem.oracle,
    )?)
}
