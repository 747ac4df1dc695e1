//! Browser demo: one tournament on a planar dictionary, the tail-integrability
//! curve of heavy-tailed noise, and failure frequency against block count.
//! Each export returns a JSON string for `www/main.js`.

use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::Serialize;
use tournament_core::complexity::kappa_estimate;
use tournament_core::datagen::{Geometry, ScenarioSpec, TargetPoint, TargetSpec};
use tournament_core::experiments::studies::block_sweep;
use tournament_core::experiments::{
    erm_baseline, ExperimentConfig, ExperimentError, PreparedExperiment, Procedure, SampleSize,
};
use tournament_core::model::{CovariateFamily, Hypothesis, HypothesisId, NoiseFamily};
use tournament_core::rng::stream;
use tournament_core::tournament::run_two_stage;
use wasm_bindgen::prelude::*;

/// Student-t noise with unit variance, or Gaussian when `df` is infinite.
fn unit_noise(df: f64) -> NoiseFamily {
    if df.is_finite() {
        NoiseFamily::StudentT {
            df,
            scale: ((df - 2.0) / df).sqrt(),
        }
    } else {
        NoiseFamily::Gaussian { sigma: 1.0 }
    }
}

fn planar(members: usize, target: TargetSpec, seed: u64, n: usize) -> ExperimentConfig {
    ExperimentConfig {
        scenario: ScenarioSpec {
            dim: 2,
            family: CovariateFamily::Gaussian,
            covariance: Default::default(),
            geometry: Geometry::RandomSphere {
                m: members,
                scale: 1.0,
            },
            target,
            seed,
            clip: None,
        },
        epsilon: 0.1,
        delta: 0.1,
        n_samples: SampleSize::Explicit(n),
        trials: 1,
        procedures: vec![Procedure::Tournament],
        overrides: Default::default(),
        seed,
        auto: Default::default(),
        kappa: Default::default(),
        timing: false,
        reference_draws: 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pick {
    pub id: String,
    pub point: [f64; 2],
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TournamentView {
    pub members: Vec<[f64; 2]>,
    pub target: [f64; 2],
    pub n_blocks: usize,
    pub segment_len: usize,
    pub f1: Vec<String>,
    pub f2: Vec<String>,
    pub tournament: Pick,
    pub erm: Pick,
    pub best_member: String,
}

fn point(h: &Hypothesis) -> [f64; 2] {
    let c = h.coefficients().expect("linear members");
    [c[0], c[1]]
}

/// One trial on `members` points of the unit circle with the response mean
/// just inside the circle and `df`-tailed noise.
pub fn tournament_2d(
    seed: u64,
    members: usize,
    df: f64,
    n: usize,
) -> Result<TournamentView, ExperimentError> {
    let target = TargetSpec::Additive {
        t0: TargetPoint::Random { scale: 0.8 },
        noise: unit_noise(df),
    };
    let prepared = PreparedExperiment::new(&planar(members, target, seed, n))?;
    let (class, sample) = prepared.view(prepared.sample(0)?)?;
    let oracle = &prepared.problem.oracle;
    let outcome = run_two_stage(&class, &sample, &prepared.params)?;
    let erm = erm_baseline(&class, &sample)?;
    let pick = |h: &Hypothesis| -> Result<Pick, ExperimentError> {
        Ok(Pick {
            id: h.id.to_string(),
            point: point(h),
            excess: oracle.risk_of(h)? - prepared.minimizer_risk,
        })
    };
    let ids = |v: &[HypothesisId]| v.iter().map(|id| id.to_string()).collect();
    let t0 = &prepared.problem.triplet.t0;
    Ok(TournamentView {
        members: class.members().iter().map(point).collect(),
        target: [t0[0], t0[1]],
        n_blocks: prepared.params.n_blocks,
        segment_len: prepared.segment_len,
        f1: ids(outcome.trace.f1()),
        f2: ids(outcome.trace.f2()),
        tournament: pick(&outcome.selected)?,
        erm: pick(erm)?,
        best_member: prepared.minimizer.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaCurve {
    pub xi: Vec<f64>,
    pub student: Vec<f64>,
    pub gaussian: Vec<f64>,
}

/// Truncation level `kappa(xi)` for unit-variance Student-t and Gaussian samples.
pub fn kappa_curve(df: f64, draws: usize, seed: u64) -> Result<KappaCurve, ExperimentError> {
    if df.is_nan() || df <= 2.0 {
        return Err(ExperimentError::InvalidConfig(format!(
            "df must exceed 2, got {df}"
        )));
    }
    let t = StudentT::new(df).map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
    let mut rng = stream(seed, "demo-kappa", 0);
    let scale = ((df - 2.0) / df).sqrt();
    let heavy: Vec<f64> = (0..draws).map(|_| scale * t.sample(&mut rng)).collect();
    let light: Vec<f64> = (0..draws)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let xi: Vec<f64> = (1..=25).map(|k| 0.02 * k as f64).collect();
    let curve = |w: &[f64]| -> Result<Vec<f64>, ExperimentError> {
        xi.iter().map(|&x| Ok(kappa_estimate(w, x)?)).collect()
    };
    Ok(KappaCurve {
        student: curve(&heavy)?,
        gaussian: curve(&light)?,
        xi,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPoint {
    pub n_blocks: usize,
    pub failure_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Tournament failure frequency for a fixed block size as the block count grows.
pub fn failure_vs_blocks(
    seed: u64,
    trials: usize,
    block_size: usize,
    df: f64,
) -> Result<Vec<BlockPoint>, ExperimentError> {
    let target = TargetSpec::Additive {
        t0: TargetPoint::Member(0),
        noise: unit_noise(df),
    };
    let mut base = planar(8, target, seed, 1);
    base.scenario.geometry = Geometry::RandomSphere { m: 8, scale: 0.5 };
    base.epsilon = 0.05;
    base.trials = trials;
    let rows = block_sweep(&base, &[1, 3, 5, 9, 15], block_size, 1)?;
    Ok(rows
        .into_iter()
        .map(|r| BlockPoint {
            n_blocks: r.n_blocks,
            failure_rate: r.failure_rate,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
        })
        .collect())
}

fn to_js<T: Serialize>(value: Result<T, ExperimentError>) -> Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn run_tournament_2d(seed: u32, members: usize, df: f64, n: usize) -> Result<String, JsError> {
    to_js(tournament_2d(seed as u64, members, df, n))
}

#[wasm_bindgen]
pub fn kappa_curve_json(df: f64, draws: usize, seed: u32) -> Result<String, JsError> {
    to_js(kappa_curve(df, draws, seed as u64))
}

#[wasm_bindgen]
pub fn failure_vs_blocks_json(
    seed: u32,
    trials: usize,
    block_size: usize,
    df: f64,
) -> Result<String, JsError> {
    to_js(failure_vs_blocks(seed as u64, trials, block_size, df))
}
