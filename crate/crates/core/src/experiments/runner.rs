use serde::{Deserialize, Serialize};

use super::baselines::{erm_baseline, midpoint_oracle};
use super::config::{ExperimentConfig, Procedure, SampleSize};
use super::sample_size::{auto_sample_size, AutoSampleSize};
use super::ExperimentError;
use crate::complexity::class_kappa;
use crate::datagen::{bounded_view, JointSampler, Problem};
use crate::model::{population_minimizer, FunctionClass, Hypothesis, HypothesisId, LabeledSample};
use crate::rng::{child_seed, stream};
use crate::stats::{median, wilson_interval};
use crate::tournament::{run_two_stage, DistanceEstimator, TournamentParams, DEFAULT_C0};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub procedure: Procedure,
    pub selected_id: HypothesisId,
    pub excess: f64,
    pub success: bool,
    pub f1_size: Option<usize>,
    pub f2_size: Option<usize>,
    pub fallback: bool,
    pub wall_ms: f64,
    /// Whether the class minimizer beat every opponent in the first round.
    pub minimizer_in_f1: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcedureSummary {
    pub procedure: Procedure,
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_excess: f64,
    pub median_excess: f64,
    pub fallbacks: usize,
    pub minimizer_in_f1: Option<usize>,
}

/// Exact or Monte Carlo risks of every member of the midpoint closure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskTable {
    ids: Vec<HypothesisId>,
    risks: Vec<f64>,
}

impl RiskTable {
    pub fn risk(&self, id: HypothesisId) -> Option<f64> {
        let key = match id {
            HypothesisId::Base(i) => HypothesisId::Midpoint(i, i),
            other => other,
        };
        self.ids.binary_search(&key).ok().map(|k| self.risks[k])
    }

    /// Clipped class `clip(<t_i, .>)` against clipped responses, by Monte Carlo.
    pub fn clipped(problem: &Problem, bound: f64, draws: usize, seed: u64) -> Self {
        let coefs: Vec<&[f64]> = problem
            .class()
            .members()
            .iter()
            .map(|h| h.coefficients().expect("generators emit linear classes"))
            .collect();
        let m = coefs.len();
        let mut ids = Vec::with_capacity(m * (m + 1) / 2);
        for i in 0..m {
            for j in i..m {
                ids.push(HypothesisId::Midpoint(i, j));
            }
        }
        let mut sums = vec![0.0; ids.len()];
        let mut rng = stream(seed, "reference", 0);
        let mut x = vec![0.0; problem.dim()];
        let mut v = vec![0.0; m];
        for _ in 0..draws {
            let y = problem.draw(&mut rng, &mut x).clamp(-bound, bound);
            for (vi, c) in v.iter_mut().zip(&coefs) {
                *vi = x
                    .iter()
                    .zip(*c)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    .clamp(-bound, bound);
            }
            let mut k = 0;
            for i in 0..m {
                for j in i..m {
                    let r = 0.5 * (v[i] + v[j]) - y;
                    sums[k] += r * r;
                    k += 1;
                }
            }
        }
        let risks = sums.into_iter().map(|s| s / draws as f64).collect();
        RiskTable { ids, risks }
    }
}

/// Everything fixed across trials.
#[derive(Debug, Clone)]
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub problem: Problem,
    pub segment_len: usize,
    pub auto: Option<AutoSampleSize>,
    pub params: TournamentParams,
    pub minimizer: HypothesisId,
    pub minimizer_risk: f64,
    pub reference: Option<RiskTable>,
}

impl PreparedExperiment {
    pub fn new(config: &ExperimentConfig) -> Result<Self, ExperimentError> {
        config.validate()?;
        let c0 = config.overrides.c0.unwrap_or(DEFAULT_C0);
        let (segment_len, auto) = match config.n_samples {
            SampleSize::Explicit(n) => (n, None),
            SampleSize::Auto => {
                // The tilted target depends on N; one refinement pass settles it.
                let seed = child_seed(config.seed, "auto", 0);
                let first = Problem::new(&config.scenario, 1)?;
                let guess =
                    auto_sample_size(&first, config.epsilon, config.delta, c0, &config.auto, seed)?;
                let second = Problem::new(&config.scenario, guess.segment_len)?;
                let auto = auto_sample_size(
                    &second,
                    config.epsilon,
                    config.delta,
                    c0,
                    &config.auto,
                    seed,
                )?;
                (auto.segment_len, Some(auto))
            }
        };
        let problem = Problem::new(&config.scenario, segment_len)?;

        let kappa_seed = child_seed(config.seed, "kappa", 0);
        let kappa1 = match config.overrides.kappa1 {
            Some(k) => k,
            None => class_kappa(
                problem.class(),
                &problem,
                config.kappa.xi,
                config.kappa.draws,
                kappa_seed,
            )?,
        };
        let kappa2 = match config.overrides.kappa2 {
            Some(k) => k,
            None => {
                let variant = config.overrides.kappa_exponent_variant.unwrap_or_default();
                class_kappa(
                    problem.class(),
                    &problem,
                    variant.level(kappa1),
                    config.kappa.draws,
                    kappa_seed,
                )?
            }
        };
        let params = TournamentParams::derive(
            config.epsilon,
            config.delta,
            kappa1,
            kappa2,
            segment_len,
            &config.overrides,
        )?;

        let (minimizer, minimizer_risk, reference) = match config.scenario.clip {
            None => {
                let best = population_minimizer(&problem.oracle, problem.class())?;
                (best.id, problem.oracle.risk_of(best)?, None)
            }
            Some(bound) => {
                let table = RiskTable::clipped(
                    &problem,
                    bound,
                    config.reference_draws,
                    child_seed(config.seed, "reference", 0),
                );
                let mut best = (HypothesisId::Base(0), f64::INFINITY);
                for h in problem.class().members() {
                    let risk = table.risk(h.id).expect("base members are tabulated");
                    if risk < best.1 {
                        best = (h.id, risk);
                    }
                }
                (best.0, best.1, Some(table))
            }
        };

        Ok(PreparedExperiment {
            config: config.clone(),
            problem,
            segment_len,
            auto,
            params,
            minimizer,
            minimizer_risk,
            reference,
        })
    }

    fn risk(&self, h: &Hypothesis) -> Result<f64, ExperimentError> {
        match &self.reference {
            None => Ok(self.problem.oracle.risk_of(h)?),
            Some(table) => table
                .risk(h.id)
                .ok_or(ExperimentError::InvalidConfig(format!(
                    "no reference risk for {}",
                    h.id
                ))),
        }
    }

    pub fn sample(&self, trial: usize) -> Result<LabeledSample, ExperimentError> {
        let seed = child_seed(self.config.seed, "trial", trial as u64);
        Ok(self.problem.draw_sample(self.segment_len, seed)?)
    }

    /// The class and sample the procedures see (clipped and tabulated when bounded).
    pub fn view(
        &self,
        sample: LabeledSample,
    ) -> Result<(FunctionClass, LabeledSample), ExperimentError> {
        match self.config.scenario.clip {
            None => Ok((self.problem.class().clone(), sample)),
            Some(bound) => Ok(bounded_view(self.problem.class(), &sample, bound)?),
        }
    }

    fn record(
        &self,
        trial: usize,
        procedure: Procedure,
        selected: &Hypothesis,
        started: Option<std::time::Instant>,
    ) -> Result<TrialRecord, ExperimentError> {
        let excess = self.risk(selected)? - self.minimizer_risk;
        Ok(TrialRecord {
            trial,
            procedure,
            selected_id: selected.id,
            excess,
            success: excess <= self.config.epsilon,
            f1_size: None,
            f2_size: None,
            fallback: false,
            wall_ms: started.map_or(0.0, |s| s.elapsed().as_secs_f64() * 1e3),
            minimizer_in_f1: None,
        })
    }

    pub fn run_trial(&self, trial: usize) -> Result<Vec<TrialRecord>, ExperimentError> {
        let (class, sample) = self.view(self.sample(trial)?)?;
        let mut out = Vec::with_capacity(self.config.procedures.len());
        for &procedure in &self.config.procedures {
            let started = self.config.timing.then(std::time::Instant::now);
            let record = match procedure {
                Procedure::Tournament | Procedure::TournamentBoundedP1 => {
                    let mut params = self.params.clone();
                    if procedure == Procedure::TournamentBoundedP1 {
                        params.distance = DistanceEstimator::EmpiricalL2;
                    }
                    let outcome = run_two_stage(&class, &sample, &params)?;
                    let mut rec = self.record(trial, procedure, &outcome.selected, started)?;
                    let trace = &outcome.trace;
                    rec.f1_size = Some(trace.f1().len());
                    rec.f2_size = Some(trace.f2().len());
                    rec.fallback = trace.fallback();
                    rec.minimizer_in_f1 =
                        Some(!trace.stage1.fallback && trace.f1().contains(&self.minimizer));
                    rec
                }
                Procedure::Erm => {
                    let chosen = erm_baseline(&class, &sample)?.clone();
                    self.record(trial, procedure, &chosen, started)?
                }
                Procedure::MidpointOracle => {
                    let chosen = midpoint_oracle(&class, &self.problem.oracle)?;
                    self.record(trial, procedure, &chosen, started)?
                }
            };
            out.push(record);
        }
        Ok(out)
    }
}

/// Runs `trials` in parallel on up to `workers` threads; records come back in
/// trial order whatever the worker count.
pub fn run_trials(
    prepared: &PreparedExperiment,
    workers: usize,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    let trials = prepared.config.trials;
    #[cfg(feature = "parallel")]
    let nested: Vec<Vec<TrialRecord>> = {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
        pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|t| prepared.run_trial(t))
                .collect::<Result<Vec<_>, _>>()
        })?
    };
    #[cfg(not(feature = "parallel"))]
    let nested: Vec<Vec<TrialRecord>> = {
        let _ = workers;
        (0..trials)
            .map(|t| prepared.run_trial(t))
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(nested.into_iter().flatten().collect())
}

pub fn summarize(procedures: &[Procedure], records: &[TrialRecord]) -> Vec<ProcedureSummary> {
    procedures
        .iter()
        .map(|&procedure| {
            let rows: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.procedure == procedure)
                .collect();
            let trials = rows.len();
            let failures = rows.iter().filter(|r| !r.success).count();
            let excess: Vec<f64> = rows.iter().map(|r| r.excess).collect();
            let (ci_low, ci_high) = wilson_interval(failures as u64, trials as u64, 1.96);
            let in_f1: Vec<bool> = rows.iter().filter_map(|r| r.minimizer_in_f1).collect();
            ProcedureSummary {
                procedure,
                trials,
                failures,
                failure_rate: if trials == 0 {
                    0.0
                } else {
                    failures as f64 / trials as f64
                },
                ci_low,
                ci_high,
                mean_excess: if trials == 0 {
                    f64::NAN
                } else {
                    excess.iter().sum::<f64>() / trials as f64
                },
                median_excess: median(&excess),
                fallbacks: rows.iter().filter(|r| r.fallback).count(),
                minimizer_in_f1: (!in_f1.is_empty()).then(|| in_f1.iter().filter(|b| **b).count()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub segment_len: usize,
    pub auto: Option<AutoSampleSize>,
    pub params: TournamentParams,
    pub minimizer: String,
    pub minimizer_risk: f64,
    #[serde(default)]
    pub calibration: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<ProcedureSummary>,
    pub manifest: Manifest,
}

impl PreparedExperiment {
    pub fn manifest(&self) -> Manifest {
        Manifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config.clone(),
            seed: self.config.seed,
            segment_len: self.segment_len,
            auto: self.auto.clone(),
            params: self.params.clone(),
            minimizer: self.minimizer.to_string(),
            minimizer_risk: self.minimizer_risk,
            calibration: None,
        }
    }
}

pub fn run_experiment(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<ExperimentOutput, ExperimentError> {
    let prepared = PreparedExperiment::new(config)?;
    let records = run_trials(&prepared, workers)?;
    let summary = summarize(&config.procedures, &records);
    Ok(ExperimentOutput {
        records,
        summary,
        manifest: prepared.manifest(),
    })
}
