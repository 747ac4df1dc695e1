use std::fs;

use tournament_core::datagen::{Geometry, Problem, ScenarioSpec, TargetPoint, TargetSpec};
use tournament_core::experiments::studies::{adversarial_study, AdversarialStudy};
use tournament_core::experiments::{
    auto_sample_size, emit_results, erm_baseline, midpoint_oracle, run_experiment, summarize,
    worst_case_term, write_trials_csv, AutoConstants, AutoMode, ExperimentConfig, ExperimentError,
    Procedure, SampleSize, TRIAL_COLUMNS,
};
use tournament_core::model::{
    CovariateFamily, FunctionClass, HypothesisId, LabeledSample, NoiseFamily,
};

fn spec(geometry: Geometry, target: TargetSpec) -> ScenarioSpec {
    ScenarioSpec {
        dim: 4,
        family: CovariateFamily::Gaussian,
        covariance: Default::default(),
        geometry,
        target,
        seed: 3,
        clip: None,
    }
}

fn noisy_sphere(m: usize) -> ScenarioSpec {
    spec(
        Geometry::RandomSphere { m, scale: 1.0 },
        TargetSpec::Additive {
            t0: TargetPoint::Member(1),
            noise: NoiseFamily::Gaussian { sigma: 0.5 },
        },
    )
}

fn config(scenario: ScenarioSpec, n: usize, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        scenario,
        epsilon: 0.25,
        delta: 0.1,
        n_samples: SampleSize::Explicit(n),
        trials,
        procedures: vec![
            Procedure::Tournament,
            Procedure::Erm,
            Procedure::MidpointOracle,
        ],
        overrides: Default::default(),
        seed: 9,
        auto: Default::default(),
        kappa: Default::default(),
        timing: false,
        reference_draws: 0,
    }
}

#[test]
fn singleton_class_single_trial() {
    let scenario = spec(
        Geometry::Explicit {
            members: vec![vec![1.0, 0.0, 0.0, 0.0]],
        },
        TargetSpec::Additive {
            t0: TargetPoint::Explicit(vec![0.0, 1.0, 0.0, 0.0]),
            noise: NoiseFamily::Gaussian { sigma: 1.0 },
        },
    );
    let out = run_experiment(&config(scenario, 50, 1), 1).unwrap();
    assert_eq!(out.records.len(), 3);
    for r in &out.records {
        assert_eq!(r.excess, 0.0);
        assert!(r.success);
    }
    let t = &out.records[0];
    assert_eq!(t.selected_id, HypothesisId::Midpoint(0, 0));
    assert_eq!((t.f1_size, t.f2_size), (Some(1), Some(1)));
    assert_eq!(t.minimizer_in_f1, Some(true));
}

#[test]
fn erm_and_tournament_on_the_two_point_instance() {
    let study = AdversarialStudy {
        gap: 10.0,
        bias_scale: 0.5,
        sigma: 1.0,
        n_samples: SampleSize::Explicit(1000),
        epsilon: 0.25,
        delta: 0.1,
        trials: 200,
        overrides: Default::default(),
        seed: 4,
    };
    let (report, out) = adversarial_study(&study, 2).unwrap();
    assert_eq!(report.trials, 200);
    // ERM picks the far endpoint with probability near Phi(-1) for this tilt.
    assert!(report.erm_wrong >= 10, "{report:?}");
    assert!(report.tournament_midpoint >= 180, "{report:?}");
    assert_eq!(
        report.tournament_success,
        out.summary[0].trials - out.summary[0].failures
    );
    let erm = out.records.iter().filter(|r| r.procedure == Procedure::Erm);
    for r in erm {
        assert_eq!(r.success, r.selected_id == HypothesisId::Base(0));
    }
}

#[test]
fn erm_baseline_examples() {
    let class = FunctionClass::linear(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
    let x = vec![1.0; 4];
    // responses 1 everywhere: member 1 fits exactly
    let sample = LabeledSample::new(1, x.clone(), vec![1.0; 4], 1).unwrap();
    assert_eq!(
        erm_baseline(&class, &sample).unwrap().id,
        HypothesisId::Base(1)
    );
    // responses 0.5: members 0 and 1 tie, smallest id wins
    let sample = LabeledSample::new(1, x.clone(), vec![0.5; 4], 1).unwrap();
    assert_eq!(
        erm_baseline(&class, &sample).unwrap().id,
        HypothesisId::Base(0)
    );
    // the whole sample counts, not a single segment
    let sample = LabeledSample::new(1, x, vec![0.0, 2.0, 2.0, 2.5], 1).unwrap();
    assert_eq!(
        erm_baseline(&class, &sample).unwrap().id,
        HypothesisId::Base(2)
    );
}

#[test]
fn midpoint_oracle_prefers_midpoints() {
    let problem = Problem::new(
        &spec(
            Geometry::Explicit {
                members: vec![vec![-1.0, 0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0]],
            },
            TargetSpec::Additive {
                t0: TargetPoint::Explicit(vec![0.1, 0.0, 0.0, 0.0]),
                noise: NoiseFamily::None,
            },
        ),
        10,
    )
    .unwrap();
    let best = midpoint_oracle(problem.class(), &problem.oracle).unwrap();
    assert_eq!(best.id, HypothesisId::Midpoint(0, 1));
}

#[test]
fn worst_case_sample_size() {
    let constants = AutoConstants::default();
    let problem = Problem::new(&noisy_sphere(6), 1).unwrap();
    let a = auto_sample_size(&problem, 0.25, 0.1, 2.0 / 3.0, &constants, 0).unwrap();
    let b = auto_sample_size(&problem, 0.25, 0.05, 2.0 / 3.0, &constants, 0).unwrap();
    assert_eq!(a.mode, AutoMode::WorstCase);
    assert!((a.sigma_sq - 0.25).abs() < 1e-12);
    // halving delta adds c (sigma^2/eps + 1) ln 2 to each of the two terms
    let step = constants.c_worst * (a.sigma_sq / 0.25 + 1.0) * 2f64.ln();
    assert!((b.n1 - a.n1 - step).abs() < 1e-9);
    assert!((b.n2 - a.n2 - step).abs() < 1e-9);
    assert!((b.total - a.total - 4.0 * step).abs() < 1e-9);
    assert_eq!(a.total, 2.0 * (a.n1 + a.n2));
    assert_eq!(a.segment_len, (a.total / 4.0).ceil() as usize);

    let expected = 20.0 * 2.0 * (6f64.ln() + 20f64.ln());
    assert!((a.n1 - expected).abs() < 1e-9);
    assert_eq!(worst_case_term(21, 0.25, 0.25, 0.1, 20.0), a.n2);
}

#[test]
fn worst_case_without_noise_and_class_size() {
    let constants = AutoConstants::default();
    let realizable = Problem::new(
        &spec(
            Geometry::RandomSphere { m: 4, scale: 1.0 },
            TargetSpec::Realizable { member: 2 },
        ),
        1,
    )
    .unwrap();
    let n = auto_sample_size(&realizable, 0.25, 0.1, 2.0 / 3.0, &constants, 0).unwrap();
    assert_eq!(n.sigma_sq, 0.0);
    assert!((n.n1 - 20.0 * (4f64.ln() + 20f64.ln())).abs() < 1e-9);

    let small = auto_sample_size(
        &Problem::new(&noisy_sphere(4), 1).unwrap(),
        0.25,
        0.1,
        2.0 / 3.0,
        &constants,
        0,
    )
    .unwrap();
    let large = auto_sample_size(
        &Problem::new(&noisy_sphere(16), 1).unwrap(),
        0.25,
        0.1,
        2.0 / 3.0,
        &constants,
        0,
    )
    .unwrap();
    let per_log = 20.0 * 2.0;
    assert!((large.n1 - small.n1 - per_log * 4f64.ln()).abs() < 1e-9);
    assert!(large.n2 > small.n2);
}

#[test]
fn estimated_sample_size_adds_its_parts() {
    let constants = AutoConstants {
        mode: AutoMode::Estimated,
        trials: 50,
        n_max: 1 << 14,
        interaction_draws: 20_000,
        ..Default::default()
    };
    let problem = Problem::new(&noisy_sphere(5), 1).unwrap();
    let n = auto_sample_size(&problem, 0.25, 0.1, 2.0 / 3.0, &constants, 2).unwrap();
    let (c1, c2) = (n.class.clone().unwrap(), n.closure.clone().unwrap());
    assert_eq!(n.n1, (c1.n_int + c1.n_ext) as f64 + c1.confidence_term);
    assert_eq!(n.n2, (c2.n_int + c2.n_ext) as f64 + c2.confidence_term);
    // additive independent noise with f* a member: L_T near 1
    assert!((c1.l_t - 1.0).abs() < 0.1, "{}", c1.l_t);
    assert_eq!(
        n,
        auto_sample_size(&problem, 0.25, 0.1, 2.0 / 3.0, &constants, 2).unwrap()
    );
}

#[test]
fn trials_csv_layout() {
    let mut buf = Vec::new();
    write_trials_csv(&[], &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        format!("{}\n", TRIAL_COLUMNS.join(","))
    );

    let mut cfg = config(noisy_sphere(5), 60, 3);
    cfg.procedures = vec![Procedure::Tournament];
    let out = run_experiment(&cfg, 1).unwrap();
    let mut buf = Vec::new();
    write_trials_csv(&out.records, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.split(',').count() == TRIAL_COLUMNS.len()));
}

#[test]
fn emitted_files_are_reproducible() {
    let cfg = config(noisy_sphere(5), 80, 12);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, workers) in dirs.iter().zip([1, 3]) {
        let out = run_experiment(&cfg, workers).unwrap();
        emit_results(dir.path(), &out.records, &out.summary, &out.manifest).unwrap();
    }
    for name in ["trials.csv", "summary.csv", "manifest.json"] {
        let a = fs::read(dirs[0].path().join(name)).unwrap();
        let b = fs::read(dirs[1].path().join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs");
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(dirs[0].path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["segment_len"], 80);
}

#[test]
fn summary_recounts_records() {
    let mut cfg = config(noisy_sphere(6), 40, 30);
    cfg.epsilon = 0.05;
    let out = run_experiment(&cfg, 2).unwrap();
    assert_eq!(out.summary, summarize(&cfg.procedures, &out.records));
    for s in &out.summary {
        let rows: Vec<_> = out
            .records
            .iter()
            .filter(|r| r.procedure == s.procedure)
            .collect();
        assert_eq!(s.trials, 30);
        assert_eq!(s.failures, rows.iter().filter(|r| !r.success).count());
        assert_eq!(s.failure_rate, s.failures as f64 / 30.0);
        assert!(s.ci_low <= s.failure_rate && s.failure_rate <= s.ci_high);
        assert_eq!(s.fallbacks, rows.iter().filter(|r| r.fallback).count());
        let mean = rows.iter().map(|r| r.excess).sum::<f64>() / 30.0;
        assert!((s.mean_excess - mean).abs() < 1e-12);
    }
    for r in &out.records {
        assert_eq!(r.success, r.excess <= cfg.epsilon);
        assert_eq!(r.wall_ms, 0.0);
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let cfg = config(noisy_sphere(8), 50, 17);
    let one = run_experiment(&cfg, 1).unwrap();
    let four = run_experiment(&cfg, 4).unwrap();
    assert_eq!(one.records, four.records);
    assert_eq!(one.summary, four.summary);
}

#[test]
fn config_json_parsing() {
    let text = r#"{
        "scenario": {
            "dim": 3,
            "geometry": {"kind": "random_sphere", "m": 5, "scale": 1.0},
            "target": {"kind": "additive", "t0": {"member": 0}, "noise": {"kind": "gaussian", "sigma": 1.0}}
        },
        "epsilon": 0.25,
        "delta": 0.1,
        "n_samples": "auto",
        "trials": 10,
        "procedures": ["tournament", "erm", "tournament-bounded-p1"]
    }"#;
    let cfg = ExperimentConfig::from_json(text).unwrap();
    assert_eq!(cfg.n_samples, SampleSize::Auto);
    assert_eq!(cfg.reference_draws, 200_000);
    assert_eq!(cfg.procedures[2], Procedure::TournamentBoundedP1);

    let explicit = text.replace("\"auto\"", "128");
    assert_eq!(
        ExperimentConfig::from_json(&explicit).unwrap().n_samples,
        SampleSize::Explicit(128)
    );

    let bad_word = text.replace("\"auto\"", "\"many\"");
    assert!(matches!(
        ExperimentConfig::from_json(&bad_word),
        Err(ExperimentError::Json(_))
    ));
    let bad_eps = text.replace("0.25", "1.5");
    assert!(matches!(
        ExperimentConfig::from_json(&bad_eps),
        Err(ExperimentError::InvalidConfig(_))
    ));
    let unknown = text.replace("\"trials\"", "\"trails\"");
    assert!(ExperimentConfig::from_json(&unknown).is_err());

    let round = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&round).unwrap(), cfg);
}
