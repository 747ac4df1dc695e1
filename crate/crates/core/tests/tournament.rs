use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use tournament_core::complexity::class_kappa;
use tournament_core::datagen::{adversarial_two_point, Problem};
use tournament_core::model::{EvalTable, FunctionClass, Hypothesis, HypothesisId, LabeledSample};
use tournament_core::rng::stream;
use tournament_core::tournament::{
    beats, block_stats, bounded_p1_distance, p1_distance, run_two_stage, winners, BlockPartition,
    MatchLedger, MatchRule, ParamOverrides, TournamentError, TournamentParams,
};

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

#[test]
fn p1_examples() {
    let zeros = vec![0.0; 5];
    let h = vec![1.0, 2.0, 3.0, 4.0, 5.0];
    assert_eq!(p1_distance(&h, &h, 3).unwrap(), 0.0);
    let f = vec![5.0, -1.0, 4.0, 2.0, -3.0];
    assert_eq!(p1_distance(&zeros, &f, 2).unwrap(), 4.0);
    assert!(matches!(
        p1_distance(&zeros, &f, 0),
        Err(TournamentError::EllOutOfRange { .. })
    ));
    assert!(matches!(
        p1_distance(&zeros, &f, 6),
        Err(TournamentError::EllOutOfRange { .. })
    ));
}

#[test]
fn bounded_p1_examples() {
    let h = vec![1.0, -2.0];
    assert_eq!(bounded_p1_distance(&h, &h).unwrap(), 0.0);
    let f = vec![4.0, 2.0];
    assert_eq!(bounded_p1_distance(&h, &f).unwrap(), (25.0f64 / 2.0).sqrt());
}

#[test]
fn block_stats_examples() {
    let one = BlockPartition::new(2, 1).unwrap();
    // residuals h - Y = (1, 3), f - Y = (2, 2)
    let y = vec![0.0, 0.0];
    let s = block_stats(&[1.0, 3.0], &[2.0, 2.0], &y, &one).unwrap();
    assert_eq!(s.b, vec![1.0]);

    let three = BlockPartition::new(9, 3).unwrap();
    let v = vec![0.3; 9];
    let s = block_stats(&v, &v, &[1.0; 9], &three).unwrap();
    assert!(s.b.iter().chain(&s.q).chain(&s.m).all(|x| *x == 0.0));
}

#[test]
fn partition_gives_extra_points_to_first_blocks() {
    let p = BlockPartition::new(11, 3).unwrap();
    let sizes: Vec<usize> = p.blocks().map(|b| b.len()).collect();
    assert_eq!(sizes, vec![4, 4, 3]);
    assert_eq!(p.block(2), 8..11);
    assert!(BlockPartition::new(2, 3).is_err());
}

#[test]
fn beats_counts_blocks() {
    let rule = |theta2: f64| MatchRule {
        theta2,
        theta3: 1.0,
        theta4: 1e6,
        r: 1.0,
    };
    let b = [-0.5, -2.0, 0.3];
    assert!(rule(1.0).wins(&b, 0.5));
    assert!(!rule(0.1).wins(&b, 0.5));
    // even n needs floor(n/2) + 1 passing blocks
    assert!(!rule(1.0).wins(&[0.0, 0.0, -5.0, -5.0], 0.5));
    assert!(rule(1.0).wins(&[0.0, 0.0, 0.0, -5.0], 0.5));
}

#[test]
fn threshold_switches_on_p1() {
    let rule = MatchRule {
        theta2: 4.0,
        theta3: 0.25,
        theta4: 2.0,
        r: 0.5,
    };
    assert_eq!(rule.threshold(1.0), -1.0);
    assert_eq!(rule.threshold(2.0), -1.0);
}

fn params(n_points: usize, n_blocks: usize, kappa1: f64) -> TournamentParams {
    TournamentParams::derive(
        0.25,
        0.1,
        kappa1,
        kappa1,
        n_points,
        &ParamOverrides {
            n_blocks: Some(n_blocks),
            ..Default::default()
        },
    )
    .unwrap()
}

fn random_tables(rng: &mut ChaCha8Rng, k: usize, n: usize, spread: f64) -> (EvalTable, EvalTable) {
    let ids: Vec<HypothesisId> = (0..k).map(HypothesisId::Base).collect();
    let make = |rng: &mut ChaCha8Rng| {
        let x = gaussian_vec(rng, n);
        let coefs: Vec<f64> = (0..k).map(|_| spread * normal(rng)).collect();
        let rows = coefs
            .iter()
            .map(|c| x.iter().map(|xi| c * xi).collect())
            .collect();
        let y = x.iter().map(|xi| 0.2 * xi + normal(rng)).collect();
        EvalTable::from_rows(ids.clone(), rows, y).unwrap()
    };
    (make(rng), make(rng))
}

/// Independent re-implementation of one round from raw evaluation rows.
fn brute_force_winners(
    dist: &EvalTable,
    matches: &EvalTable,
    p: &TournamentParams,
) -> Vec<HypothesisId> {
    let k = dist.n_hypotheses();
    let n = matches.n_points();
    let (base, extra) = (n / p.n_blocks, n % p.n_blocks);
    let bounds: Vec<(usize, usize)> = (0..p.n_blocks)
        .scan(0, |start, j| {
            let len = base + usize::from(j < extra);
            let out = (*start, *start + len);
            *start += len;
            Some(out)
        })
        .collect();
    let y = matches.responses();
    let f_beats_h = |f: usize, h: usize| {
        let mut diffs: Vec<f64> = dist
            .row(h)
            .iter()
            .zip(dist.row(f))
            .map(|(a, b)| (a - b).abs())
            .collect();
        diffs.sort_by(|a, b| b.total_cmp(a));
        let p1 = diffs[p.ell - 1];
        let threshold = if p1 <= p.theta4 * p.r {
            -p.theta2 * p.r * p.r
        } else {
            -p.theta3 * p1 * p1
        };
        let passing = bounds
            .iter()
            .filter(|(s, e)| {
                let loss = |k: usize| -> f64 {
                    (*s..*e).map(|i| (matches.row(k)[i] - y[i]).powi(2)).sum()
                };
                let (lh, lf) = (loss(h), loss(f));
                let m = (e - s) as f64;
                lh / m - lf / m >= threshold
            })
            .count();
        2 * passing > p.n_blocks
    };
    (0..k)
        .filter(|&f| (0..k).all(|h| f_beats_h(f, h)))
        .map(HypothesisId::Base)
        .collect()
}

#[test]
fn winners_match_brute_force_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut nonempty = 0;
    for _ in 0..200 {
        let n = 60;
        let spread = rng.random_range(0.05..1.0);
        let (dist, matches) = random_tables(&mut rng, 8, n, spread);
        let p = params(n, 5, 2.0);
        let ledger = MatchLedger::build(&dist, &matches, &p).unwrap();
        let expected = brute_force_winners(&dist, &matches, &p);
        assert_eq!(winners(&ledger, &p).unwrap(), expected);
        if !expected.is_empty() {
            nonempty += 1;
            assert_eq!(ledger.winners(), expected.as_slice());
            assert!(!ledger.fallback());
        } else {
            assert!(ledger.fallback());
        }
    }
    assert!(nonempty > 0);
}

fn strict_params(n: usize) -> TournamentParams {
    let mut p = params(n, n, 1.0);
    p.theta2 = 1e-9;
    p.theta3 = 1e-9;
    p.theta4 = 1e9;
    p
}

#[test]
fn member_on_the_response_wins_alone() {
    let ids: Vec<HypothesisId> = (0..3).map(HypothesisId::Base).collect();
    let rows = vec![vec![0.0; 3], vec![1.0; 3], vec![2.0; 3]];
    let table = EvalTable::from_rows(ids, rows, vec![1.0; 3]).unwrap();
    let ledger = MatchLedger::build(&table, &table, &strict_params(3)).unwrap();
    assert_eq!(ledger.winners(), &[HypothesisId::Base(1)]);
    assert!(!ledger.fallback());
}

#[test]
fn cyclic_wins_trigger_fallback() {
    // Block losses (0,1,2), (1,2,0), (2,0,1): each member beats exactly one other.
    let ids: Vec<HypothesisId> = (0..3).map(HypothesisId::Base).collect();
    let s = 2f64.sqrt();
    let rows = vec![vec![0.0, 1.0, s], vec![1.0, s, 0.0], vec![s, 0.0, 1.0]];
    let table = EvalTable::from_rows(ids.clone(), rows, vec![0.0; 3]).unwrap();
    let p = strict_params(3);
    let ledger = MatchLedger::build(&table, &table, &p).unwrap();
    assert!(winners(&ledger, &p).unwrap().is_empty());
    assert!(ledger.fallback());
    assert_eq!(ledger.winners(), ids.as_slice());
    assert!((0..3).all(|f| ledger.win_count(f) == 1));
}

#[test]
fn two_member_winner_is_the_one_that_beats() {
    let ids = vec![HypothesisId::Base(0), HypothesisId::Base(1)];
    let rows = vec![vec![0.0; 6], vec![3.0; 6]];
    let table = EvalTable::from_rows(ids, rows, vec![0.1; 6]).unwrap();
    let p = params(6, 3, 2.0);
    let ledger = MatchLedger::build(&table, &table, &p).unwrap();
    assert!(beats(HypothesisId::Base(0), HypothesisId::Base(1), &ledger, &p).unwrap());
    assert!(!beats(HypothesisId::Base(1), HypothesisId::Base(0), &ledger, &p).unwrap());
    assert_eq!(ledger.winners(), &[HypothesisId::Base(0)]);
}

fn tiny_sample(class_dim: usize, segment_len: usize, seed: u64) -> LabeledSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 4 * segment_len;
    let x = gaussian_vec(&mut rng, n * class_dim);
    let y = (0..n)
        .map(|i| x[i * class_dim] + normal(&mut rng))
        .collect();
    LabeledSample::new(class_dim, x, y, segment_len).unwrap()
}

#[test]
fn singleton_class_returns_itself() {
    let class = FunctionClass::linear(vec![vec![0.7, -0.2]]).unwrap();
    let sample = tiny_sample(2, 30, 1);
    let out = run_two_stage(&class, &sample, &params(30, 3, 2.0)).unwrap();
    assert_eq!(out.selected.id, HypothesisId::Midpoint(0, 0));
    assert_eq!(out.trace.f1(), &[HypothesisId::Base(0)]);
    assert_eq!(out.trace.f2(), &[HypothesisId::Midpoint(0, 0)]);
    assert_eq!(out.selected.coefficients().unwrap(), &[0.7, -0.2]);
}

#[test]
fn three_winners_give_six_candidates() {
    // Identical members tie every match, so all three win the first round.
    let class = FunctionClass::linear(vec![vec![1.0], vec![1.0], vec![1.0]]).unwrap();
    let sample = tiny_sample(1, 30, 2);
    let out = run_two_stage(&class, &sample, &params(30, 3, 2.0)).unwrap();
    assert_eq!(out.trace.f1().len(), 3);
    assert_eq!(out.trace.closure.len(), 6);
}

#[test]
fn segment_length_must_match_params() {
    let class = FunctionClass::linear(vec![vec![1.0]]).unwrap();
    let sample = tiny_sample(1, 30, 3);
    assert!(matches!(
        run_two_stage(&class, &sample, &params(31, 3, 2.0)),
        Err(TournamentError::LengthMismatch { .. })
    ));
}

/// `||h - h*|| = 1` with Gaussian covariates: the order-statistic distance lies
/// in `[1/(2 sqrt 10), 3 kappa1]`.
#[test]
fn p1_brackets_true_distance() {
    let n = 1000;
    let kappa1 = 2.5;
    let ell = (n as f64 / (5.0 * kappa1 * kappa1)).floor() as usize;
    let lower = 1.0 / (2.0 * 10f64.sqrt());
    let mut inside = 0;
    for t in 0..1000 {
        let mut rng = stream(17, "p1-bracket", t);
        let h: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let p1 = p1_distance(&h, &vec![0.0; n], ell).unwrap();
        if (lower..=3.0 * kappa1).contains(&p1) {
            inside += 1;
        }
    }
    assert!(inside >= 990, "{inside}");
}

/// Clipped Gaussian difference: the empirical L2 distance is within a factor 2
/// of the population one, computed here by quadrature.
#[test]
fn bounded_p1_brackets_true_distance() {
    let clip = 1.5;
    let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    // E min(Z^2, c^2) by Simpson's rule on [0, c] plus the tail.
    let steps = 2000;
    let hstep = clip / steps as f64;
    let mut inner = 0.0;
    for i in 0..=steps {
        let x = i as f64 * hstep;
        let w = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        inner += w * x * x * phi(x);
    }
    inner *= hstep / 3.0;
    let tail = 1.0 - statrs::function::erf::erf(clip / 2f64.sqrt());
    let exact = (2.0 * inner + clip * clip * tail).sqrt();

    let n = 200;
    let mut inside = 0;
    for t in 0..1000 {
        let mut rng = stream(18, "bounded-bracket", t);
        let h: Vec<f64> = (0..n)
            .map(|_| StandardNormal.sample(&mut rng))
            .map(|z: f64| z.clamp(-clip, clip))
            .collect();
        let d = bounded_p1_distance(&h, &vec![0.0; n]).unwrap();
        if (0.5 * exact..=2.0 * exact).contains(&d) {
            inside += 1;
        }
    }
    assert!(inside >= 990, "{inside}");
}

#[test]
fn adversarial_instance_selects_midpoint() {
    let segment_len = 1000;
    let (gap, bias, sigma) = (10.0, 0.5, 1.0);
    let (triplet, _, _) = adversarial_two_point(gap, bias, sigma, segment_len, 5).unwrap();
    let spec = tournament_core::datagen::adversarial_spec(gap, bias, sigma, 5);
    let problem = Problem::new(&spec, segment_len).unwrap();
    let kappa1 = class_kappa(&triplet.class, &problem, 0.1, 20_000, 6)
        .unwrap()
        .max(1.0);
    let p = TournamentParams::derive(0.25, 0.1, kappa1, kappa1, segment_len, &Default::default())
        .unwrap();
    let mut midpoint = 0;
    for t in 0..500 {
        let sample = problem.draw_sample(segment_len, 1000 + t).unwrap();
        let out = run_two_stage(&triplet.class, &sample, &p).unwrap();
        if out.selected.id == HypothesisId::Midpoint(0, 1) {
            midpoint += 1;
        }
    }
    assert!(midpoint >= 450, "{midpoint}");
}

fn random_class(rng: &mut ChaCha8Rng, k: usize, d: usize) -> FunctionClass {
    FunctionClass::linear((0..k).map(|_| gaussian_vec(rng, d)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn block_decomposition_holds(
        seed in any::<u64>(),
        n in 1usize..80,
        blocks in 1usize..8,
        scale in 1e-3f64..1e3,
    ) {
        prop_assume!(blocks <= n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h: Vec<f64> = gaussian_vec(&mut rng, n).iter().map(|v| v * scale).collect();
        let f: Vec<f64> = gaussian_vec(&mut rng, n).iter().map(|v| v * scale).collect();
        let y: Vec<f64> = gaussian_vec(&mut rng, n).iter().map(|v| v * scale).collect();
        let p = BlockPartition::new(n, blocks).unwrap();
        let s = block_stats(&h, &f, &y, &p).unwrap();
        for (j, block) in p.blocks().enumerate() {
            let m = block.len() as f64;
            let lh: f64 = block.clone().map(|i| (h[i] - y[i]).powi(2)).sum::<f64>() / m;
            let lf: f64 = block.map(|i| (f[i] - y[i]).powi(2)).sum::<f64>() / m;
            let gap = (s.b[j] - (s.q[j] + s.m[j])).abs();
            prop_assert!(gap <= 1e-12 * (lh + lf), "gap {} scale {}", gap, lh + lf);
        }
    }

    #[test]
    fn p1_is_symmetric_and_scale_covariant(
        seed in any::<u64>(),
        n in 1usize..100,
        ell_frac in 0.0f64..1.0,
        power in -20i32..20,
        lambda in 1e-3f64..1e3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = gaussian_vec(&mut rng, n);
        let f = gaussian_vec(&mut rng, n);
        let ell = 1 + ((n - 1) as f64 * ell_frac) as usize;
        let base = p1_distance(&h, &f, ell).unwrap();
        prop_assert_eq!(base, p1_distance(&f, &h, ell).unwrap());

        let two = 2f64.powi(power);
        let hs: Vec<f64> = h.iter().map(|v| v * two).collect();
        let fs: Vec<f64> = f.iter().map(|v| v * two).collect();
        prop_assert_eq!(p1_distance(&hs, &fs, ell).unwrap(), two * base);

        let hs: Vec<f64> = h.iter().map(|v| v * lambda).collect();
        let fs: Vec<f64> = f.iter().map(|v| v * lambda).collect();
        let scaled = p1_distance(&hs, &fs, ell).unwrap();
        // Rounding of lambda*h - lambda*f is relative to the operands, not the difference.
        let magnitude = h.iter().zip(&f).map(|(a, b)| a.abs() + b.abs()).fold(0.0, f64::max);
        prop_assert!((scaled - lambda * base).abs() <= 4.0 * f64::EPSILON * lambda * magnitude);
    }

    #[test]
    fn ledger_is_reflexive_and_symmetric(seed in any::<u64>(), k in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (dist, matches) = random_tables(&mut rng, k, 40, 1.0);
        let p = params(40, 5, 2.0);
        let ledger = MatchLedger::build(&dist, &matches, &p).unwrap();
        for &a in ledger.ids() {
            prop_assert!(ledger.record(a, a).unwrap().wins);
            for &b in ledger.ids() {
                prop_assert_eq!(ledger.record(a, b).unwrap().p1, ledger.record(b, a).unwrap().p1);
            }
        }
    }

    #[test]
    fn stages_are_nested_and_deterministic(seed in any::<u64>(), k in 1usize..7, d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let class = random_class(&mut rng, k, d);
        let sample = tiny_sample(d, 35, seed);
        let p = params(35, 5, 1.5);
        let out = run_two_stage(&class, &sample, &p).unwrap();
        let again = run_two_stage(&class, &sample, &p).unwrap();
        prop_assert_eq!(&out, &again);

        let base = class.ids();
        prop_assert!(out.trace.f1().iter().all(|id| base.contains(id)));
        prop_assert!(out.trace.f2().iter().all(|id| out.trace.closure.contains(id)));
        for id in out.trace.f1() {
            let i = id.as_member().unwrap();
            prop_assert!(out.trace.closure.contains(&HypothesisId::Midpoint(i, i)));
        }
        prop_assert_eq!(out.selected.id, *out.trace.f2().iter().min().unwrap());
    }

    #[test]
    fn midpoint_evaluations_average_parents(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Hypothesis::tabulated(0, gaussian_vec(&mut rng, 8));
        let b = Hypothesis::tabulated(1, gaussian_vec(&mut rng, 8));
        let mid = a.midpoint(&b).unwrap();
        for i in 0..8 {
            prop_assert_eq!(mid.value_at(i).unwrap(), 0.5 * (a.value_at(i).unwrap() + b.value_at(i).unwrap()));
        }
    }
}
