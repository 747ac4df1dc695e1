use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::p1::{bounded_p1_distance, p1_distance};
use super::params::{DistanceEstimator, MatchRule, TournamentParams};
use super::TournamentError;
use crate::model::{EvalTable, HypothesisId};

/// Contiguous blocks over `0..n_points`; the first `n_points mod n_blocks`
/// blocks hold one extra point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    bounds: Vec<usize>,
}

impl BlockPartition {
    pub fn new(n_points: usize, n_blocks: usize) -> Result<Self, TournamentError> {
        if n_blocks == 0 || n_blocks > n_points {
            return Err(TournamentError::EmptyBlock { n_points, n_blocks });
        }
        let base = n_points / n_blocks;
        let extra = n_points % n_blocks;
        let mut bounds = Vec::with_capacity(n_blocks + 1);
        bounds.push(0);
        for j in 0..n_blocks {
            let size = base + usize::from(j < extra);
            bounds.push(bounds[j] + size);
        }
        Ok(BlockPartition { bounds })
    }

    pub fn n_blocks(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn n_points(&self) -> usize {
        *self.bounds.last().unwrap_or(&0)
    }

    pub fn block(&self, j: usize) -> Range<usize> {
        self.bounds[j]..self.bounds[j + 1]
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.bounds.windows(2).map(|w| w[0]..w[1])
    }
}

/// Per-block means `B_j`, `Q_j` and `M_j` for an ordered pair `(h, f)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BlockStats {
    /// `mean (h - Y)^2 - mean (f - Y)^2`.
    pub b: Vec<f64>,
    /// `mean (h - f)^2`.
    pub q: Vec<f64>,
    /// `2 mean (h - f)(f - Y)`.
    pub m: Vec<f64>,
}

pub fn block_stats(
    values_h: &[f64],
    values_f: &[f64],
    responses: &[f64],
    partition: &BlockPartition,
) -> Result<BlockStats, TournamentError> {
    let n = values_h.len();
    for other in [values_f.len(), responses.len(), partition.n_points()] {
        if other != n {
            return Err(TournamentError::LengthMismatch {
                expected: n,
                found: other,
            });
        }
    }
    let mut stats = BlockStats {
        b: Vec::with_capacity(partition.n_blocks()),
        q: Vec::with_capacity(partition.n_blocks()),
        m: Vec::with_capacity(partition.n_blocks()),
    };
    for block in partition.blocks() {
        let size = block.len() as f64;
        let (mut sh, mut sf, mut sq, mut sm) = (0.0, 0.0, 0.0, 0.0);
        for i in block {
            let rh = values_h[i] - responses[i];
            let rf = values_f[i] - responses[i];
            let diff = values_h[i] - values_f[i];
            sh += rh * rh;
            sf += rf * rf;
            sq += diff * diff;
            sm += diff * rf;
        }
        stats.b.push(sh / size - sf / size);
        stats.q.push(sq / size);
        stats.m.push(2.0 * sm / size);
    }
    Ok(stats)
}

/// Everything recorded about the home match of `f` against `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub p1: f64,
    pub stats: BlockStats,
    pub threshold: f64,
    pub passing_blocks: usize,
    pub wins: bool,
}

/// Results of all ordered matches within a class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchLedger {
    ids: Vec<HypothesisId>,
    n_blocks: usize,
    /// Indexed `[h * k + f]`: statistics `B_{h,f}` and whether `f` beats `h`.
    records: Vec<PairRecord>,
    winners: Vec<HypothesisId>,
    fallback: bool,
}

impl MatchLedger {
    /// Plays every ordered pair: distances on `distance_table`, blocks on `match_table`.
    pub fn build(
        distance_table: &EvalTable,
        match_table: &EvalTable,
        params: &TournamentParams,
    ) -> Result<MatchLedger, TournamentError> {
        if distance_table.ids() != match_table.ids() {
            return Err(TournamentError::TableMismatch);
        }
        let k = distance_table.n_hypotheses();
        let partition = BlockPartition::new(match_table.n_points(), params.n_blocks)?;
        let distance = |a: usize, b: usize| -> Result<f64, TournamentError> {
            let (x, y) = (distance_table.row(a), distance_table.row(b));
            match params.distance {
                DistanceEstimator::OrderStatistic => p1_distance(x, y, params.ell),
                DistanceEstimator::EmpiricalL2 => bounded_p1_distance(x, y),
            }
        };

        // Upper triangle only, mirrored so that p1(h, f) == p1(f, h) exactly.
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .collect();
        let upper: Vec<f64> = map_collect(&pairs, |&(a, b)| distance(a, b))?;
        let mut p1 = vec![0.0; k * k];
        for (&(a, b), d) in pairs.iter().zip(upper) {
            p1[a * k + b] = d;
            p1[b * k + a] = d;
        }

        let rule = params.rule();
        let cells: Vec<usize> = (0..k * k).collect();
        let records = map_collect(&cells, |&cell| {
            let (h, f) = (cell / k, cell % k);
            let stats = block_stats(
                match_table.row(h),
                match_table.row(f),
                match_table.responses(),
                &partition,
            )?;
            Ok(make_record(p1[cell], stats, &rule))
        })?;

        let mut ledger = MatchLedger {
            ids: distance_table.ids().to_vec(),
            n_blocks: params.n_blocks,
            records,
            winners: Vec::new(),
            fallback: false,
        };
        let (winners, fallback) = ledger.select_winners();
        ledger.winners = winners;
        ledger.fallback = fallback;
        Ok(ledger)
    }

    pub fn ids(&self) -> &[HypothesisId] {
        &self.ids
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    fn position(&self, id: HypothesisId) -> Result<usize, TournamentError> {
        self.ids
            .iter()
            .position(|x| *x == id)
            .ok_or(TournamentError::UnknownId(id))
    }

    /// Record of the ordered pair `(h, f)`, i.e. of `f` playing at home against `h`.
    pub fn record(&self, h: HypothesisId, f: HypothesisId) -> Result<&PairRecord, TournamentError> {
        let k = self.ids.len();
        Ok(&self.records[self.position(h)? * k + self.position(f)?])
    }

    fn record_at(&self, h: usize, f: usize) -> &PairRecord {
        &self.records[h * self.ids.len() + f]
    }

    /// Number of opponents (other than itself) that member `f` beats.
    pub fn win_count(&self, f: usize) -> usize {
        (0..self.ids.len())
            .filter(|&h| h != f && self.record_at(h, f).wins)
            .count()
    }

    /// Winners and whether the empty-set fallback was used.
    fn select_winners(&self) -> (Vec<HypothesisId>, bool) {
        let k = self.ids.len();
        let strict: Vec<HypothesisId> = (0..k)
            .filter(|&f| (0..k).all(|h| self.record_at(h, f).wins))
            .map(|f| self.ids[f])
            .collect();
        if !strict.is_empty() {
            return (sorted(strict), false);
        }
        let counts: Vec<usize> = (0..k).map(|f| self.win_count(f)).collect();
        let best = counts.iter().copied().max().unwrap_or(0);
        let fallback = (0..k)
            .filter(|&f| counts[f] == best)
            .map(|f| self.ids[f])
            .collect();
        (sorted(fallback), true)
    }

    /// Members that beat every opponent, sorted by id.
    pub fn winners(&self) -> &[HypothesisId] {
        &self.winners
    }

    /// True when nobody won every match and the most-wins members were returned.
    pub fn fallback(&self) -> bool {
        self.fallback
    }
}

fn sorted(mut ids: Vec<HypothesisId>) -> Vec<HypothesisId> {
    ids.sort();
    ids
}

fn make_record(p1: f64, stats: BlockStats, rule: &MatchRule) -> PairRecord {
    let passing_blocks = rule.passing_blocks(&stats.b, p1);
    PairRecord {
        p1,
        threshold: rule.threshold(p1),
        wins: passing_blocks > stats.b.len() / 2,
        passing_blocks,
        stats,
    }
}

/// Order-preserving map, parallel when the `parallel` feature is on.
fn map_collect<T, R, F>(items: &[T], f: F) -> Result<Vec<R>, TournamentError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, TournamentError> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Whether `f` beats `h`, re-evaluated from the ledger's block values.
pub fn beats(
    f: HypothesisId,
    h: HypothesisId,
    ledger: &MatchLedger,
    params: &TournamentParams,
) -> Result<bool, TournamentError> {
    let record = ledger.record(h, f)?;
    Ok(params.rule().wins(&record.stats.b, record.p1))
}

/// `{f : f beats every h}` re-evaluated from the ledger; may be empty.
pub fn winners(
    ledger: &MatchLedger,
    params: &TournamentParams,
) -> Result<Vec<HypothesisId>, TournamentError> {
    let mut out = Vec::new();
    for &f in ledger.ids() {
        let mut all = true;
        for &h in ledger.ids() {
            if !beats(f, h, ledger, params)? {
                all = false;
                break;
            }
        }
        if all {
            out.push(f);
        }
    }
    Ok(sorted(out))
}
