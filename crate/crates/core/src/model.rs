//! Hypotheses, classes, samples and the exact population oracle for linear classes.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("hypothesis {0} is not linear")]
    NotLinear(HypothesisId),
    #[error("hypothesis {0} is not tabulated")]
    NotTabulated(HypothesisId),
    #[error("sample position {position} out of range for {len} points")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("duplicate hypothesis id {0}")]
    DuplicateId(HypothesisId),
    #[error("function class is empty")]
    EmptyClass,
    #[error("unknown hypothesis id {0}")]
    UnknownId(HypothesisId),
    #[error("midpoints can only be formed from base hypotheses, got {0}")]
    NestedMidpoint(HypothesisId),
    #[error("cannot combine a linear and a tabulated hypothesis")]
    KindMismatch,
    #[error("covariance matrix is not symmetric positive semidefinite")]
    NotPsd,
    #[error("noise variance must be finite and non-negative, got {0}")]
    InvalidNoiseVariance(f64),
    #[error("segment length must be positive")]
    EmptySegment,
}

/// Stable identifier of a hypothesis.
///
/// Midpoints carry the canonical pair `(i, j)` with `i <= j`, so the closure of
/// a `k`-member set has exactly `k(k+1)/2` ids without any floating-point
/// comparison. `Midpoint(i, i)` is the member itself seen inside the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HypothesisId {
    Base(usize),
    Midpoint(usize, usize),
}

impl HypothesisId {
    pub fn midpoint(a: usize, b: usize) -> Self {
        HypothesisId::Midpoint(a.min(b), a.max(b))
    }

    /// Base index of the member this id stands for, if it is a member of the
    /// original class (a base id or a self-midpoint).
    pub fn as_member(&self) -> Option<usize> {
        match *self {
            HypothesisId::Base(i) => Some(i),
            HypothesisId::Midpoint(i, j) if i == j => Some(i),
            HypothesisId::Midpoint(..) => None,
        }
    }
}

impl fmt::Display for HypothesisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisId::Base(i) => write!(f, "{i}"),
            HypothesisId::Midpoint(i, j) => write!(f, "{i}+{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HypothesisKind {
    Linear(Vec<f64>),
    /// Values indexed by sample position.
    Tabulated(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: HypothesisId,
    pub kind: HypothesisKind,
}

impl Hypothesis {
    pub fn linear(index: usize, coefficients: Vec<f64>) -> Self {
        Hypothesis {
            id: HypothesisId::Base(index),
            kind: HypothesisKind::Linear(coefficients),
        }
    }

    pub fn tabulated(index: usize, values: Vec<f64>) -> Self {
        Hypothesis {
            id: HypothesisId::Base(index),
            kind: HypothesisKind::Tabulated(values),
        }
    }

    pub fn coefficients(&self) -> Option<&[f64]> {
        match &self.kind {
            HypothesisKind::Linear(c) => Some(c),
            HypothesisKind::Tabulated(_) => None,
        }
    }

    /// `h(x)` for a linear hypothesis.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, ModelError> {
        let coefficients = self.coefficients().ok_or(ModelError::NotLinear(self.id))?;
        if coefficients.len() != x.len() {
            return Err(ModelError::DimensionMismatch {
                expected: coefficients.len(),
                found: x.len(),
            });
        }
        Ok(coefficients.iter().zip(x).map(|(a, b)| a * b).sum())
    }

    /// Tabulated value at a sample position.
    pub fn value_at(&self, position: usize) -> Result<f64, ModelError> {
        match &self.kind {
            HypothesisKind::Tabulated(values) => {
                values
                    .get(position)
                    .copied()
                    .ok_or(ModelError::PositionOutOfRange {
                        position,
                        len: values.len(),
                    })
            }
            HypothesisKind::Linear(_) => Err(ModelError::NotTabulated(self.id)),
        }
    }

    /// Evaluates either kind at sample point `position` with covariate `x`.
    pub fn evaluate_point(&self, position: usize, x: &[f64]) -> Result<f64, ModelError> {
        match self.kind {
            HypothesisKind::Linear(_) => self.evaluate(x),
            HypothesisKind::Tabulated(_) => self.value_at(position),
        }
    }

    /// `(self + other) / 2` with a canonical midpoint id.
    pub fn midpoint(&self, other: &Hypothesis) -> Result<Hypothesis, ModelError> {
        let (a, b) = match (self.id, other.id) {
            (HypothesisId::Base(a), HypothesisId::Base(b)) => (a, b),
            (HypothesisId::Base(_), id) | (id, _) => return Err(ModelError::NestedMidpoint(id)),
        };
        let kind = match (&self.kind, &other.kind) {
            (HypothesisKind::Linear(x), HypothesisKind::Linear(y)) => {
                HypothesisKind::Linear(average(x, y)?)
            }
            (HypothesisKind::Tabulated(x), HypothesisKind::Tabulated(y)) => {
                HypothesisKind::Tabulated(average(x, y)?)
            }
            _ => return Err(ModelError::KindMismatch),
        };
        Ok(Hypothesis {
            id: HypothesisId::midpoint(a, b),
            kind,
        })
    }
}

fn average(x: &[f64], y: &[f64]) -> Result<Vec<f64>, ModelError> {
    if x.len() != y.len() {
        return Err(ModelError::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Base,
    /// Closure of the listed base members under midpoint formation.
    MidpointClosure {
        parents: Vec<HypothesisId>,
    },
}

/// A finite, non-empty, ordered set of hypotheses with unique ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionClass {
    members: Vec<Hypothesis>,
    provenance: Provenance,
}

impl FunctionClass {
    pub fn new(members: Vec<Hypothesis>) -> Result<Self, ModelError> {
        Self::with_provenance(members, Provenance::Base)
    }

    fn with_provenance(
        members: Vec<Hypothesis>,
        provenance: Provenance,
    ) -> Result<Self, ModelError> {
        if members.is_empty() {
            return Err(ModelError::EmptyClass);
        }
        let mut seen = HashSet::with_capacity(members.len());
        for h in &members {
            if !seen.insert(h.id) {
                return Err(ModelError::DuplicateId(h.id));
            }
        }
        Ok(FunctionClass {
            members,
            provenance,
        })
    }

    /// Linear class `{<t_i, .>}` with ids `0..m`.
    pub fn linear(coefficients: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let members: Vec<Hypothesis> = coefficients
            .into_iter()
            .enumerate()
            .map(|(i, c)| Hypothesis::linear(i, c))
            .collect();
        if let Some(first) = members.first() {
            let d = first.coefficients().map_or(0, <[f64]>::len);
            for h in &members {
                let found = h.coefficients().map_or(0, <[f64]>::len);
                if found != d {
                    return Err(ModelError::DimensionMismatch { expected: d, found });
                }
            }
        }
        Self::new(members)
    }

    pub fn members(&self) -> &[Hypothesis] {
        &self.members
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ids(&self) -> Vec<HypothesisId> {
        self.members.iter().map(|h| h.id).collect()
    }

    pub fn position(&self, id: HypothesisId) -> Option<usize> {
        self.members.iter().position(|h| h.id == id)
    }

    pub fn get(&self, id: HypothesisId) -> Option<&Hypothesis> {
        self.members.iter().find(|h| h.id == id)
    }

    /// Dimension of the linear members, `None` for tabulated classes.
    pub fn dim(&self) -> Option<usize> {
        self.members[0].coefficients().map(<[f64]>::len)
    }

    /// Sub-class with the given ids, kept in class order.
    pub fn subset(&self, ids: &[HypothesisId]) -> Result<FunctionClass, ModelError> {
        for id in ids {
            if self.position(*id).is_none() {
                return Err(ModelError::UnknownId(*id));
            }
        }
        let keep: HashSet<HypothesisId> = ids.iter().copied().collect();
        let members = self
            .members
            .iter()
            .filter(|h| keep.contains(&h.id))
            .cloned()
            .collect();
        Self::with_provenance(members, self.provenance.clone())
    }

    /// `{(f + h)/2 : f, h in self}` over pairs `i <= j`, sorted by id.
    pub fn midpoint_closure(&self) -> Result<FunctionClass, ModelError> {
        let k = self.members.len();
        let mut closure = Vec::with_capacity(k * (k + 1) / 2);
        for i in 0..k {
            for j in i..k {
                closure.push(self.members[i].midpoint(&self.members[j])?);
            }
        }
        closure.sort_by_key(|h| h.id);
        Self::with_provenance(
            closure,
            Provenance::MidpointClosure {
                parents: self.ids(),
            },
        )
    }
}

/// Which quarter of the sample a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Segment {
    /// Distances for the first stage.
    Distance1 = 0,
    /// Matches for the first stage.
    Match1 = 1,
    /// Distances for the second stage.
    Distance2 = 2,
    /// Matches for the second stage.
    Match2 = 3,
}

impl Segment {
    pub const ALL: [Segment; 4] = [
        Segment::Distance1,
        Segment::Match1,
        Segment::Distance2,
        Segment::Match2,
    ];
}

/// `4N` labelled points split into four contiguous, disjoint segments of `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    dim: usize,
    covariates: Vec<f64>,
    responses: Vec<f64>,
    segment_len: usize,
}

impl LabeledSample {
    /// `covariates` is row-major with `dim` columns; `dim = 0` is allowed for
    /// samples consumed only by tabulated hypotheses.
    pub fn new(
        dim: usize,
        covariates: Vec<f64>,
        responses: Vec<f64>,
        segment_len: usize,
    ) -> Result<Self, ModelError> {
        if segment_len == 0 {
            return Err(ModelError::EmptySegment);
        }
        if responses.len() != 4 * segment_len {
            return Err(ModelError::DimensionMismatch {
                expected: 4 * segment_len,
                found: responses.len(),
            });
        }
        if covariates.len() != dim * responses.len() {
            return Err(ModelError::DimensionMismatch {
                expected: dim * responses.len(),
                found: covariates.len(),
            });
        }
        Ok(LabeledSample {
            dim,
            covariates,
            responses,
            segment_len,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    pub fn segment_len(&self) -> usize {
        self.segment_len
    }

    pub fn segment(&self, segment: Segment) -> Range<usize> {
        let start = segment as usize * self.segment_len;
        start..start + self.segment_len
    }

    pub fn covariate(&self, i: usize) -> &[f64] {
        &self.covariates[i * self.dim..(i + 1) * self.dim]
    }

    pub fn covariates(&self) -> &[f64] {
        &self.covariates
    }

    pub fn responses(&self) -> &[f64] {
        &self.responses
    }

    /// Copy with every response clipped to `[-bound, bound]`.
    pub fn clip_responses(&self, bound: f64) -> LabeledSample {
        let mut clipped = self.clone();
        for y in &mut clipped.responses {
            *y = y.clamp(-bound, bound);
        }
        clipped
    }
}

/// Evaluations of every class member on a range of sample points, row-major
/// `|H| x N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTable {
    ids: Vec<HypothesisId>,
    n_points: usize,
    values: Vec<f64>,
    responses: Vec<f64>,
}

impl EvalTable {
    pub fn evaluate(
        class: &FunctionClass,
        sample: &LabeledSample,
        range: Range<usize>,
    ) -> Result<EvalTable, ModelError> {
        if range.end > sample.len() {
            return Err(ModelError::PositionOutOfRange {
                position: range.end,
                len: sample.len(),
            });
        }
        let n_points = range.len();
        let mut values = Vec::with_capacity(class.len() * n_points);
        for h in class.members() {
            for i in range.clone() {
                values.push(h.evaluate_point(i, sample.covariate(i))?);
            }
        }
        Ok(EvalTable {
            ids: class.ids(),
            n_points,
            values,
            responses: sample.responses()[range].to_vec(),
        })
    }

    /// Builds a table directly from rows of evaluations.
    pub fn from_rows(
        ids: Vec<HypothesisId>,
        rows: Vec<Vec<f64>>,
        responses: Vec<f64>,
    ) -> Result<EvalTable, ModelError> {
        if ids.len() != rows.len() {
            return Err(ModelError::DimensionMismatch {
                expected: ids.len(),
                found: rows.len(),
            });
        }
        let n_points = responses.len();
        let mut values = Vec::with_capacity(ids.len() * n_points);
        for row in rows {
            if row.len() != n_points {
                return Err(ModelError::DimensionMismatch {
                    expected: n_points,
                    found: row.len(),
                });
            }
            values.extend(row);
        }
        Ok(EvalTable {
            ids,
            n_points,
            values,
            responses,
        })
    }

    pub fn ids(&self) -> &[HypothesisId] {
        &self.ids
    }

    pub fn n_hypotheses(&self) -> usize {
        self.ids.len()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.n_points..(k + 1) * self.n_points]
    }

    pub fn responses(&self) -> &[f64] {
        &self.responses
    }
}

/// Covariate distribution families; the covariance is carried separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovariateFamily {
    Gaussian,
    /// Independent symmetric signs in each coordinate, mixed by the covariance root.
    Rademacher,
    /// Multivariate Student-t scaled to have the given covariance.
    StudentT {
        df: f64,
    },
}

/// Additive noise `W` in `Y = <X, t0> + W`, independent of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseFamily {
    None,
    Gaussian { sigma: f64 },
    StudentT { df: f64, scale: f64 },
}

impl NoiseFamily {
    pub fn variance(&self) -> f64 {
        match *self {
            NoiseFamily::None => 0.0,
            NoiseFamily::Gaussian { sigma } => sigma * sigma,
            NoiseFamily::StudentT { df, scale } => scale * scale * df / (df - 2.0),
        }
    }
}

/// A learning problem: class, covariate law and target.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    pub class: FunctionClass,
    pub covariates: CovariateFamily,
    pub covariance: DMatrix<f64>,
    pub t0: Vec<f64>,
    pub noise: NoiseFamily,
}

/// Exact second-moment structure of a linear model with independent noise.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationOracle {
    covariance: DMatrix<f64>,
    t0: DVector<f64>,
    noise_variance: f64,
}

const PSD_TOL: f64 = 1e-10;

impl PopulationOracle {
    pub fn new(
        covariance: DMatrix<f64>,
        t0: Vec<f64>,
        noise_variance: f64,
    ) -> Result<Self, ModelError> {
        let d = t0.len();
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(ModelError::DimensionMismatch {
                expected: d,
                found: covariance.nrows(),
            });
        }
        if !(noise_variance.is_finite() && noise_variance >= 0.0) {
            return Err(ModelError::InvalidNoiseVariance(noise_variance));
        }
        let scale = covariance.amax().max(1.0);
        if (&covariance - covariance.transpose()).amax() > PSD_TOL * scale {
            return Err(ModelError::NotPsd);
        }
        if d > 0 {
            let min_eig = covariance.clone().symmetric_eigenvalues().min();
            if min_eig < -PSD_TOL * scale {
                return Err(ModelError::NotPsd);
            }
        }
        Ok(PopulationOracle {
            covariance,
            t0: DVector::from_vec(t0),
            noise_variance,
        })
    }

    pub fn dim(&self) -> usize {
        self.t0.len()
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn t0(&self) -> &[f64] {
        self.t0.as_slice()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    fn vector(&self, t: &[f64]) -> Result<DVector<f64>, ModelError> {
        if t.len() != self.dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.dim(),
                found: t.len(),
            });
        }
        Ok(DVector::from_column_slice(t))
    }

    /// `a^T Sigma b`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> Result<f64, ModelError> {
        let a = self.vector(a)?;
        let b = self.vector(b)?;
        Ok(a.dot(&(&self.covariance * b)))
    }

    /// `E(<X,t> - Y)^2 = (t - t0)^T Sigma (t - t0) + noise_variance`.
    pub fn risk(&self, t: &[f64]) -> Result<f64, ModelError> {
        let diff = self.vector(t)? - &self.t0;
        Ok(diff.dot(&(&self.covariance * &diff)) + self.noise_variance)
    }

    pub fn risk_of(&self, h: &Hypothesis) -> Result<f64, ModelError> {
        self.risk(h.coefficients().ok_or(ModelError::NotLinear(h.id))?)
    }

    /// `||<X, a - b>||_{L2}`.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64, ModelError> {
        let diff = self.vector(a)? - self.vector(b)?;
        Ok(diff.dot(&(&self.covariance * &diff)).max(0.0).sqrt())
    }

    pub fn distance_between(&self, h: &Hypothesis, f: &Hypothesis) -> Result<f64, ModelError> {
        self.distance(linear_coefficients(h)?, linear_coefficients(f)?)
    }

    /// `E (h - f)(X) (f(X) - Y) = (h - f)^T Sigma (f - t0)`.
    pub fn cross_term(&self, h: &Hypothesis, f: &Hypothesis) -> Result<f64, ModelError> {
        let hv = self.vector(linear_coefficients(h)?)?;
        let fv = self.vector(linear_coefficients(f)?)?;
        let diff = hv - &fv;
        let residual = fv - &self.t0;
        Ok(diff.dot(&(&self.covariance * residual)))
    }
}

fn linear_coefficients(h: &Hypothesis) -> Result<&[f64], ModelError> {
    h.coefficients().ok_or(ModelError::NotLinear(h.id))
}

/// Member of minimal population risk, ties broken by smallest id.
pub fn population_minimizer<'a>(
    oracle: &PopulationOracle,
    class: &'a FunctionClass,
) -> Result<&'a Hypothesis, ModelError> {
    let mut best: Option<(&Hypothesis, f64)> = None;
    for h in class.members() {
        let risk = oracle.risk_of(h)?;
        best = match best {
            Some((b, br)) if br < risk || (br == risk && b.id < h.id) => Some((b, br)),
            _ => Some((h, risk)),
        };
    }
    best.map(|(h, _)| h).ok_or(ModelError::EmptyClass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_evaluation() {
        let h = Hypothesis::linear(0, vec![1.0, 2.0]);
        assert_eq!(h.evaluate(&[3.0, -1.0]).unwrap(), 1.0);
        assert!(matches!(
            h.evaluate(&[1.0]),
            Err(ModelError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn midpoint_evaluation() {
        let a = Hypothesis::linear(0, vec![0.0, 0.0]);
        let b = Hypothesis::linear(1, vec![2.0, 4.0]);
        let m = a.midpoint(&b).unwrap();
        assert_eq!(m.id, HypothesisId::Midpoint(0, 1));
        assert_eq!(m.evaluate(&[1.0, 1.0]).unwrap(), 3.0);
        assert_eq!(b.midpoint(&a).unwrap().id, HypothesisId::Midpoint(0, 1));
        assert!(matches!(m.midpoint(&a), Err(ModelError::NestedMidpoint(_))));
    }

    #[test]
    fn tabulated_lookup() {
        let h = Hypothesis::tabulated(3, vec![0.5, -1.5, 2.0]);
        assert_eq!(h.value_at(1).unwrap(), -1.5);
        assert_eq!(h.evaluate_point(2, &[]).unwrap(), 2.0);
        assert!(h.value_at(3).is_err());
        assert!(h.evaluate(&[1.0]).is_err());
    }

    #[test]
    fn id_display() {
        assert_eq!(HypothesisId::Base(3).to_string(), "3");
        assert_eq!(HypothesisId::midpoint(4, 1).to_string(), "1+4");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let h = Hypothesis::linear(0, vec![1.0]);
        assert!(matches!(
            FunctionClass::new(vec![h.clone(), h]),
            Err(ModelError::DuplicateId(_))
        ));
        assert!(matches!(
            FunctionClass::new(vec![]),
            Err(ModelError::EmptyClass)
        ));
    }

    #[test]
    fn closure_of_three() {
        let class = FunctionClass::linear(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let closure = class.midpoint_closure().unwrap();
        assert_eq!(closure.len(), 6);
        let m = closure.get(HypothesisId::Midpoint(1, 2)).unwrap();
        assert_eq!(m.coefficients().unwrap(), &[2.0]);
        let itself = closure.get(HypothesisId::Midpoint(2, 2)).unwrap();
        assert_eq!(itself.coefficients().unwrap(), &[3.0]);
    }

    #[test]
    fn sample_segments_partition() {
        let sample =
            LabeledSample::new(1, (0..8).map(f64::from).collect(), vec![0.0; 8], 2).unwrap();
        let ranges: Vec<_> = Segment::ALL.iter().map(|s| sample.segment(*s)).collect();
        assert_eq!(ranges, vec![0..2, 2..4, 4..6, 6..8]);
        assert_eq!(sample.covariate(5), &[5.0]);
    }

    #[test]
    fn risk_identities() {
        let oracle = PopulationOracle::new(DMatrix::identity(2, 2), vec![0.5, -1.0], 1.0).unwrap();
        assert_eq!(oracle.risk(&[0.5, -1.0]).unwrap(), 1.0);
        assert_eq!(oracle.risk(&[1.5, -1.0]).unwrap(), 2.0);
    }

    #[test]
    fn minimizer_prefers_t0() {
        let oracle = PopulationOracle::new(DMatrix::identity(2, 2), vec![0.0, 0.0], 1.0).unwrap();
        let class = FunctionClass::linear(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(
            population_minimizer(&oracle, &class).unwrap().id,
            HypothesisId::Base(1)
        );
        let tie = FunctionClass::linear(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(
            population_minimizer(&oracle, &tie).unwrap().id,
            HypothesisId::Base(0)
        );
    }

    #[test]
    fn non_psd_rejected() {
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(
            PopulationOracle::new(bad, vec![0.0, 0.0], 0.0),
            Err(ModelError::NotPsd)
        );
    }
}
