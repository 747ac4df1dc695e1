use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal, StudentT};

use super::spec::{CovarianceSpec, Geometry, ScenarioSpec, TargetPoint, TargetSpec};
use super::DatagenError;
use crate::model::{
    CovariateFamily, FunctionClass, Hypothesis, LabeledSample, NoiseFamily, PopulationOracle,
    Triplet,
};
use crate::rng::{child_seed, stream, StreamRng};

/// Anything that can draw labelled points `(X, Y)`.
pub trait JointSampler: Sync {
    fn dim(&self) -> usize;
    /// Writes a covariate into `x` and returns the matching response.
    fn draw(&self, rng: &mut StreamRng, x: &mut [f64]) -> f64;
}

/// Square root `L` of the covariance, `Sigma = L L^T`.
#[derive(Debug, Clone, PartialEq)]
enum Root {
    Identity,
    Diagonal(Vec<f64>),
    /// Row-major lower-triangular factor.
    Lower(Vec<f64>),
}

impl Root {
    /// `x <- L x`, in place (rows are rewritten bottom-up).
    fn apply(&self, x: &mut [f64]) {
        match self {
            Root::Identity => {}
            Root::Diagonal(s) => {
                for (xi, si) in x.iter_mut().zip(s) {
                    *xi *= si;
                }
            }
            Root::Lower(l) => {
                let d = x.len();
                for i in (0..d).rev() {
                    let v: f64 = l[i * d..i * d + i + 1]
                        .iter()
                        .zip(x.iter())
                        .map(|(a, b)| a * b)
                        .sum();
                    x[i] = v;
                }
            }
        }
    }
}

/// A fully resolved scenario: the triplet, its exact oracle and a sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub spec: ScenarioSpec,
    pub triplet: Triplet,
    pub oracle: PopulationOracle,
    root: Root,
    /// `L^{-T}`, maps standard coordinates to coefficient vectors of unit norm.
    inv_root_t: DMatrix<f64>,
}

fn unit_gaussian_direction(rng: &mut StreamRng, d: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

impl Problem {
    /// Resolves `spec` for samples with `segment_len` points per segment (the
    /// tilted-midpoint target depends on it).
    pub fn new(spec: &ScenarioSpec, segment_len: usize) -> Result<Problem, DatagenError> {
        spec.validate()?;
        let d = spec.dim;
        let covariance = match &spec.covariance {
            CovarianceSpec::Identity => DMatrix::identity(d, d),
            CovarianceSpec::Diagonal(v) => {
                DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))
            }
            CovarianceSpec::Matrix(rows) => {
                DMatrix::from_row_iterator(d, d, rows.iter().flatten().copied())
            }
        };
        let chol = covariance.clone().cholesky().ok_or_else(|| {
            DatagenError::InvalidSpec("covariance is not positive definite".into())
        })?;
        let lower = chol.l();
        let root = match &spec.covariance {
            CovarianceSpec::Identity => Root::Identity,
            CovarianceSpec::Diagonal(v) => Root::Diagonal(v.iter().map(|x| x.sqrt()).collect()),
            CovarianceSpec::Matrix(_) => Root::Lower(
                (0..d)
                    .flat_map(|i| (0..d).map(move |j| (i, j)))
                    .map(|(i, j)| lower[(i, j)])
                    .collect(),
            ),
        };
        let inv_root_t = lower
            .transpose()
            .try_inverse()
            .ok_or_else(|| DatagenError::InvalidSpec("covariance is singular".into()))?;
        let to_coefficients = |z: &[f64], scale: f64| -> Vec<f64> {
            let v = &inv_root_t * nalgebra::DVector::from_column_slice(z);
            v.iter().map(|x| x * scale).collect()
        };
        let basis = |i: usize| -> Vec<f64> {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            e
        };

        let mut dict_rng = stream(spec.seed, "dictionary", 0);
        let members: Vec<Vec<f64>> = match &spec.geometry {
            Geometry::Orthogonal { m, scale } => (0..*m)
                .map(|i| to_coefficients(&basis(i), *scale))
                .collect(),
            Geometry::RandomSphere { m, scale } => (0..*m)
                .map(|_| to_coefficients(&unit_gaussian_direction(&mut dict_rng, d), *scale))
                .collect(),
            Geometry::Clustered { m, spread, scale } => {
                let centre = to_coefficients(&unit_gaussian_direction(&mut dict_rng, d), *scale);
                (0..*m)
                    .map(|_| {
                        let offset =
                            to_coefficients(&unit_gaussian_direction(&mut dict_rng, d), *spread);
                        centre.iter().zip(&offset).map(|(c, o)| c + o).collect()
                    })
                    .collect()
            }
            Geometry::TwoPoint { gap } => {
                let v = to_coefficients(&basis(0), 0.5 * gap);
                vec![v.iter().map(|x| -x).collect(), v]
            }
            Geometry::Explicit { members } => members.clone(),
        };
        let class = FunctionClass::linear(members.clone())?;
        let probe = PopulationOracle::new(covariance.clone(), vec![0.0; d], 0.0)?;

        let t0 = match &spec.target {
            TargetSpec::Realizable { member } => members[*member].clone(),
            TargetSpec::Additive { t0, .. } => match t0 {
                TargetPoint::Member(i) => members[*i].clone(),
                TargetPoint::Explicit(v) => v.clone(),
                TargetPoint::Random { scale } => {
                    let mut rng = stream(spec.seed, "target", 0);
                    to_coefficients(&unit_gaussian_direction(&mut rng, d), *scale)
                }
            },
            TargetSpec::TiltedMidpoint {
                members: [a, b],
                bias_scale,
                ..
            } => {
                let (ta, tb) = (&members[*a], &members[*b]);
                let gap = probe.distance(ta, tb)?;
                if gap <= 0.0 {
                    return Err(DatagenError::InvalidSpec(
                        "tilted midpoint members coincide".into(),
                    ));
                }
                let shift = bias_scale / (segment_len.max(1) as f64).sqrt();
                ta.iter()
                    .zip(tb)
                    .map(|(x, y)| 0.5 * (x + y) + shift * (x - y) / gap)
                    .collect()
            }
        };
        let noise = spec.target.noise();
        let oracle = PopulationOracle::new(covariance.clone(), t0.clone(), noise.variance())?;
        Ok(Problem {
            spec: spec.clone(),
            triplet: Triplet {
                class,
                covariates: spec.family,
                covariance,
                t0,
                noise,
            },
            oracle,
            root,
            inv_root_t,
        })
    }

    pub fn class(&self) -> &FunctionClass {
        &self.triplet.class
    }

    /// Coefficients of `<X, t>` with `||<X, t>||_{L2} = 1` along standard axis `i`.
    pub fn unit_axis(&self, i: usize) -> Vec<f64> {
        self.inv_root_t.column(i).iter().copied().collect()
    }

    fn draw_standard(&self, rng: &mut StreamRng, z: &mut [f64]) {
        match self.triplet.covariates {
            CovariateFamily::Gaussian => {
                for v in z.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
            }
            CovariateFamily::Rademacher => {
                for v in z.iter_mut() {
                    *v = if rng.random::<bool>() { 1.0 } else { -1.0 };
                }
            }
            CovariateFamily::StudentT { df } => {
                for v in z.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
                let chi = ChiSquared::new(df).expect("validated df");
                let w: f64 = chi.sample(rng);
                let factor = ((df - 2.0) / w).sqrt();
                for v in z.iter_mut() {
                    *v *= factor;
                }
            }
        }
    }

    fn draw_noise(&self, rng: &mut StreamRng) -> f64 {
        match self.triplet.noise {
            NoiseFamily::None => 0.0,
            NoiseFamily::Gaussian { sigma } => sigma * rng.sample::<f64, _>(StandardNormal),
            NoiseFamily::StudentT { df, scale } => {
                scale * StudentT::new(df).expect("validated df").sample(rng)
            }
        }
    }

    /// `4 * segment_len` points, each segment from its own stream.
    pub fn draw_sample(
        &self,
        segment_len: usize,
        seed: u64,
    ) -> Result<LabeledSample, DatagenError> {
        let d = self.spec.dim;
        let n = 4 * segment_len;
        let mut covariates = vec![0.0; n * d];
        let mut responses = vec![0.0; n];
        for k in 0..4 {
            let mut rng = stream(seed, "segment", k as u64);
            for i in k * segment_len..(k + 1) * segment_len {
                responses[i] = self.draw(&mut rng, &mut covariates[i * d..(i + 1) * d]);
            }
        }
        Ok(LabeledSample::new(d, covariates, responses, segment_len)?)
    }
}

impl JointSampler for Problem {
    fn dim(&self) -> usize {
        self.spec.dim
    }

    fn draw(&self, rng: &mut StreamRng, x: &mut [f64]) -> f64 {
        self.draw_standard(rng, x);
        self.root.apply(x);
        let signal: f64 = x.iter().zip(&self.triplet.t0).map(|(a, b)| a * b).sum();
        signal + self.draw_noise(rng)
    }
}

/// Resolves `spec` and draws one `4N`-point sample from its seed.
pub fn generate(
    spec: &ScenarioSpec,
    segment_len: usize,
) -> Result<(Triplet, LabeledSample, PopulationOracle), DatagenError> {
    let problem = Problem::new(spec, segment_len)?;
    let sample = problem.draw_sample(segment_len, child_seed(spec.seed, "sample", 0))?;
    Ok((problem.triplet, sample, problem.oracle))
}

/// Tabulates a linear class clipped to `[-bound, bound]` on every sample
/// point and clips the responses to match.
pub fn bounded_view(
    class: &FunctionClass,
    sample: &LabeledSample,
    bound: f64,
) -> Result<(FunctionClass, LabeledSample), DatagenError> {
    let members = class
        .members()
        .iter()
        .map(|h| {
            let values = (0..sample.len())
                .map(|i| {
                    h.evaluate(sample.covariate(i))
                        .map(|v| v.clamp(-bound, bound))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            Ok(Hypothesis {
                id: h.id,
                kind: crate::model::HypothesisKind::Tabulated(values),
            })
        })
        .collect::<Result<Vec<_>, DatagenError>>()?;
    Ok((FunctionClass::new(members)?, sample.clip_responses(bound)))
}
