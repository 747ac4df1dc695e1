use serde::{Deserialize, Serialize};

use super::DatagenError;
use crate::model::{CovariateFamily, NoiseFamily};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceSpec {
    #[default]
    Identity,
    Diagonal(Vec<f64>),
    /// Full matrix, row by row; must be symmetric positive definite.
    Matrix(Vec<Vec<f64>>),
}

/// Placement of the dictionary `t_1, ..., t_m`. Distances are in the
/// covariance norm `||<X, t>||_{L2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    /// Mutually orthogonal, each at norm `scale`; needs `m <= dim`.
    Orthogonal { m: usize, scale: f64 },
    /// Independent uniform points on the sphere of radius `scale`.
    RandomSphere { m: usize, scale: f64 },
    /// A random centre of norm `scale` plus independent offsets of norm `spread`.
    Clustered { m: usize, spread: f64, scale: f64 },
    /// Two points at distance `gap`, symmetric about the origin.
    TwoPoint { gap: f64 },
    /// Coefficients given verbatim.
    Explicit { members: Vec<Vec<f64>> },
}

impl Geometry {
    pub fn size(&self) -> usize {
        match self {
            Geometry::Orthogonal { m, .. }
            | Geometry::RandomSphere { m, .. }
            | Geometry::Clustered { m, .. } => *m,
            Geometry::TwoPoint { .. } => 2,
            Geometry::Explicit { members } => members.len(),
        }
    }
}

/// Location of the true coefficient `t0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetPoint {
    Member(usize),
    Explicit(Vec<f64>),
    /// Uniform on the sphere of the given norm.
    Random {
        scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    /// `Y = <X, t_member>` without noise.
    Realizable { member: usize },
    /// `Y = <X, t0> + W`.
    Additive { t0: TargetPoint, noise: NoiseFamily },
    /// `t0 = (t_a + t_b)/2 + (bias_scale / sqrt(N)) u`, with `u` the unit
    /// direction from `t_b` to `t_a`, so `t_a` is the best member and the
    /// midpoint beats both.
    TiltedMidpoint {
        members: [usize; 2],
        bias_scale: f64,
        noise: NoiseFamily,
    },
}

impl TargetSpec {
    pub fn noise(&self) -> NoiseFamily {
        match self {
            TargetSpec::Realizable { .. } => NoiseFamily::None,
            TargetSpec::Additive { noise, .. } | TargetSpec::TiltedMidpoint { noise, .. } => *noise,
        }
    }
}

fn default_family() -> CovariateFamily {
    CovariateFamily::Gaussian
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub dim: usize,
    #[serde(default = "default_family")]
    pub family: CovariateFamily,
    #[serde(default)]
    pub covariance: CovarianceSpec,
    pub geometry: Geometry,
    pub target: TargetSpec,
    /// Seeds the dictionary and any random target point.
    #[serde(default)]
    pub seed: u64,
    /// Clip hypotheses and responses to `[-clip, clip]`.
    #[serde(default)]
    pub clip: Option<f64>,
}

fn invalid(msg: impl Into<String>) -> DatagenError {
    DatagenError::InvalidSpec(msg.into())
}

fn check_positive(name: &str, v: f64) -> Result<(), DatagenError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

fn check_noise(noise: &NoiseFamily) -> Result<(), DatagenError> {
    match *noise {
        NoiseFamily::None => Ok(()),
        NoiseFamily::Gaussian { sigma } => {
            if sigma.is_finite() && sigma >= 0.0 {
                Ok(())
            } else {
                Err(invalid(format!(
                    "noise sigma must be non-negative, got {sigma}"
                )))
            }
        }
        NoiseFamily::StudentT { df, scale } => {
            if !(df > 2.0 && df.is_finite()) {
                return Err(invalid(format!("Student-t noise needs df > 2, got {df}")));
            }
            check_positive("noise scale", scale)
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), DatagenError> {
        if self.dim == 0 {
            return Err(invalid("dim must be positive"));
        }
        if let CovariateFamily::StudentT { df } = self.family {
            if !(df > 2.0 && df.is_finite()) {
                return Err(invalid(format!(
                    "Student-t covariates need df > 2, got {df}"
                )));
            }
        }
        match &self.covariance {
            CovarianceSpec::Identity => {}
            CovarianceSpec::Diagonal(v) => {
                if v.len() != self.dim {
                    return Err(invalid("diagonal covariance has the wrong length"));
                }
                for x in v {
                    check_positive("covariance diagonal entry", *x)?;
                }
            }
            CovarianceSpec::Matrix(rows) => {
                if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                    return Err(invalid("covariance matrix has the wrong shape"));
                }
            }
        }
        let m = self.geometry.size();
        if m == 0 {
            return Err(invalid("dictionary must have at least one member"));
        }
        match &self.geometry {
            Geometry::Orthogonal { m, scale } => {
                check_positive("scale", *scale)?;
                if *m > self.dim {
                    return Err(invalid(format!(
                        "orthogonal dictionary of {m} members needs dim >= {m}"
                    )));
                }
            }
            Geometry::RandomSphere { scale, .. } => check_positive("scale", *scale)?,
            Geometry::Clustered { spread, scale, .. } => {
                check_positive("spread", *spread)?;
                if !(scale.is_finite() && *scale >= 0.0) {
                    return Err(invalid("scale must be non-negative"));
                }
            }
            Geometry::TwoPoint { gap } => check_positive("gap", *gap)?,
            Geometry::Explicit { members } => {
                if members.iter().any(|t| t.len() != self.dim) {
                    return Err(invalid("explicit member has the wrong dimension"));
                }
            }
        }
        match &self.target {
            TargetSpec::Realizable { member } => {
                if *member >= m {
                    return Err(invalid(format!("target member {member} out of range")));
                }
            }
            TargetSpec::Additive { t0, noise } => {
                check_noise(noise)?;
                match t0 {
                    TargetPoint::Member(i) if *i >= m => {
                        return Err(invalid(format!("target member {i} out of range")))
                    }
                    TargetPoint::Explicit(v) if v.len() != self.dim => {
                        return Err(invalid("explicit t0 has the wrong dimension"))
                    }
                    TargetPoint::Random { scale } if !(scale.is_finite() && *scale >= 0.0) => {
                        return Err(invalid("random t0 scale must be non-negative"))
                    }
                    _ => {}
                }
            }
            TargetSpec::TiltedMidpoint {
                members,
                bias_scale,
                noise,
            } => {
                check_noise(noise)?;
                if members[0] >= m || members[1] >= m || members[0] == members[1] {
                    return Err(invalid("tilted midpoint needs two distinct members"));
                }
                if !(bias_scale.is_finite() && *bias_scale >= 0.0) {
                    return Err(invalid("bias_scale must be non-negative"));
                }
            }
        }
        if let Some(c) = self.clip {
            check_positive("clip", c)?;
        }
        Ok(())
    }
}
