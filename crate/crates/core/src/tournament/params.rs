use serde::{Deserialize, Serialize};

use super::TournamentError;

/// How the first stage of each round estimates pairwise distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceEstimator {
    /// The `ell`-th largest absolute difference.
    #[default]
    OrderStatistic,
    /// Empirical L2 distance, for classes and targets bounded by a constant.
    EmpiricalL2,
}

/// Which uniform-integrability level defines `kappa2`, given `xi2 = 1/kappa1^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaVariant {
    /// `kappa2 = kappa(xi2 / 4)`.
    #[default]
    XiOver4,
    /// `kappa2 = kappa(xi2^2 / 4)`.
    XiSquaredOver4,
}

impl KappaVariant {
    pub fn level(&self, kappa1: f64) -> f64 {
        let xi2 = 1.0 / (kappa1 * kappa1);
        match self {
            KappaVariant::XiOver4 => xi2 / 4.0,
            KappaVariant::XiSquaredOver4 => xi2 * xi2 / 4.0,
        }
    }
}

/// Optional replacements for the default constants.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamOverrides {
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub theta3: Option<f64>,
    pub theta4: Option<f64>,
    /// `ell = floor(N / (ell_divisor * kappa1^2))`, default 5.
    pub ell_divisor: Option<f64>,
    /// `r^2 = c0 * epsilon`, default 2/3.
    pub c0: Option<f64>,
    pub kappa_exponent_variant: Option<KappaVariant>,
    /// Fixes the block count directly instead of deriving it from `delta`.
    pub n_blocks: Option<usize>,
    pub kappa1: Option<f64>,
    pub kappa2: Option<f64>,
    pub distance: Option<DistanceEstimator>,
}

pub const DEFAULT_C0: f64 = 2.0 / 3.0;
pub const DEFAULT_ELL_DIVISOR: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentParams {
    pub epsilon: f64,
    pub delta: f64,
    /// Localization radius, `r^2 = c0 * epsilon`.
    pub r: f64,
    pub ell: usize,
    pub n_blocks: usize,
    /// Nominal block size `floor(N / n)`; the first `N mod n` blocks hold one more point.
    pub block_size: usize,
    /// Points per segment.
    pub n_points: usize,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub distance: DistanceEstimator,
}

fn positive(name: &str, value: f64) -> Result<f64, TournamentError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(TournamentError::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

impl TournamentParams {
    /// Default constants: `theta1 = 1`, `theta2 = kappa1^2`, `theta3 = 1/kappa1^2`,
    /// `theta4 = kappa1`, `ell = max(1, floor(N / (5 kappa1^2)))`, `r^2 = 2 epsilon / 3`.
    pub fn derive(
        epsilon: f64,
        delta: f64,
        kappa1: f64,
        kappa2: f64,
        n_points: usize,
        overrides: &ParamOverrides,
    ) -> Result<Self, TournamentError> {
        positive("epsilon", epsilon)?;
        if !(delta > 0.0 && delta < 1.0) {
            return Err(TournamentError::InvalidParameter(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        if n_points == 0 {
            return Err(TournamentError::InvalidParameter(
                "segment length must be positive".into(),
            ));
        }
        let kappa1 = positive("kappa1", overrides.kappa1.unwrap_or(kappa1))?;
        let kappa2 = positive("kappa2", overrides.kappa2.unwrap_or(kappa2))?;
        let theta1 = positive("theta1", overrides.theta1.unwrap_or(1.0))?;
        let theta2 = positive("theta2", overrides.theta2.unwrap_or(kappa1 * kappa1))?;
        let theta3 = positive(
            "theta3",
            overrides.theta3.unwrap_or(1.0 / (kappa1 * kappa1)),
        )?;
        let theta4 = positive("theta4", overrides.theta4.unwrap_or(kappa1))?;
        let c0 = positive("c0", overrides.c0.unwrap_or(DEFAULT_C0))?;
        let ell_divisor = positive(
            "ell_divisor",
            overrides.ell_divisor.unwrap_or(DEFAULT_ELL_DIVISOR),
        )?;

        let n_blocks = match overrides.n_blocks {
            Some(n) => n,
            None => (theta1 * (64.0 / delta).ln()).ceil() as usize,
        };
        if n_blocks == 0 || n_blocks > n_points {
            return Err(TournamentError::EmptyBlock { n_points, n_blocks });
        }
        let ell = ((n_points as f64 / (ell_divisor * kappa1 * kappa1)).floor() as usize)
            .clamp(1, n_points);

        Ok(TournamentParams {
            epsilon,
            delta,
            r: (c0 * epsilon).sqrt(),
            ell,
            n_blocks,
            block_size: n_points / n_blocks,
            n_points,
            theta1,
            theta2,
            theta3,
            theta4,
            kappa1,
            kappa2,
            distance: overrides.distance.unwrap_or_default(),
        })
    }

    pub fn rule(&self) -> MatchRule {
        MatchRule {
            theta2: self.theta2,
            theta3: self.theta3,
            theta4: self.theta4,
            r: self.r,
        }
    }
}

/// The per-block acceptance threshold of a home match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchRule {
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
    pub r: f64,
}

impl MatchRule {
    /// `-theta2 r^2` for close pairs, `-theta3 p1^2` for distant ones.
    pub fn threshold(&self, p1: f64) -> f64 {
        if p1 <= self.theta4 * self.r {
            -self.theta2 * self.r * self.r
        } else {
            -self.theta3 * p1 * p1
        }
    }

    pub fn passing_blocks(&self, b_values: &[f64], p1: f64) -> usize {
        let threshold = self.threshold(p1);
        b_values.iter().filter(|&&b| b >= threshold).count()
    }

    /// Strict majority: at least `floor(n/2) + 1` blocks pass.
    pub fn wins(&self, b_values: &[f64], p1: f64) -> bool {
        self.passing_blocks(b_values, p1) > b_values.len() / 2
    }
}
