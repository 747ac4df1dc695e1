use std::fmt;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::datagen::ScenarioSpec;
use crate::tournament::ParamOverrides;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Procedure {
    Tournament,
    TournamentBoundedP1,
    Erm,
    MidpointOracle,
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Procedure::Tournament => "tournament",
            Procedure::TournamentBoundedP1 => "tournament-bounded-p1",
            Procedure::Erm => "erm",
            Procedure::MidpointOracle => "midpoint-oracle",
        })
    }
}

/// Points per segment, given explicitly or derived from the scenario (`"auto"`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSize {
    Explicit(usize),
    Auto,
}

impl Serialize for SampleSize {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SampleSize::Explicit(n) => s.serialize_u64(*n as u64),
            SampleSize::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for SampleSize {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(usize),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(n) => Ok(SampleSize::Explicit(n)),
            Raw::Word(w) if w == "auto" => Ok(SampleSize::Auto),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "n_samples must be a count or \"auto\", got {w:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoMode {
    /// `c (sigma^2/eps + 1)(ln m + ln(2/delta))` for the class and its closure.
    #[default]
    WorstCase,
    /// Monte Carlo fixed points plus `c2 (L_T^2 sigma^2/eps + 1) ln(64/delta)`.
    Estimated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AutoConstants {
    pub mode: AutoMode,
    /// Worst-case multiplier `c`.
    pub c_worst: f64,
    /// Multiplier `c2` on the confidence term in estimated mode.
    pub c2: f64,
    /// Fixed-point level `kappa` in estimated mode.
    pub kappa_level: f64,
    pub trials: usize,
    pub n_max: usize,
    pub interaction_draws: usize,
}

impl Default for AutoConstants {
    fn default() -> Self {
        AutoConstants {
            mode: AutoMode::WorstCase,
            c_worst: 20.0,
            c2: 4.0,
            kappa_level: 0.2,
            trials: 200,
            n_max: 1 << 20,
            interaction_draws: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KappaSettings {
    /// Level of `kappa1 = max(kappa(xi), 1)`.
    pub xi: f64,
    pub draws: usize,
}

impl Default for KappaSettings {
    fn default() -> Self {
        KappaSettings {
            xi: 0.1,
            draws: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSpec,
    pub epsilon: f64,
    pub delta: f64,
    pub n_samples: SampleSize,
    pub trials: usize,
    pub procedures: Vec<Procedure>,
    #[serde(default)]
    pub overrides: ParamOverrides,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub auto: AutoConstants,
    #[serde(default)]
    pub kappa: KappaSettings,
    /// Record wall times; off by default so repeated runs are byte-identical.
    #[serde(default)]
    pub timing: bool,
    /// Monte Carlo draws for the risk table of clipped scenarios.
    #[serde(default = "default_reference_draws")]
    pub reference_draws: usize,
}

fn default_reference_draws() -> usize {
    200_000
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::InvalidConfig(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if self.procedures.is_empty() {
            return bad("at least one procedure is required".into());
        }
        if let SampleSize::Explicit(0) = self.n_samples {
            return bad("n_samples must be positive".into());
        }
        if self.scenario.clip.is_some() && self.procedures.contains(&Procedure::MidpointOracle) {
            return bad("midpoint-oracle needs an unclipped linear scenario".into());
        }
        self.scenario.validate()?;
        Ok(())
    }
}
