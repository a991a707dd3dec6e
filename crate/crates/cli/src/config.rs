//! Flag, config-file and default resolution.

use std::path::Path;

use clap::ValueEnum;
use quolab_core::graphlim::CutNormalization;
use quolab_core::profiles::{exact_strategy_for, EnumStrategy, ProfileMode};
use quolab_core::setfn::SetFunctionOracle;
use quolab_core::Limits;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult, ProfileArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    /// Exact when under the caps, else flats-only where valid.
    Auto,
    Exact,
    Sampled,
    FlatsOnly,
}

/// Everything a `--config` TOML file may set.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub k: Option<usize>,
    pub mode: Option<ProfileMode>,
    pub strategy: Option<StrategyName>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub norm: Option<CutNormalization>,
    pub format: Option<Format>,
    pub t_max: Option<usize>,
    pub trials: Option<usize>,
    pub limits: Option<Limits>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Resolved settings, echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub k: usize,
    pub mode: ProfileMode,
    pub strategy: StrategyName,
    pub seed: Option<u64>,
    pub samples: usize,
    pub norm: CutNormalization,
    pub format: Format,
    pub t_max: usize,
    pub trials: usize,
    pub limits: Limits,
}

impl Settings {
    pub const DEFAULT_SAMPLES: usize = 1000;

    pub fn resolve(file: &ConfigFile, profile: &ProfileArgs, format: Option<Format>) -> Settings {
        Settings {
            k: profile.k.or(file.k).unwrap_or(2),
            mode: profile.mode.or(file.mode).unwrap_or(ProfileMode::Q),
            strategy: profile.strategy.or(file.strategy).unwrap_or(StrategyName::Auto),
            seed: profile.seed.or(file.seed),
            samples: profile.samples.or(file.samples).unwrap_or(Self::DEFAULT_SAMPLES),
            norm: file.norm.unwrap_or(CutNormalization::Edges),
            format: format.or(file.format).unwrap_or(Format::Json),
            t_max: file.t_max.unwrap_or(2),
            trials: file.trials.unwrap_or(64),
            limits: file.limits.clone().unwrap_or_default(),
        }
    }

    /// The enumeration strategy for one oracle.
    pub fn strategy_for(&self, oracle: &SetFunctionOracle, k: usize, mode: ProfileMode) -> CliResult<EnumStrategy> {
        Ok(match self.strategy {
            StrategyName::Auto => exact_strategy_for(oracle, k, mode, &self.limits)?,
            StrategyName::Exact => EnumStrategy::Exact,
            StrategyName::FlatsOnly => EnumStrategy::FlatsOnly,
            StrategyName::Sampled => EnumStrategy::Sampled {
                seed: self.require_seed("the sampled strategy")?,
                samples: self.samples,
            },
        })
    }

    pub fn require_seed(&self, what: &str) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::Usage(format!("{what} needs an explicit --seed")))
    }
}
