//! Run configuration: JSON file plus CLI-flag overrides, flags winning.
//!
//! Every key is optional and defaults to the studied transformer, the
//! standard aging constants, paper-mode initialization, one-hour
//! intervals, and an 8760-hour horizon. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aging::AgingConstants;
use crate::error::{Error, Result};
use crate::scenario::{ClimateSpec, LoadSpec, OverloadSpec};
use crate::thermal::{InitMode, TransformerCharacteristics};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_HORIZON_HOURS: usize = 8760;

/// Convergence-detection settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorConfig {
    /// Relative-change tolerance.
    pub tolerance: f64,
    /// Consecutive below-tolerance steps required.
    pub window: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            tolerance: crate::estimator::DEFAULT_TOLERANCE,
            window: crate::estimator::DEFAULT_WINDOW,
        }
    }
}

/// Full configuration of a synthesis or estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub transformer: TransformerCharacteristics,
    pub aging: AgingConstants,
    pub estimator: EstimatorConfig,
    /// Thermal initialization mode for scenario inputs.
    pub mode: InitMode,
    /// Interval length Δt in hours for sensor streams.
    pub interval_hours: f64,
    /// Scenario length in hours for synthesis.
    pub horizon_hours: usize,
    /// Master seed; per-generator seeds derive from it unless an
    /// explicit generator spec below carries its own.
    pub seed: u64,
    /// Scenario label carried into reports ("mild", "warm",
    /// "warm_overload").
    pub case: Option<String>,
    /// Explicit climate spec; when absent, derived from the case and seed.
    pub climate: Option<ClimateSpec>,
    pub load: Option<LoadSpec>,
    pub overload: Option<OverloadSpec>,
    pub stop_at_convergence: bool,
    /// Input CSV (the `--input` flag overrides).
    pub input: Option<PathBuf>,
    /// Output directory (the `--out` flag overrides).
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            transformer: TransformerCharacteristics::default(),
            aging: AgingConstants::default(),
            estimator: EstimatorConfig::default(),
            mode: InitMode::Paper,
            interval_hours: 1.0,
            horizon_hours: DEFAULT_HORIZON_HOURS,
            seed: DEFAULT_SEED,
            case: None,
            climate: None,
            load: None,
            overload: None,
            stop_at_convergence: false,
            input: None,
            out_dir: None,
        }
    }
}

impl RunConfig {
    /// Load a config file, rejecting unknown keys and invalid values.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let reason = match Self::from_json_str(&text) {
            Ok(config) => return Ok(config),
            Err(Error::Usage(msg)) | Err(Error::Domain(msg)) => msg,
            Err(other) => other.to_string(),
        };
        Err(Error::Config {
            path: path.display().to_string(),
            reason,
        })
    }

    /// Parse and validate a config from a JSON document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::usage(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Check every component invariant.
    pub fn validate(&self) -> Result<()> {
        self.transformer.validate()?;
        self.aging.validate()?;
        if !(self.estimator.tolerance > 0.0) {
            return Err(Error::domain(format!(
                "estimator.tolerance must be > 0, got {}",
                self.estimator.tolerance
            )));
        }
        if self.estimator.window < 1 {
            return Err(Error::domain("estimator.window must be >= 1".to_string()));
        }
        if !(self.interval_hours > 0.0) {
            return Err(Error::domain(format!(
                "interval_hours must be > 0, got {}",
                self.interval_hours
            )));
        }
        if self.horizon_hours < 1 {
            return Err(Error::domain("horizon_hours must be >= 1".to_string()));
        }
        if let Some(climate) = &self.climate {
            climate.validate()?;
        }
        if let Some(load) = &self.load {
            load.validate()?;
        }
        if let Some(overload) = &self.overload {
            overload.validate()?;
        }
        Ok(())
    }

    /// The climate generator for a case: the explicit spec when given,
    /// otherwise the case default seeded from the master seed.
    pub fn climate_for_case(&self, case: ScenarioCase) -> ClimateSpec {
        self.climate.unwrap_or_else(|| match case {
            ScenarioCase::Mild => ClimateSpec::mild(self.seed),
            ScenarioCase::Warm | ScenarioCase::WarmOverload => ClimateSpec::warm(self.seed),
        })
    }

    /// The load generator: explicit spec or default seeded with master+1.
    pub fn load_spec(&self) -> LoadSpec {
        self.load
            .unwrap_or_else(|| LoadSpec::new(self.seed.wrapping_add(1)))
    }

    /// The overload generator for case 3: explicit spec or default seeded
    /// with master+2.
    pub fn overload_spec(&self) -> OverloadSpec {
        self.overload
            .unwrap_or_else(|| OverloadSpec::new(self.seed.wrapping_add(2)))
    }
}

/// The three studied scenario cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioCase {
    /// Case 1: mild climate.
    Mild,
    /// Case 2: warm climate.
    Warm,
    /// Case 3: warm climate with overloading.
    WarmOverload,
}

impl ScenarioCase {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(ScenarioCase::Mild),
            2 => Ok(ScenarioCase::Warm),
            3 => Ok(ScenarioCase::WarmOverload),
            other => Err(Error::usage(format!(
                "case must be 1, 2, or 3, got {other}"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ScenarioCase::Mild => "mild",
            ScenarioCase::Warm => "warm",
            ScenarioCase::WarmOverload => "warm_overload",
        }
    }

    /// Rank in the expected lifetime ordering (mild outlives warm
    /// outlives warm+overload).
    pub fn rank(label: &str) -> Option<usize> {
        match label {
            "mild" => Some(0),
            "warm" => Some(1),
            "warm_overload" => Some(2),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;
    use tempfile::TempDir;

    #[test]
    fn defaults_pass_validation() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("cfg.json");
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(br#"{"seed": 7, "not_a_key": 1}"#).unwrap();
        match RunConfig::from_file(&path).unwrap_err() {
            Error::Config { reason, .. } => assert!(reason.contains("not_a_key")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn partial_config_fills_defaults() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"seed": 7, "estimator": {"tolerance": 2e-4}}"#).unwrap();
        let config = RunConfig::from_file(&path).unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.estimator.tolerance, 2e-4);
        assert_eq!(config.estimator.window, 24);
        assert_eq!(config.transformer.loss_ratio, 7.43);
    }

    #[test]
    fn invalid_values_are_rejected_with_key_context() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"aging": {"aging_rate": 9000.0}}"#).unwrap();
        match RunConfig::from_file(&path).unwrap_err() {
            Error::Config { reason, .. } => assert!(reason.contains("aging_rate")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn derived_seeds_are_stable() {
        let config = RunConfig {
            seed: 100,
            ..RunConfig::default()
        };
        assert_eq!(config.climate_for_case(ScenarioCase::Mild).seed, 100);
        assert_eq!(config.load_spec().seed, 101);
        assert_eq!(config.overload_spec().seed, 102);
    }

    #[test]
    fn case_labels_and_ranks() {
        assert_eq!(ScenarioCase::from_number(1).unwrap().label(), "mild");
        assert_eq!(ScenarioCase::rank("warm"), Some(1));
        assert_eq!(ScenarioCase::rank("unknown"), None);
        assert!(ScenarioCase::from_number(4).is_err());
    }
}
