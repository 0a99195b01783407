//! TOML run configuration. Every section and key is optional; missing keys
//! take the defaults below, unknown keys are rejected.
//!
//! ```toml
//! [sweep]
//! ensemble = { kind = "translation-invariant", range = 3, scale = 1.0 }
//! n = 100
//! seed_start = 1
//! seed_count = 10
//! a = [20, 29]
//! b = [33, 53]
//! t_min = 0.1
//! t_max = 10.0
//! points = 21
//!
//! [adjacent]
//! n = 2048
//! lengths = [32, 64, 128, 256, 512]
//!
//! [distant]
//! n = 4096
//! l1 = 8
//! l2 = 8
//! d_min = 64
//! d_max = 512
//!
//! [oracle]
//! betas = [0.2, 1.0, 5.0]
//! tolerance = 1e-8
//! ```

use std::path::Path;

use chargeneg_core::harness::{temperature_grid, ScalingConfig, SweepConfig};
use chargeneg_core::model::make_partition;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::formats::EnsembleSpec;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub sweep: SweepSettings,
    pub adjacent: AdjacentSettings,
    pub distant: DistantSettings,
    pub oracle: OracleSettings,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub ensemble: EnsembleSpec,
    pub n: usize,
    pub seed_start: u64,
    pub seed_count: u64,
    /// Overrides `seed_start` / `seed_count` when present.
    pub seeds: Option<Vec<u64>>,
    /// Inclusive 0-based site ranges.
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub chemical_potential: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            ensemble: EnsembleSpec::TranslationInvariant { range: 3, scale: 1.0 },
            n: 100,
            seed_start: 1,
            seed_count: 10,
            seeds: None,
            a: [20, 29],
            b: [33, 53],
            t_min: 0.1,
            t_max: 10.0,
            points: 21,
            chemical_potential: 0.0,
        }
    }
}

impl SweepSettings {
    /// `seed` replaces `seed_start`.
    pub fn to_config(&self, seed: Option<u64>) -> CliResult<SweepConfig> {
        let seeds = match (&self.seeds, seed) {
            (Some(list), None) => list.clone(),
            _ => {
                let start = seed.unwrap_or(self.seed_start);
                (0..self.seed_count).map(|k| start.wrapping_add(k)).collect()
            }
        };
        let cfg = SweepConfig {
            ensemble: (&self.ensemble).into(),
            seeds,
            partition: make_partition(self.n, self.a[0], self.a[1], self.b[0], self.b[1]).map_err(config_error)?,
            temperatures: temperature_grid(self.t_min, self.t_max, self.points).map_err(config_error)?,
            chemical_potential: self.chemical_potential,
        };
        cfg.validate().map_err(config_error)?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdjacentSettings {
    pub n: usize,
    pub hopping: f64,
    pub filling: f64,
    pub lengths: Vec<usize>,
}

impl Default for AdjacentSettings {
    fn default() -> Self {
        AdjacentSettings {
            n: 2048,
            hopping: 1.0,
            filling: 0.5,
            lengths: vec![32, 64, 128, 256, 512],
        }
    }
}

impl AdjacentSettings {
    pub fn to_config(&self) -> ScalingConfig {
        ScalingConfig {
            n: self.n,
            hopping: self.hopping,
            filling: self.filling,
            l1: 1,
            l2: 1,
            lengths: self.lengths.clone(),
            separations: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistantSettings {
    pub n: usize,
    pub hopping: f64,
    pub filling: f64,
    pub l1: usize,
    pub l2: usize,
    /// Every integer separation in `d_min..=d_max` enters the fit.
    pub d_min: usize,
    pub d_max: usize,
}

impl Default for DistantSettings {
    fn default() -> Self {
        DistantSettings {
            n: 4096,
            hopping: 1.0,
            filling: 0.5,
            l1: 8,
            l2: 8,
            d_min: 64,
            d_max: 512,
        }
    }
}

impl DistantSettings {
    pub fn to_config(&self) -> CliResult<ScalingConfig> {
        if self.d_min > self.d_max {
            return Err(CliError::Config(format!(
                "d_min {} exceeds d_max {}",
                self.d_min, self.d_max
            )));
        }
        Ok(ScalingConfig {
            n: self.n,
            hopping: self.hopping,
            filling: self.filling,
            l1: self.l1,
            l2: self.l2,
            lengths: Vec::new(),
            separations: (self.d_min..=self.d_max).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSettings {
    /// Cycled over the seeds.
    pub betas: Vec<f64>,
    pub tolerance: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            betas: vec![0.2, 1.0, 5.0],
            tolerance: 1e-8,
        }
    }
}

fn config_error(e: chargeneg_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
