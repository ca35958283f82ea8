//! Pipeline configuration file.
//!
//! The file is TOML: top-level `seed`, `image_size` and `mix`, plus the
//! sections `[stg]`, `[mask]`, `[wavelet]`, `[ffg]` and `[train]`. Every key
//! is optional and unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detector::TrainConfig;
use crate::error::{Error, Result};
use crate::ffg::FfgConfig;
use crate::sbi::{MaskConfig, StgConfig};
use crate::wavelet::WaveletSpec;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "FSBI_CONFIG";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Side length detector inputs are resized to.
    pub image_size: usize,
    /// Fraction of generated fakes that also pass through the frequency
    /// feature generator.
    pub mix: f64,
    pub stg: StgConfig,
    pub mask: MaskConfig,
    pub wavelet: WaveletSpec,
    pub ffg: FfgSection,
    pub train: TrainSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FfgSection {
    pub normalize_dc: bool,
    /// Pass real images through the frequency feature generator as well.
    pub apply_to_real: bool,
}

impl Default for FfgSection {
    fn default() -> Self {
        FfgSection {
            normalize_dc: true,
            apply_to_real: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for TrainSection {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainSection {
            learning_rate: t.learning_rate,
            epochs: t.epochs,
            l2: t.l2,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            image_size: 380,
            mix: 1.0,
            stg: StgConfig::default(),
            mask: MaskConfig::default(),
            wavelet: WaveletSpec::default(),
            ffg: FfgSection::default(),
            train: TrainSection::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.image_size == 0 {
            return Err(Error::InvalidConfig("image_size must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.mix) {
            return Err(Error::InvalidConfig(format!(
                "mix must lie in [0, 1], got {}",
                self.mix
            )));
        }
        self.stg.validate()?;
        self.mask.validate()?;
        self.train_config().validate()
    }

    pub fn ffg_config(&self) -> FfgConfig {
        FfgConfig {
            wavelet: self.wavelet,
            normalize_dc: self.ffg.normalize_dc,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            learning_rate: self.train.learning_rate,
            epochs: self.train.epochs,
            l2: self.train.l2,
            seed: self.seed,
        }
    }
}
