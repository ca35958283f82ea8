//! Self-blended image synthesis, wavelet frequency fusion and a small
//! detector with video-level evaluation.

pub mod config;
pub mod detector;
pub mod error;
pub mod ffg;
pub mod imaging;
pub mod inference;
pub mod manifest;
pub mod raster;
pub mod rng;
pub mod sbi;
pub mod synth;
pub mod wavelet;

pub use config::Config;
pub use detector::{Model, TrainConfig};
pub use error::{Error, Result};
pub use ffg::FfgConfig;
pub use inference::{PredictionRecord, VideoScore};
pub use manifest::{Manifest, ManifestEntry};
pub use raster::{Image, Mask, Plane};
pub use rng::SeededRng;
pub use sbi::{Landmarks, MaskConfig, StgConfig};
pub use wavelet::{ExtensionMode, FilterBank, Subbands, WaveletSpec};
