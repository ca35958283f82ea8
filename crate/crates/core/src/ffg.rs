//! Frequency feature generation.
//!
//! Each RGB channel is decomposed with a single-level 2D DWT; its
//! approximation subband is resized back to the channel's shape and averaged
//! with the channel itself. The three fused channels form the FSBI image.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{clip01, resize_bilinear};
use crate::raster::{Image, Plane};
use crate::wavelet::{dwt2d, WaveletSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FfgConfig {
    pub wavelet: WaveletSpec,
    /// Divide LL by `sum(dec_lo)²` so constant planes are fixed points.
    pub normalize_dc: bool,
}

impl Default for FfgConfig {
    fn default() -> Self {
        FfgConfig {
            wavelet: WaveletSpec::default(),
            normalize_dc: true,
        }
    }
}

/// Resized (and optionally DC-normalized) approximation subband of `plane`.
/// Values are not clipped.
///
/// The plane is transformed about its mid-range level, which is added back
/// with the DC gain `sum(dec_lo)²` (or unscaled under `normalize_dc`). Outside
/// Zero mode this equals the plain transform; in Zero mode it pads with the
/// level instead of 0. Constant planes map exactly to the constant under
/// `normalize_dc` in every mode.
pub fn channel_frequency_map(plane: &Plane, cfg: &FfgConfig) -> Result<Plane> {
    let bank = cfg.wavelet.filter_bank();
    let mode = cfg.wavelet.mode();
    let level = (plane.min() + plane.max()) / 2.0;
    let centred = plane.map(|v| v - level);
    let ll = dwt2d(&centred, &bank, mode)?.into_ll();
    let gain = bank.dc_gain() * bank.dc_gain();
    let (scale, offset) = if cfg.normalize_dc {
        (1.0 / gain, level)
    } else {
        (1.0, level * gain)
    };
    let resized = resize_bilinear(&ll, plane.height(), plane.width())?;
    Ok(resized.map(|v| v * scale + offset))
}

/// `(plane + freq_map) / 2`, clipped into `[0, 1]`.
pub fn fuse_channel(plane: &Plane, freq_map: &Plane) -> Result<Plane> {
    plane.ensure_same_shape(freq_map)?;
    let data = plane
        .data()
        .iter()
        .zip(freq_map.data())
        .map(|(&p, &f)| if p == f { p } else { (p + f) / 2.0 })
        .collect();
    Ok(clip01(&Plane::new(plane.height(), plane.width(), data)?))
}

pub fn make_fsbi(image: &Image, cfg: &FfgConfig) -> Result<Image> {
    if image.channels() != 3 {
        return Err(Error::ChannelMismatch {
            expected: 3,
            actual: image.channels(),
        });
    }
    let fused = image
        .planes()
        .iter()
        .map(|p| fuse_channel(p, &channel_frequency_map(p, cfg)?))
        .collect::<Result<Vec<_>>>()?;
    Image::from_planes(&fused)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::ExtensionMode;

    fn haar(normalize_dc: bool) -> FfgConfig {
        FfgConfig {
            wavelet: WaveletSpec::parse("haar", ExtensionMode::Reflect).unwrap(),
            normalize_dc,
        }
    }

    #[test]
    fn constant_planes() {
        let c = Plane::filled(6, 9, 0.3).unwrap();
        let norm = channel_frequency_map(&c, &haar(true)).unwrap();
        assert!(norm.data().iter().all(|v| (v - 0.3).abs() < 1e-15));
        let raw = channel_frequency_map(&c, &haar(false)).unwrap();
        assert!(raw.data().iter().all(|v| (v - 0.6).abs() < 1e-15));
        assert_eq!(norm.shape(), (6, 9));
    }

    #[test]
    fn fusion_rules() {
        let zeros = Plane::filled(2, 2, 0.0).unwrap();
        let ones = Plane::filled(2, 2, 1.0).unwrap();
        let threes = Plane::filled(2, 2, 3.0).unwrap();
        assert_eq!(fuse_channel(&zeros, &ones).unwrap().data(), [0.5; 4]);
        assert_eq!(fuse_channel(&ones, &threes).unwrap(), ones);
        assert_eq!(fuse_channel(&ones, &ones).unwrap(), ones);
        let wide = Plane::filled(2, 3, 0.0).unwrap();
        assert!(matches!(
            fuse_channel(&zeros, &wide),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn constant_image_is_fixed_point() {
        let img = Image::filled(11, 7, &[0.1, 0.5, 0.9]).unwrap();
        for spec in WaveletSpec::all(ExtensionMode::Reflect) {
            let cfg = FfgConfig {
                wavelet: spec,
                normalize_dc: true,
            };
            assert_eq!(make_fsbi(&img, &cfg).unwrap(), img, "{spec}");
        }
    }

    #[test]
    fn grayscale_rejected() {
        let g = Image::new(4, 4, 1, vec![0.2; 16]).unwrap();
        assert!(matches!(
            make_fsbi(&g, &FfgConfig::default()),
            Err(Error::ChannelMismatch { .. })
        ));
    }

    #[test]
    fn checkerboard_changes_more_than_constant() {
        let board = Plane::from_fn(16, 16, |y, x| ((x + y) % 2) as f64).unwrap();
        let flat = Plane::filled(16, 16, 0.5).unwrap();
        let cfg = FfgConfig::default();
        let change = |p: &Plane| {
            let fused = fuse_channel(p, &channel_frequency_map(p, &cfg).unwrap()).unwrap();
            fused
                .data()
                .iter()
                .zip(p.data())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / 256.0
        };
        assert_eq!(change(&flat), 0.0);
        assert!(change(&board) > 0.1);
    }
}
