//! Wavelet-statistic features and a logistic-regression detector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{Image, Plane};
use crate::rng::SeededRng;
use crate::wavelet::{dwt2d, WaveletSpec};

/// 3 channels × 4 subbands × (mean |c|, std c).
pub const FEATURE_DIM: usize = 24;
pub const MODEL_FORMAT_VERSION: u32 = 1;
const STD_FLOOR: f64 = 1e-8;

/// Per channel, per subband (LL, LH, HL, HH): mean absolute coefficient and
/// population standard deviation.
pub fn extract_features(image: &Image, wavelet: &WaveletSpec) -> Result<Vec<f64>> {
    image.require_rgb()?;
    let bank = wavelet.filter_bank();
    let mut out = Vec::with_capacity(FEATURE_DIM);
    for plane in image.planes() {
        let bands = dwt2d(&plane, &bank, wavelet.mode())?;
        for band in bands.bands() {
            let (abs_mean, std) = band_stats(band);
            out.push(abs_mean);
            out.push(std);
        }
    }
    Ok(out)
}

fn band_stats(p: &Plane) -> (f64, f64) {
    let n = p.data().len() as f64;
    let mean = p.mean();
    let abs_mean = p.data().iter().map(|v| v.abs()).sum::<f64>() / n;
    let var = p.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (abs_mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub feature_mean: Vec<f64>,
    pub feature_std: Vec<f64>,
    pub wavelet: WaveletSpec,
    pub feature_dim: usize,
    pub format_version: u32,
}

impl Model {
    /// All-zero weights over identity normalization.
    pub fn zeros(dim: usize, wavelet: WaveletSpec) -> Self {
        Model {
            weights: vec![0.0; dim],
            bias: 0.0,
            feature_mean: vec![0.0; dim],
            feature_std: vec![1.0; dim],
            wavelet,
            feature_dim: dim,
            format_version: MODEL_FORMAT_VERSION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Schema(format!(
                "model format_version {} (expected {MODEL_FORMAT_VERSION})",
                self.format_version
            )));
        }
        for len in [
            self.weights.len(),
            self.feature_mean.len(),
            self.feature_std.len(),
        ] {
            if len != self.feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.feature_dim,
                    actual: len,
                });
            }
        }
        if self.feature_std.iter().any(|s| s.is_nan() || *s <= 0.0) {
            return Err(Error::Schema("feature_std must be positive".into()));
        }
        let finite = self
            .weights
            .iter()
            .chain(&self.feature_mean)
            .chain(&self.feature_std)
            .chain(std::iter::once(&self.bias))
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Schema("model contains non-finite values".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Model =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("model: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn normalize(&self, features: &[f64]) -> Result<Vec<f64>> {
        if features.len() != self.feature_dim {
            return Err(Error::DimensionMismatch {
                expected: self.feature_dim,
                actual: features.len(),
            });
        }
        Ok(features
            .iter()
            .zip(self.feature_mean.iter().zip(&self.feature_std))
            .map(|(x, (m, s))| (x - m) / s)
            .collect())
    }

    pub fn logit(&self, normalized: &[f64]) -> f64 {
        dot(&self.weights, normalized) + self.bias
    }

    /// Confidence for a raw (unnormalized) feature vector.
    pub fn predict_features(&self, features: &[f64]) -> Result<f64> {
        Ok(sigmoid(self.logit(&self.normalize(features)?)))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Logistic function, kept strictly inside `(0, 1)`.
pub fn sigmoid(z: f64) -> f64 {
    const EDGE: f64 = 1e-15;
    let p = if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    };
    p.clamp(EDGE, 1.0 - EDGE)
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn check_label(y: u8) -> Result<f64> {
    match y {
        0 | 1 => Ok(y as f64),
        other => Err(Error::Schema(format!("label {other} is not 0 or 1"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gradient {
    pub loss: f64,
    pub grad_w: Vec<f64>,
    pub grad_b: f64,
}

/// Mean binary cross-entropy of `σ(w·x + b)` plus `(l2/2)‖w‖²`, with its
/// exact gradient. Features are used as given (already normalized).
pub fn loss_and_grad(model: &Model, batch: &[(Vec<f64>, u8)], l2: f64) -> Result<Gradient> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let d = model.weights.len();
    let n = batch.len() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; d];
    let mut grad_b = 0.0;
    for (x, y) in batch {
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: x.len(),
            });
        }
        let y = check_label(*y)?;
        let z = model.logit(x);
        loss += softplus(z) - y * z;
        let p = if z >= 0.0 {
            1.0 / (1.0 + (-z).exp())
        } else {
            z.exp() / (1.0 + z.exp())
        };
        let r = p - y;
        for (g, xi) in grad_w.iter_mut().zip(x) {
            *g += r * xi;
        }
        grad_b += r;
    }
    let penalty = 0.5 * l2 * dot(&model.weights, &model.weights);
    for (g, w) in grad_w.iter_mut().zip(&model.weights) {
        *g = *g / n + l2 * w;
    }
    Ok(Gradient {
        loss: loss / n + penalty,
        grad_w,
        grad_b: grad_b / n,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 500,
            l2: 1e-4,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(
                "learning_rate must be positive".into(),
            ));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::InvalidConfig("l2 must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: Model,
    /// Training objective before each update, then after the last one.
    pub losses: Vec<f64>,
}

/// Full-batch gradient descent on z-scored features. Initial weights are
/// small seeded draws; the normalization statistics are frozen into the
/// model.
pub fn train(
    features: &[Vec<f64>],
    labels: &[u8],
    wavelet: WaveletSpec,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if features.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: features.len(),
            actual: labels.len(),
        });
    }
    if features.is_empty() {
        return Err(Error::EmptyBatch);
    }
    for &y in labels {
        check_label(y)?;
    }
    if !(labels.contains(&0) && labels.contains(&1)) {
        return Err(Error::SingleClassData);
    }
    let dim = features[0].len();
    if let Some(bad) = features.iter().find(|f| f.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }

    let n = features.len() as f64;
    let mut model = Model::zeros(dim, wavelet);
    for j in 0..dim {
        let mean = features.iter().map(|f| f[j]).sum::<f64>() / n;
        let var = features.iter().map(|f| (f[j] - mean).powi(2)).sum::<f64>() / n;
        model.feature_mean[j] = mean;
        model.feature_std[j] = var.sqrt().max(STD_FLOOR);
    }
    let batch = features
        .iter()
        .zip(labels)
        .map(|(f, &y)| Ok((model.normalize(f)?, y)))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = SeededRng::new(cfg.seed);
    for w in &mut model.weights {
        *w = rng.uniform(-0.01, 0.01);
    }
    let mut losses = Vec::with_capacity(cfg.epochs + 1);
    for _ in 0..cfg.epochs {
        let g = loss_and_grad(&model, &batch, cfg.l2)?;
        losses.push(g.loss);
        for (w, gw) in model.weights.iter_mut().zip(&g.grad_w) {
            *w -= cfg.learning_rate * gw;
        }
        model.bias -= cfg.learning_rate * g.grad_b;
    }
    losses.push(loss_and_grad(&model, &batch, cfg.l2)?.loss);
    Ok(TrainOutcome { model, losses })
}

/// Fakeness confidence of one face crop.
pub fn predict(model: &Model, image: &Image) -> Result<f64> {
    model.predict_features(&extract_features(image, &model.wavelet)?)
}
