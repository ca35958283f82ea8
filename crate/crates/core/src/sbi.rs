//! Self-blended image synthesis.
//!
//! A pristine face crop is turned into a pseudo-fake by blending a
//! perturbed copy of itself (the source) into the untouched original (the
//! target) through a soft mask derived from the facial landmarks:
//!
//! ```text
//! sbi = source ⊙ mask + target ⊙ (1 - mask)
//! ```
//!
//! Everything is driven by an explicit [`SeededRng`], so an (image,
//! landmarks, seed, config) tuple always produces the same bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{erode, gaussian_blur, hsv_to_rgb, resize_image, rgb_to_hsv, translate};
use crate::raster::{Image, Mask, Plane};
use crate::rng::SeededRng;

/// Magnitudes of the source-image perturbations. Colour shifts are additive
/// in `[0, 1]` units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StgConfig {
    pub rgb_shift_max: f64,
    /// Maximum (hue, saturation, value) shifts.
    pub hsv_shift_max: [f64; 3],
    pub brightness_delta_max: f64,
    pub contrast_range: [f64; 2],
    pub downsample_factors: Vec<usize>,
    /// Maximum translation as a fraction of width / height.
    pub translate_max_frac: f64,
    /// Probability that each transform fires.
    pub p_each: f64,
    /// Apply one randomly chosen transform when none fired.
    pub force_one: bool,
}

impl Default for StgConfig {
    fn default() -> Self {
        StgConfig {
            rgb_shift_max: 20.0 / 255.0,
            hsv_shift_max: [0.05, 0.10, 0.10],
            brightness_delta_max: 0.10,
            contrast_range: [0.85, 1.15],
            downsample_factors: vec![2, 4],
            translate_max_frac: 0.03,
            p_each: 0.5,
            force_one: true,
        }
    }
}

impl StgConfig {
    /// No transform ever fires; the source equals the target.
    pub fn identity() -> Self {
        StgConfig {
            p_each: 0.0,
            force_one: false,
            ..StgConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(format!("stg: {msg}")));
        let ranges = [
            self.rgb_shift_max,
            self.brightness_delta_max,
            self.translate_max_frac,
        ];
        if ranges
            .iter()
            .chain(&self.hsv_shift_max)
            .any(|v| !(v.is_finite() && *v >= 0.0))
        {
            return bad("shift magnitudes must be finite and nonnegative");
        }
        let [lo, hi] = self.contrast_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return bad("contrast_range must be positive and ordered");
        }
        if self.downsample_factors.is_empty() || self.downsample_factors.contains(&0) {
            return bad("downsample_factors must be nonempty and positive");
        }
        if !(0.0..=1.0).contains(&self.p_each) {
            return bad("p_each must lie in [0, 1]");
        }
        if self.translate_max_frac >= 1.0 {
            return bad("translate_max_frac must be below 1");
        }
        Ok(())
    }
}

/// Mask generator parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaskConfig {
    pub elastic_alpha: f64,
    pub elastic_sigma: f64,
    pub blur1_sigma: f64,
    pub blur2_sigma: f64,
    pub erode_radius: usize,
    pub blend_ratio_choices: Vec<f64>,
}

impl Default for MaskConfig {
    fn default() -> Self {
        MaskConfig {
            elastic_alpha: 50.0,
            elastic_sigma: 7.0,
            blur1_sigma: 5.0,
            blur2_sigma: 3.0,
            erode_radius: 4,
            blend_ratio_choices: vec![0.25, 0.5, 0.75, 1.0],
        }
    }
}

impl MaskConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(format!("mask: {msg}")));
        if !(self.elastic_alpha >= 0.0 && self.elastic_alpha.is_finite()) {
            return bad("elastic_alpha must be finite and nonnegative");
        }
        for s in [self.elastic_sigma, self.blur1_sigma, self.blur2_sigma] {
            if !(s > 0.0 && s.is_finite()) {
                return bad("sigmas must be positive");
            }
        }
        if self.erode_radius == 0 {
            return bad("erode_radius must be at least 1");
        }
        if self.blend_ratio_choices.is_empty()
            || self
                .blend_ratio_choices
                .iter()
                .any(|r| !(*r > 0.0 && *r <= 1.0))
        {
            return bad("blend ratios must lie in (0, 1]");
        }
        Ok(())
    }
}

/// Ordered facial points in pixel coordinates (x right, y down).
#[derive(Clone, Debug, PartialEq)]
pub struct Landmarks {
    points: Vec<(f64, f64)>,
}

impl Landmarks {
    /// Requires at least three points spanning a hull of positive area.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewLandmarks {
                min: 3,
                actual: points.len(),
            });
        }
        if points
            .iter()
            .any(|(x, y)| !(x.is_finite() && y.is_finite()))
        {
            return Err(Error::Schema("non-finite landmark coordinate".into()));
        }
        if polygon_area(&convex_hull(&points)) <= 1e-12 {
            return Err(Error::DegenerateHull);
        }
        Ok(Landmarks { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Checks that every point lies on the `[0, w-1] × [0, h-1]` pixel grid.
    pub fn check_bounds(&self, h: usize, w: usize) -> Result<()> {
        for &(x, y) in &self.points {
            if !(0.0..=(w - 1) as f64).contains(&x) || !(0.0..=(h - 1) as f64).contains(&y) {
                return Err(Error::LandmarkOutOfBounds {
                    x,
                    y,
                    width: w,
                    height: h,
                });
            }
        }
        Ok(())
    }
}

pub fn shift_rgb(image: &Image, shift: [f64; 3]) -> Result<Image> {
    image.require_rgb()?;
    Ok(image.map_clipped(|c, v| v + shift[c]))
}

/// Shifts hue (wrapping), saturation and value, then converts back to RGB.
pub fn shift_hsv(image: &Image, shift: [f64; 3]) -> Result<Image> {
    let hsv = rgb_to_hsv(image)?;
    let moved = hsv.map_clipped(|c, v| match c {
        0 => (v + shift[0]).rem_euclid(1.0),
        _ => v + shift[c],
    });
    hsv_to_rgb(&moved)
}

pub fn adjust_brightness(image: &Image, delta: f64) -> Image {
    image.map_clipped(|_, v| v + delta)
}

/// Scales deviations from the global mean by `factor`.
pub fn adjust_contrast(image: &Image, factor: f64) -> Image {
    if factor == 1.0 {
        return image.clone();
    }
    let mean = image.data().iter().sum::<f64>() / image.data().len() as f64;
    image.map_clipped(|_, v| (v - mean) * factor + mean)
}

/// Bilinear downsample by `factor`, then back up to the original size.
pub fn resample(image: &Image, factor: usize) -> Result<Image> {
    let (h, w) = (image.height(), image.width());
    let small = resize_image(image, (h / factor).max(1), (w / factor).max(1))?;
    resize_image(&small, h, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Transform {
    RgbShift,
    HsvShift,
    Brightness,
    Contrast,
    Resample,
    Translate,
}

const TRANSFORM_ORDER: [Transform; 6] = [
    Transform::RgbShift,
    Transform::HsvShift,
    Transform::Brightness,
    Transform::Contrast,
    Transform::Resample,
    Transform::Translate,
];

fn apply_transform(
    image: &Image,
    t: Transform,
    rng: &mut SeededRng,
    cfg: &StgConfig,
) -> Result<Image> {
    let sym = |rng: &mut SeededRng, m: f64| rng.uniform(-m, m);
    match t {
        Transform::RgbShift => {
            let m = cfg.rgb_shift_max;
            shift_rgb(image, [sym(rng, m), sym(rng, m), sym(rng, m)])
        }
        Transform::HsvShift => {
            let [h, s, v] = cfg.hsv_shift_max;
            shift_hsv(image, [sym(rng, h), sym(rng, s), sym(rng, v)])
        }
        Transform::Brightness => Ok(adjust_brightness(image, sym(rng, cfg.brightness_delta_max))),
        Transform::Contrast => {
            let [lo, hi] = cfg.contrast_range;
            Ok(adjust_contrast(image, rng.uniform(lo, hi)))
        }
        Transform::Resample => {
            let f = cfg.downsample_factors[rng.index(cfg.downsample_factors.len())];
            resample(image, f)
        }
        Transform::Translate => {
            let max_dx = (cfg.translate_max_frac * image.width() as f64).floor() as i64;
            let max_dy = (cfg.translate_max_frac * image.height() as f64).floor() as i64;
            let dx = rng.int_inclusive(-max_dx, max_dx);
            let dy = rng.int_inclusive(-max_dy, max_dy);
            translate(image, dx, dy)
        }
    }
}

/// Returns `(source, target)`: the target is the input, the source the input
/// with each transform applied independently with probability `p_each`, in a
/// fixed colour-then-spatial order.
pub fn source_target_generate(
    image: &Image,
    rng: &mut SeededRng,
    cfg: &StgConfig,
) -> Result<(Image, Image)> {
    image.require_rgb()?;
    cfg.validate()?;
    let mut source = image.clone();
    let mut fired = false;
    for t in TRANSFORM_ORDER {
        if rng.chance(cfg.p_each) {
            source = apply_transform(&source, t, rng, cfg)?;
            fired = true;
        }
    }
    if !fired && cfg.force_one {
        let t = TRANSFORM_ORDER[rng.index(TRANSFORM_ORDER.len())];
        source = apply_transform(&source, t, rng, cfg)?;
    }
    Ok((source, image.clone()))
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull in counter-clockwise order (monotone chain), collinear points
/// dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let twice: f64 = (0..poly.len())
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    twice.abs() / 2.0
}

const EDGE_EPS: f64 = 1e-9;

/// Binary mask of the landmarks' convex hull. Pixel `(x, y)` is sampled at
/// its integer coordinates and counts as inside when it lies in or on the
/// hull.
pub fn hull_mask(landmarks: &Landmarks, h: usize, w: usize) -> Result<Mask> {
    landmarks.check_bounds(h, w)?;
    let hull = convex_hull(landmarks.points());
    if polygon_area(&hull) <= 1e-12 {
        return Err(Error::DegenerateHull);
    }
    let mut plane = Plane::filled(h, w, 0.0)?;
    for y in 0..h {
        let yf = y as f64;
        let mut span: Option<(f64, f64)> = None;
        for i in 0..hull.len() {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            let (lo, hi) = (a.1.min(b.1), a.1.max(b.1));
            if yf < lo - EDGE_EPS || yf > hi + EDGE_EPS {
                continue;
            }
            let xs: &[f64] = if (b.1 - a.1).abs() < f64::EPSILON {
                &[a.0, b.0]
            } else {
                &[a.0 + (yf - a.1) * (b.0 - a.0) / (b.1 - a.1)]
            };
            for &x in xs {
                span = Some(match span {
                    None => (x, x),
                    Some((l, r)) => (l.min(x), r.max(x)),
                });
            }
        }
        if let Some((l, r)) = span {
            let start = (l - EDGE_EPS).ceil().max(0.0) as usize;
            let end = (r + EDGE_EPS).floor().min((w - 1) as f64);
            if end < 0.0 {
                continue;
            }
            for x in start..=end as usize {
                plane.set(y, x, 1.0);
            }
        }
    }
    Mask::new(plane)
}

/// Random elastic warp: per-pixel uniform(-1, 1) displacements, Gaussian
/// smoothed with `sigma`, scaled by `alpha`, applied by bilinear sampling
/// with edge clamping.
pub fn elastic_deform(mask: &Mask, rng: &mut SeededRng, alpha: f64, sigma: f64) -> Result<Mask> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!("elastic alpha {alpha}")));
    }
    let (h, w) = (mask.height(), mask.width());
    let mut field = || -> Result<Plane> {
        let raw = Plane::from_fn(h, w, |_, _| rng.uniform(-1.0, 1.0))?;
        gaussian_blur(&raw, sigma)
    };
    let dx = field()?;
    let dy = field()?;
    let src = mask.plane();
    let out = Plane::from_fn(h, w, |y, x| {
        let sx = (x as f64 + alpha * dx.get(y, x)).clamp(0.0, (w - 1) as f64);
        let sy = (y as f64 + alpha * dy.get(y, x)).clamp(0.0, (h - 1) as f64);
        bilinear_at(src, sy, sx)
    })?;
    Ok(Mask::clamped(out))
}

fn bilinear_at(p: &Plane, y: f64, x: f64) -> f64 {
    let (h, w) = p.shape();
    let y0 = (y.floor() as usize).min(h - 1);
    let x0 = (x.floor() as usize).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let x1 = (x0 + 1).min(w - 1);
    let (fy, fx) = (y - y0 as f64, x - x0 as f64);
    let a = p.get(y0, x0);
    let b = p.get(y0, x1);
    let c = p.get(y1, x0);
    let d = p.get(y1, x1);
    let top = if fx == 0.0 { a } else { a + (b - a) * fx };
    let bottom = if fx == 0.0 { c } else { c + (d - c) * fx };
    if fy == 0.0 {
        top
    } else {
        top + (bottom - top) * fy
    }
}

/// Blur → erode → blur, then scale by a blend ratio drawn from the config.
pub fn smooth_mask(mask: &Mask, rng: &mut SeededRng, cfg: &MaskConfig) -> Result<Mask> {
    cfg.validate()?;
    let ratio = cfg.blend_ratio_choices[rng.index(cfg.blend_ratio_choices.len())];
    smooth_mask_with_ratio(mask, cfg, ratio)
}

pub fn smooth_mask_with_ratio(mask: &Mask, cfg: &MaskConfig, ratio: f64) -> Result<Mask> {
    let first = Mask::clamped(gaussian_blur(mask.plane(), cfg.blur1_sigma)?);
    let eroded = erode(&first, cfg.erode_radius)?;
    let second = gaussian_blur(eroded.plane(), cfg.blur2_sigma)?;
    Ok(Mask::clamped(second.map(|v| v * ratio)))
}

/// Per-pixel, per-channel `source * m + target * (1 - m)`.
pub fn blend(source: &Image, target: &Image, mask: &Mask) -> Result<Image> {
    source.ensure_same_shape(target)?;
    if (mask.height(), mask.width()) != (source.height(), source.width()) {
        return Err(Error::ShapeMismatch(format!(
            "mask {}x{} vs image {}x{}",
            mask.height(),
            mask.width(),
            source.height(),
            source.width()
        )));
    }
    let c = source.channels();
    let m = mask.plane().data();
    let data = source
        .data()
        .iter()
        .zip(target.data())
        .enumerate()
        .map(|(i, (&s, &t))| {
            // Equal inputs skip the arithmetic so the result is exactly t.
            if s == t {
                t
            } else {
                let w = m[i / c];
                (s * w + t * (1.0 - w)).clamp(0.0, 1.0)
            }
        })
        .collect();
    Image::new(source.height(), source.width(), c, data)
}

/// Every intermediate of one self-blending run.
#[derive(Clone, Debug)]
pub struct SbiParts {
    pub source: Image,
    pub target: Image,
    pub hull: Mask,
    pub deformed: Mask,
    pub mask: Mask,
    pub blended: Image,
}

pub fn make_sbi_parts(
    image: &Image,
    landmarks: &Landmarks,
    rng: &mut SeededRng,
    stg: &StgConfig,
    mcfg: &MaskConfig,
) -> Result<SbiParts> {
    mcfg.validate()?;
    let (source, target) = source_target_generate(image, rng, stg)?;
    let hull = hull_mask(landmarks, image.height(), image.width())?;
    let deformed = elastic_deform(&hull, rng, mcfg.elastic_alpha, mcfg.elastic_sigma)?;
    let mask = smooth_mask(&deformed, rng, mcfg)?;
    let blended = blend(&source, &target, &mask)?;
    Ok(SbiParts {
        source,
        target,
        hull,
        deformed,
        mask,
        blended,
    })
}

/// Source/target generation → hull → elastic warp → smoothing → blend.
pub fn make_sbi(
    image: &Image,
    landmarks: &Landmarks,
    rng: &mut SeededRng,
    stg: &StgConfig,
    mcfg: &MaskConfig,
) -> Result<Image> {
    Ok(make_sbi_parts(image, landmarks, rng, stg, mcfg)?.blended)
}

pub const SYNTHETIC_LANDMARK_COUNT: usize = 17;

/// Seventeen points on a jittered ellipse centred in an `h × w` frame with
/// semi-axes `0.3 w` and `0.4 h`; each coordinate moves by at most 5% of its
/// axis.
pub fn synthetic_landmarks(h: usize, w: usize, rng: &mut SeededRng) -> Result<Landmarks> {
    synthetic_landmarks_with_jitter(h, w, rng, 0.05)
}

pub fn synthetic_landmarks_with_jitter(
    h: usize,
    w: usize,
    rng: &mut SeededRng,
    jitter: f64,
) -> Result<Landmarks> {
    const MIN: usize = 32;
    if h < MIN || w < MIN {
        return Err(Error::ImageTooSmall {
            height: h,
            width: w,
            min: MIN,
        });
    }
    let jitter = jitter.clamp(0.0, 0.05);
    let (cx, cy) = ((w - 1) as f64 / 2.0, (h - 1) as f64 / 2.0);
    let (ax, ay) = (0.3 * w as f64, 0.4 * h as f64);
    let points = (0..SYNTHETIC_LANDMARK_COUNT)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / SYNTHETIC_LANDMARK_COUNT as f64;
            let jx = rng.uniform(-jitter, jitter) * ax;
            let jy = rng.uniform(-jitter, jitter) * ay;
            (cx + ax * theta.cos() + jx, cy + ay * theta.sin() + jy)
        })
        .collect();
    Landmarks::new(points)
}
