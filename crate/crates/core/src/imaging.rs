//! Image-processing primitives: PNG I/O, resampling, colour conversion,
//! blur, erosion and translation.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use crate::error::{Error, Result};
use crate::raster::{Image, Mask, Plane};

/// Maps a sample to its 8-bit code: `round(clamp(v) * 255)`.
#[inline]
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

impl Image {
    pub fn from_u8(height: usize, width: usize, channels: usize, bytes: &[u8]) -> Result<Image> {
        Image::new(
            height,
            width,
            channels,
            bytes.iter().map(|&b| b as f64 / 255.0).collect(),
        )
    }

    pub fn to_u8(&self) -> Vec<u8> {
        self.data().iter().map(|&v| quantize(v)).collect()
    }
}

/// Reads an 8-bit grayscale or RGB PNG; samples become `v / 255`.
pub fn load_png(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let decoded = image::ImageReader::with_format(BufReader::new(file), ImageFormat::Png)
        .decode()
        .map_err(|e| match e {
            image::ImageError::IoError(e) => Error::io(path, e),
            other => Error::UnsupportedPngFormat {
                path: path.to_path_buf(),
                detail: other.to_string(),
            },
        })?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    match decoded {
        DynamicImage::ImageLuma8(buf) => Image::from_u8(h, w, 1, buf.as_raw()),
        DynamicImage::ImageRgb8(buf) => Image::from_u8(h, w, 3, buf.as_raw()),
        other => Err(Error::UnsupportedPngFormat {
            path: path.to_path_buf(),
            detail: format!("{:?}, expected 8-bit L or RGB", other.color()),
        }),
    }
}

/// Writes `image` as an 8-bit PNG after clipping and rounding.
pub fn save_png(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = (image.width() as u32, image.height() as u32);
    let bytes = image.to_u8();
    let dynamic = match image.channels() {
        1 => DynamicImage::ImageLuma8(image::GrayImage::from_raw(w, h, bytes).expect("sized")),
        _ => DynamicImage::ImageRgb8(image::RgbImage::from_raw(w, h, bytes).expect("sized")),
    };
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    dynamic
        .write_to(&mut writer, ImageFormat::Png)
        .map_err(|e| match e {
            image::ImageError::IoError(e) => Error::io(path, e),
            other => Error::io(path, std::io::Error::other(other.to_string())),
        })?;
    writer
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?;
    Ok(())
}

/// Bilinear resampling with aligned corners: output index `i` reads source
/// coordinate `i * (in - 1) / (out - 1)`, or the centre when `out == 1`.
pub fn resize_bilinear(plane: &Plane, out_h: usize, out_w: usize) -> Result<Plane> {
    if out_h == 0 || out_w == 0 {
        return Err(Error::EmptyPlane);
    }
    let (in_h, in_w) = plane.shape();
    let coords = |out: usize, input: usize| -> Vec<(usize, usize, f64)> {
        (0..out)
            .map(|i| {
                let src = if out > 1 {
                    i as f64 * (input - 1) as f64 / (out - 1) as f64
                } else {
                    (input - 1) as f64 / 2.0
                };
                let lo = (src.floor() as usize).min(input - 1);
                let hi = (lo + 1).min(input - 1);
                (lo, hi, src - lo as f64)
            })
            .collect()
    };
    let ys = coords(out_h, in_h);
    let xs = coords(out_w, in_w);
    let mut data = Vec::with_capacity(out_h * out_w);
    for &(y0, y1, fy) in &ys {
        for &(x0, x1, fx) in &xs {
            let top = lerp(plane.get(y0, x0), plane.get(y0, x1), fx);
            let bottom = lerp(plane.get(y1, x0), plane.get(y1, x1), fx);
            data.push(lerp(top, bottom, fy));
        }
    }
    Plane::new(out_h, out_w, data)
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t == 0.0 {
        a
    } else {
        a + (b - a) * t
    }
}

/// Resizes every channel of an image.
pub fn resize_image(image: &Image, out_h: usize, out_w: usize) -> Result<Image> {
    if image.height() == out_h && image.width() == out_w {
        return Ok(image.clone());
    }
    let planes = image
        .planes()
        .iter()
        .map(|p| resize_bilinear(p, out_h, out_w))
        .collect::<Result<Vec<_>>>()?;
    Image::from_planes(&planes)
}

/// Hexcone RGB → HSV with all three components in `[0, 1]`. Achromatic
/// pixels get hue 0.
pub fn rgb_to_hsv(image: &Image) -> Result<Image> {
    image.require_rgb()?;
    let mut out = Vec::with_capacity(image.data().len());
    for px in image.data().chunks_exact(3) {
        let (r, g, b) = (px[0], px[1], px[2]);
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let delta = max - min;
        let h = if delta == 0.0 {
            0.0
        } else if max == r {
            ((g - b) / delta).rem_euclid(6.0)
        } else if max == g {
            (b - r) / delta + 2.0
        } else {
            (r - g) / delta + 4.0
        } / 6.0;
        let s = if max == 0.0 { 0.0 } else { delta / max };
        out.extend([h.clamp(0.0, 1.0), s, max]);
    }
    Ok(Image::from_raw_unchecked(
        image.height(),
        image.width(),
        3,
        out,
    ))
}

/// Inverse of [`rgb_to_hsv`]. Hue wraps at 1.
pub fn hsv_to_rgb(image: &Image) -> Result<Image> {
    image.require_rgb()?;
    let mut out = Vec::with_capacity(image.data().len());
    for px in image.data().chunks_exact(3) {
        let (h, s, v) = (px[0], px[1], px[2]);
        let h6 = (h * 6.0).rem_euclid(6.0);
        let sector = h6.floor();
        let f = h6 - sector;
        let p = v * (1.0 - s);
        let q = v * (1.0 - s * f);
        let t = v * (1.0 - s * (1.0 - f));
        let (r, g, b) = match sector as u8 {
            0 => (v, t, p),
            1 => (q, v, p),
            2 => (p, v, t),
            3 => (p, q, v),
            4 => (t, p, v),
            _ => (v, p, q),
        };
        out.extend([r.clamp(0.0, 1.0), g.clamp(0.0, 1.0), b.clamp(0.0, 1.0)]);
    }
    Ok(Image::from_raw_unchecked(
        image.height(),
        image.width(),
        3,
        out,
    ))
}

/// Mirror index about the edge sample (no repeat); length-1 axes clamp.
#[inline]
fn reflect_index(i: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    let q = i.rem_euclid(2 * n - 2);
    (if q < n { q } else { 2 * n - 2 - q }) as usize
}

fn gaussian_weights(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    let radius = (3.0 * sigma).ceil() as isize;
    Ok((-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect())
}

/// Normalized 1D Gaussian taps, radius `ceil(3σ)`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    let raw = gaussian_weights(sigma)?;
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|v| v / total).collect())
}

/// Separable Gaussian blur, kernel radius `ceil(3σ)`, reflect boundary.
///
/// Each pass divides by the tap sum accumulated in the same order as the
/// weighted sum, so all-zero and all-one planes come back bit-exact.
pub fn gaussian_blur(plane: &Plane, sigma: f64) -> Result<Plane> {
    let weights = gaussian_weights(sigma)?;
    let total: f64 = weights.iter().sum();
    let radius = (weights.len() / 2) as isize;
    let (h, w) = plane.shape();
    let convolve = |at: &dyn Fn(isize) -> f64, center: usize| -> f64 {
        let mut acc = 0.0;
        for (k, &c) in weights.iter().enumerate() {
            acc += c * at(center as isize + k as isize - radius);
        }
        acc / total
    };

    let mut tmp = vec![0.0; h * w];
    for y in 0..h {
        let row = plane.row(y);
        for x in 0..w {
            tmp[y * w + x] = convolve(&|i| row[reflect_index(i, w)], x);
        }
    }
    let mut out = vec![0.0; h * w];
    for x in 0..w {
        for y in 0..h {
            out[y * w + x] = convolve(&|i| tmp[reflect_index(i, h) * w + x], y);
        }
    }
    Plane::new(h, w, out)
}

/// Grayscale erosion: minimum over the `(2r+1)²` square, reflect boundary.
pub fn erode(mask: &Mask, radius: usize) -> Result<Mask> {
    if radius == 0 {
        return Err(Error::InvalidRadius(radius));
    }
    let plane = mask.plane();
    let (h, w) = plane.shape();
    let r = radius as isize;
    // Square min is separable: rows first, then columns.
    let mut tmp = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            tmp[y * w + x] = (-r..=r)
                .map(|d| plane.get(y, reflect_index(x as isize + d, w)))
                .fold(f64::INFINITY, f64::min);
        }
    }
    let mut out = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = (-r..=r)
                .map(|d| tmp[reflect_index(y as isize + d, h) * w + x])
                .fold(f64::INFINITY, f64::min);
        }
    }
    Mask::new(Plane::new(h, w, out)?)
}

/// Integer shift by `(dx, dy)`; vacated pixels replicate the nearest edge.
pub fn translate(image: &Image, dx: i64, dy: i64) -> Result<Image> {
    let (h, w, c) = (image.height(), image.width(), image.channels());
    if dx.unsigned_abs() as usize >= w || dy.unsigned_abs() as usize >= h {
        return Err(Error::ShiftTooLarge {
            dx,
            dy,
            width: w,
            height: h,
        });
    }
    let mut out = Vec::with_capacity(image.data().len());
    for y in 0..h {
        let sy = (y as i64 - dy).clamp(0, h as i64 - 1) as usize;
        for x in 0..w {
            let sx = (x as i64 - dx).clamp(0, w as i64 - 1) as usize;
            for ch in 0..c {
                out.push(image.get(sy, sx, ch));
            }
        }
    }
    Ok(Image::from_raw_unchecked(h, w, c, out))
}

pub fn clip01(plane: &Plane) -> Plane {
    plane.map(|v| v.clamp(0.0, 1.0))
}
