//! Raster containers shared by every stage.
//!
//! Samples are `f64` in row-major order. [`Image`] stores channels interleaved
//! (`(y * width + x) * channels + c`), matching the PNG byte layout, while
//! [`Plane`] is a single channel used for per-channel arithmetic.

use crate::error::{Error, Result};

/// A single-channel 2D array of real samples. No range restriction.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Plane {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyPlane);
        }
        if data.len() != height * width {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for a {height}x{width} plane",
                data.len()
            )));
        }
        Ok(Plane {
            height,
            width,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        Plane::new(height, width, vec![value; height * width])
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(f(y, x));
            }
        }
        Plane::new(height, width, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn column(&self, x: usize) -> Vec<f64> {
        (0..self.height).map(|y| self.get(y, x)).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub(crate) fn ensure_same_shape(&self, other: &Plane) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.height, self.width, other.height, other.width
            )));
        }
        Ok(())
    }
}

/// An H×W×C raster with samples in `[0, 1]`; C is 1 or 3.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    /// Builds an image from interleaved samples, rejecting non-finite or
    /// out-of-range values.
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyPlane);
        }
        if channels != 1 && channels != 3 {
            return Err(Error::ChannelMismatch {
                expected: 3,
                actual: channels,
            });
        }
        if data.len() != height * width * channels {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for a {height}x{width}x{channels} image",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::ShapeMismatch(format!("sample {v} outside [0, 1]")));
        }
        Ok(Image {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, value: &[f64]) -> Result<Self> {
        let data = (0..height * width)
            .flat_map(|_| value.iter().copied())
            .collect();
        Image::new(height, width, value.len(), data)
    }

    /// Stacks planes as channels. Values are clipped into `[0, 1]`.
    pub fn from_planes(planes: &[Plane]) -> Result<Self> {
        let first = planes.first().ok_or(Error::EmptyPlane)?;
        for p in &planes[1..] {
            first.ensure_same_shape(p)?;
        }
        let (h, w) = first.shape();
        let c = planes.len();
        let mut data = vec![0.0; h * w * c];
        for (ci, p) in planes.iter().enumerate() {
            for (i, &v) in p.data().iter().enumerate() {
                data[i * c + ci] = v.clamp(0.0, 1.0);
            }
        }
        Image::new(h, w, c, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn channel(&self, c: usize) -> Plane {
        let data = self
            .data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect();
        Plane {
            height: self.height,
            width: self.width,
            data,
        }
    }

    pub fn planes(&self) -> Vec<Plane> {
        (0..self.channels).map(|c| self.channel(c)).collect()
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    pub(crate) fn require_rgb(&self) -> Result<()> {
        if self.channels != 3 {
            return Err(Error::ChannelMismatch {
                expected: 3,
                actual: self.channels,
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_same_shape(&self, other: &Image) -> Result<()> {
        if (self.height, self.width, self.channels) != (other.height, other.width, other.channels) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.height, self.width, self.channels, other.height, other.width, other.channels
            )));
        }
        Ok(())
    }

    /// Applies `f` to every sample and clips the result into `[0, 1]`.
    pub(crate) fn map_clipped(&self, f: impl Fn(usize, f64) -> f64) -> Image {
        let c = self.channels;
        Image {
            data: self
                .data
                .iter()
                .enumerate()
                .map(|(i, &v)| f(i % c, v).clamp(0.0, 1.0))
                .collect(),
            ..*self
        }
    }

    pub(crate) fn from_raw_unchecked(
        height: usize,
        width: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Image {
        debug_assert_eq!(data.len(), height * width * channels);
        Image {
            height,
            width,
            channels,
            data,
        }
    }
}

/// A single-channel soft mask with values in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask(Plane);

impl Mask {
    pub fn new(plane: Plane) -> Result<Self> {
        if let Some(v) = plane.data().iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::ShapeMismatch(format!(
                "mask value {v} outside [0, 1]"
            )));
        }
        Ok(Mask(plane))
    }

    /// Wraps a plane after clamping it into `[0, 1]`.
    pub fn clamped(plane: Plane) -> Self {
        Mask(plane.map(|v| v.clamp(0.0, 1.0)))
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        Mask::new(Plane::filled(height, width, value)?)
    }

    pub fn plane(&self) -> &Plane {
        &self.0
    }

    pub fn into_plane(self) -> Plane {
        self.0
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.0.get(y, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_split_and_stack_round_trip() {
        let data: Vec<f64> = (0..24).map(|i| i as f64 / 23.0).collect();
        let img = Image::new(2, 4, 3, data).unwrap();
        let back = Image::from_planes(&img.planes()).unwrap();
        assert_eq!(img, back);
        assert_eq!(img.channel(1).get(0, 0), 1.0 / 23.0);
    }

    #[test]
    fn rejects_out_of_range_samples() {
        assert!(Image::new(1, 1, 1, vec![1.5]).is_err());
        assert!(Image::new(1, 1, 1, vec![f64::NAN]).is_err());
        assert!(Image::new(1, 1, 2, vec![0.0, 0.0]).is_err());
        assert!(Mask::new(Plane::filled(2, 2, -0.1).unwrap()).is_err());
    }

    #[test]
    fn empty_plane_rejected() {
        assert!(matches!(Plane::new(0, 3, vec![]), Err(Error::EmptyPlane)));
    }
}
