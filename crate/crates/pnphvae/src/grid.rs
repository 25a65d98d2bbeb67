//! Image grids: height x width x channels arrays of real values.

use crate::error::{Error, Result};

/// Shape of an image grid. Channels is 1 (gray) or 3 (color).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageShape {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
}

impl ImageShape {
    pub fn new(height: usize, width: usize, channels: usize) -> Self {
        Self {
            height,
            width,
            channels,
        }
    }

    pub fn len(&self) -> usize {
        self.height * self.width * self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A dense image with values stored row-major, channel-interleaved.
///
/// Values are nominally in [0,1] but may leave that range mid-iteration;
/// only finiteness is enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    shape: ImageShape,
    data: Vec<f64>,
}

impl ImageGrid {
    pub fn new(shape: ImageShape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::DimMismatch {
                expected: shape.len(),
                got: data.len(),
                context: "ImageGrid::new",
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("ImageGrid::new".into()));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: ImageShape) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.len()],
        }
    }

    pub fn constant(shape: ImageShape, value: f64) -> Self {
        Self {
            shape,
            data: vec![value; shape.len()],
        }
    }

    /// A single-row grid viewing a plain vector as an image.
    pub fn from_vector(data: Vec<f64>) -> Result<Self> {
        let shape = ImageShape::new(1, data.len(), 1);
        Self::new(shape, data)
    }

    pub fn shape(&self) -> ImageShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
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
    pub fn idx(&self, y: usize, x: usize, c: usize) -> usize {
        (y * self.shape.width + x) * self.shape.channels + c
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, c: usize) -> f64 {
        self.data[self.idx(y, x, c)]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, c: usize, v: f64) {
        let i = self.idx(y, x, c);
        self.data[i] = v;
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImageGrid {
        ImageGrid {
            shape: self.shape,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn clamp01(&self) -> ImageGrid {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    pub fn l2_distance(&self, other: &ImageGrid) -> f64 {
        debug_assert_eq!(self.shape, other.shape);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_length() {
        let shape = ImageShape::new(2, 2, 1);
        assert!(ImageGrid::new(shape, vec![0.0; 3]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        let shape = ImageShape::new(1, 2, 1);
        assert!(ImageGrid::new(shape, vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn indexing_is_row_major_interleaved() {
        let shape = ImageShape::new(2, 2, 3);
        let data: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let g = ImageGrid::new(shape, data).unwrap();
        assert_eq!(g.get(0, 0, 0), 0.0);
        assert_eq!(g.get(0, 1, 2), 5.0);
        assert_eq!(g.get(1, 0, 1), 7.0);
    }
}
