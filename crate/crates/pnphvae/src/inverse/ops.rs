//! Concrete degradation operators: identity, pixel mask, circular blur, and
//! blur-then-subsample super-resolution.

use super::fft::{fft2, ifft2_real};
use super::kernel::BlurKernel;
use super::{DegradationOp, OpKind};
use crate::error::{Error, Result};
use crate::grid::{ImageGrid, ImageShape};
use rustfft::num_complex::Complex;

/// y = x.
#[derive(Debug, Clone)]
pub struct IdentityOp {
    shape: ImageShape,
}

impl IdentityOp {
    pub fn new(shape: ImageShape) -> Self {
        Self { shape }
    }
}

impl DegradationOp for IdentityOp {
    fn input_shape(&self) -> ImageShape {
        self.shape
    }

    fn out_dim(&self) -> usize {
        self.shape.len()
    }

    fn apply(&self, x: &ImageGrid) -> Vec<f64> {
        x.data().to_vec()
    }

    fn apply_adjoint(&self, v: &[f64]) -> ImageGrid {
        ImageGrid::new(self.shape, v.to_vec()).expect("identity adjoint shape")
    }

    fn lambda_min(&self) -> f64 {
        1.0
    }

    fn kind(&self) -> OpKind {
        OpKind::Identity
    }

    fn solve_shifted_normal(&self, b: &ImageGrid, shift: f64) -> Option<ImageGrid> {
        Some(b.map(|v| v / (1.0 + shift)))
    }
}

/// Keeps the pixels where the mask is 1; every channel of a kept pixel is
/// observed.
#[derive(Debug, Clone)]
pub struct MaskOp {
    shape: ImageShape,
    /// Per spatial location, row-major, true = observed.
    mask: Vec<bool>,
    observed: Vec<usize>,
}

impl MaskOp {
    pub fn new(shape: ImageShape, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != shape.height * shape.width {
            return Err(Error::DimMismatch {
                expected: shape.height * shape.width,
                got: mask.len(),
                context: "MaskOp::new",
            });
        }
        let observed = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Ok(Self {
            shape,
            mask,
            observed,
        })
    }

    /// Mask from the text-array format: nonzero entries are observed.
    pub fn from_text(shape: ImageShape, text: &str) -> Result<Self> {
        let (rows, cols, vals) = super::kernel::parse_text_array(text)?;
        if rows != shape.height || cols != shape.width {
            return Err(Error::DimMismatch {
                expected: shape.height * shape.width,
                got: rows * cols,
                context: "MaskOp::from_text",
            });
        }
        Self::new(shape, vals.iter().map(|&v| v != 0.0).collect())
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn observed_fraction(&self) -> f64 {
        self.observed.len() as f64 / self.mask.len() as f64
    }
}

impl DegradationOp for MaskOp {
    fn input_shape(&self) -> ImageShape {
        self.shape
    }

    fn out_dim(&self) -> usize {
        self.observed.len() * self.shape.channels
    }

    fn apply(&self, x: &ImageGrid) -> Vec<f64> {
        let c = self.shape.channels;
        let mut out = Vec::with_capacity(self.out_dim());
        for &pix in &self.observed {
            for ch in 0..c {
                out.push(x.data()[pix * c + ch]);
            }
        }
        out
    }

    fn apply_adjoint(&self, v: &[f64]) -> ImageGrid {
        let c = self.shape.channels;
        let mut g = ImageGrid::zeros(self.shape);
        for (k, &pix) in self.observed.iter().enumerate() {
            for ch in 0..c {
                g.data_mut()[pix * c + ch] = v[k * c + ch];
            }
        }
        g
    }

    fn lambda_min(&self) -> f64 {
        if self.observed.len() == self.mask.len() {
            1.0
        } else {
            0.0
        }
    }

    fn kind(&self) -> OpKind {
        OpKind::Mask
    }

    fn solve_shifted_normal(&self, b: &ImageGrid, shift: f64) -> Option<ImageGrid> {
        let c = self.shape.channels;
        let mut out = b.clone();
        for (pix, &obs) in self.mask.iter().enumerate() {
            let w = if obs { 1.0 + shift } else { shift };
            for ch in 0..c {
                out.data_mut()[pix * c + ch] /= w;
            }
        }
        Some(out)
    }
}

/// Circular (periodic-boundary) convolution with a normalized kernel,
/// applied independently to each channel.
#[derive(Debug, Clone)]
pub struct CircularBlurOp {
    shape: ImageShape,
    kernel: BlurKernel,
    /// Frequency response of the kernel on the image grid.
    freq: Vec<Complex<f64>>,
    min_power: f64,
}

impl CircularBlurOp {
    pub fn new(shape: ImageShape, kernel: BlurKernel) -> Result<Self> {
        let (h, w) = (shape.height, shape.width);
        if kernel.rows() > h || kernel.cols() > w {
            return Err(Error::InvalidParameter {
                name: "kernel",
                reason: format!(
                    "kernel {}x{} larger than image {}x{}",
                    kernel.rows(),
                    kernel.cols(),
                    h,
                    w
                ),
            });
        }
        // embed with the center tap at (0, 0)
        let mut padded = vec![0.0; h * w];
        let (cr, cc) = (kernel.rows() / 2, kernel.cols() / 2);
        for r in 0..kernel.rows() {
            for c in 0..kernel.cols() {
                let y = (r + h - cr) % h;
                let x = (c + w - cc) % w;
                padded[y * w + x] += kernel.at(r, c);
            }
        }
        let freq = fft2(&padded, h, w);
        let min_power = freq
            .iter()
            .map(|z| z.norm_sqr())
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            shape,
            kernel,
            freq,
            min_power,
        })
    }

    pub fn kernel(&self) -> &BlurKernel {
        &self.kernel
    }

    fn convolve(&self, x: &ImageGrid, kernel: &BlurKernel) -> Vec<f64> {
        let ImageShape {
            height: h,
            width: w,
            channels: cc,
        } = self.shape;
        let (kr, kc) = (kernel.rows(), kernel.cols());
        let (cr, ccol) = (kr / 2, kc / 2);
        let mut out = vec![0.0; h * w * cc];
        for y in 0..h {
            for xp in 0..w {
                for ch in 0..cc {
                    let mut acc = 0.0;
                    for i in 0..kr {
                        let sy = (y + h + cr - i) % h;
                        for j in 0..kc {
                            let sx = (xp + w + ccol - j) % w;
                            acc += kernel.at(i, j) * x.get(sy, sx, ch);
                        }
                    }
                    out[(y * w + xp) * cc + ch] = acc;
                }
            }
        }
        out
    }
}

impl DegradationOp for CircularBlurOp {
    fn input_shape(&self) -> ImageShape {
        self.shape
    }

    fn out_dim(&self) -> usize {
        self.shape.len()
    }

    fn apply(&self, x: &ImageGrid) -> Vec<f64> {
        self.convolve(x, &self.kernel)
    }

    fn apply_adjoint(&self, v: &[f64]) -> ImageGrid {
        let g = ImageGrid::new(self.shape, v.to_vec()).expect("blur adjoint shape");
        let data = self.convolve(&g, &self.kernel.flipped());
        ImageGrid::new(self.shape, data).expect("blur adjoint output")
    }

    fn lambda_min(&self) -> f64 {
        self.min_power
    }

    fn kind(&self) -> OpKind {
        OpKind::Blur
    }

    /// Exact frequency-domain solve of (A^t A + shift I) x = b.
    fn solve_shifted_normal(&self, b: &ImageGrid, shift: f64) -> Option<ImageGrid> {
        let ImageShape {
            height: h,
            width: w,
            channels: cc,
        } = self.shape;
        let mut out = ImageGrid::zeros(self.shape);
        let mut plane = vec![0.0; h * w];
        for ch in 0..cc {
            for p in 0..h * w {
                plane[p] = b.data()[p * cc + ch];
            }
            let mut f = fft2(&plane, h, w);
            for (fi, hi) in f.iter_mut().zip(&self.freq) {
                *fi /= hi.norm_sqr() + shift;
            }
            let solved = ifft2_real(&f, h, w);
            for p in 0..h * w {
                out.data_mut()[p * cc + ch] = solved[p];
            }
        }
        Some(out)
    }
}

/// Anti-alias Gaussian blur followed by factor-s subsampling.
#[derive(Debug, Clone)]
pub struct DownsampleOp {
    blur: CircularBlurOp,
    factor: usize,
}

impl DownsampleOp {
    /// The anti-alias bandwidth defaults to 0.5 * factor.
    pub fn new(shape: ImageShape, factor: usize) -> Result<Self> {
        if factor < 2 {
            return Err(Error::InvalidParameter {
                name: "factor",
                reason: "subsampling factor must be >= 2".into(),
            });
        }
        if shape.height % factor != 0 || shape.width % factor != 0 {
            return Err(Error::InvalidParameter {
                name: "factor",
                reason: format!(
                    "image {}x{} not divisible by factor {factor}",
                    shape.height, shape.width
                ),
            });
        }
        let kernel = super::kernel::make_kernel(super::kernel::KernelKind::Gaussian {
            bandwidth: 0.5 * factor as f64,
        })?;
        Ok(Self {
            blur: CircularBlurOp::new(shape, kernel)?,
            factor,
        })
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn output_shape(&self) -> ImageShape {
        let s = self.blur.shape;
        ImageShape::new(s.height / self.factor, s.width / self.factor, s.channels)
    }
}

impl DegradationOp for DownsampleOp {
    fn input_shape(&self) -> ImageShape {
        self.blur.shape
    }

    fn out_dim(&self) -> usize {
        self.output_shape().len()
    }

    fn apply(&self, x: &ImageGrid) -> Vec<f64> {
        let blurred = self.blur.apply(x);
        let s = self.blur.shape;
        let os = self.output_shape();
        let mut out = Vec::with_capacity(os.len());
        for y in 0..os.height {
            for xp in 0..os.width {
                for ch in 0..s.channels {
                    out.push(blurred[((y * self.factor) * s.width + xp * self.factor) * s.channels + ch]);
                }
            }
        }
        out
    }

    fn apply_adjoint(&self, v: &[f64]) -> ImageGrid {
        let s = self.blur.shape;
        let os = self.output_shape();
        let mut up = ImageGrid::zeros(s);
        for y in 0..os.height {
            for xp in 0..os.width {
                for ch in 0..s.channels {
                    let val = v[(y * os.width + xp) * s.channels + ch];
                    up.set(y * self.factor, xp * self.factor, ch, val);
                }
            }
        }
        self.blur.apply_adjoint(up.data())
    }

    fn lambda_min(&self) -> f64 {
        // subsampling discards dimensions, so A^t A is rank deficient
        0.0
    }

    fn kind(&self) -> OpKind {
        OpKind::Downsample
    }
}
