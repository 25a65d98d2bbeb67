//! Blur kernels: construction, normalization, and the plain-text tape format.

use crate::error::{Error, Result};
use std::path::Path;

/// A 2-d convolution tape with odd side lengths, nonnegative entries,
/// normalized to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BlurKernel {
    rows: usize,
    cols: usize,
    taps: Vec<f64>,
}

impl BlurKernel {
    pub fn new(rows: usize, cols: usize, taps: Vec<f64>) -> Result<Self> {
        if rows % 2 == 0 || cols % 2 == 0 || rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter {
                name: "kernel size",
                reason: format!("side lengths must be odd and positive, got {rows}x{cols}"),
            });
        }
        if taps.len() != rows * cols {
            return Err(Error::DimMismatch {
                expected: rows * cols,
                got: taps.len(),
                context: "BlurKernel::new",
            });
        }
        if taps.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter {
                name: "kernel taps",
                reason: "entries must be finite and nonnegative".into(),
            });
        }
        let sum: f64 = taps.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "kernel taps",
                reason: "sum must be positive".into(),
            });
        }
        let taps = taps.iter().map(|v| v / sum).collect();
        Ok(Self { rows, cols, taps })
    }

    pub fn delta() -> Self {
        Self {
            rows: 1,
            cols: 1,
            taps: vec![1.0],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.taps[r * self.cols + c]
    }

    /// Kernel with rows and columns reversed (the adjoint of circular
    /// convolution is convolution with this).
    pub fn flipped(&self) -> BlurKernel {
        let mut taps = vec![0.0; self.taps.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                taps[(self.rows - 1 - r) * self.cols + (self.cols - 1 - c)] = self.at(r, c);
            }
        }
        BlurKernel {
            rows: self.rows,
            cols: self.cols,
            taps,
        }
    }

    /// Plain-text format: a `rows cols` header line, then rows of
    /// space-separated reals.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:.17e}", self.at(r, c))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        parse_text_array(text).and_then(|(rows, cols, taps)| Self::new(rows, cols, taps))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Parse the shared `rows cols` + rows-of-reals text format (also used for
/// inpainting masks).
pub fn parse_text_array(text: &str) -> Result<(usize, usize, Vec<f64>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::MalformedFile {
        format: "text array",
        offset: 0,
        reason: "empty file".into(),
    })?;
    let mut it = header.split_whitespace();
    let rows: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::MalformedFile {
            format: "text array",
            offset: 0,
            reason: "header must be `rows cols`".into(),
        })?;
    let cols: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::MalformedFile {
            format: "text array",
            offset: 0,
            reason: "header must be `rows cols`".into(),
        })?;
    let mut vals = Vec::with_capacity(rows * cols);
    for line in lines {
        for tok in line.split_whitespace() {
            vals.push(tok.parse::<f64>().map_err(|_| Error::MalformedFile {
                format: "text array",
                offset: 0,
                reason: format!("bad number {tok}"),
            })?);
        }
    }
    if vals.len() != rows * cols {
        return Err(Error::MalformedFile {
            format: "text array",
            offset: 0,
            reason: format!("expected {} values, found {}", rows * cols, vals.len()),
        });
    }
    Ok((rows, cols, vals))
}

#[derive(Debug, Clone, Copy)]
pub enum KernelKind {
    /// Isotropic Gaussian with the given bandwidth, truncated at 4 bandwidths.
    Gaussian { bandwidth: f64 },
    /// Uniform box of the given odd side length.
    Box { side: usize },
    /// Anti-aliased line segment of the given length and angle (radians).
    MotionLine { length: f64, angle: f64 },
}

pub fn make_kernel(kind: KernelKind) -> Result<BlurKernel> {
    match kind {
        KernelKind::Gaussian { bandwidth } => {
            if !(bandwidth > 0.0 && bandwidth.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "bandwidth",
                    reason: "must be finite and > 0".into(),
                });
            }
            let radius = (4.0 * bandwidth).ceil() as usize;
            let side = 2 * radius + 1;
            let mut taps = Vec::with_capacity(side * side);
            for r in 0..side {
                for c in 0..side {
                    let dy = r as f64 - radius as f64;
                    let dx = c as f64 - radius as f64;
                    taps.push((-(dy * dy + dx * dx) / (2.0 * bandwidth * bandwidth)).exp());
                }
            }
            BlurKernel::new(side, side, taps)
        }
        KernelKind::Box { side } => {
            if side == 0 || side % 2 == 0 {
                return Err(Error::InvalidParameter {
                    name: "side",
                    reason: "must be odd and positive".into(),
                });
            }
            BlurKernel::new(side, side, vec![1.0; side * side])
        }
        KernelKind::MotionLine { length, angle } => {
            if !(length >= 1.0 && length.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "length",
                    reason: "must be finite and >= 1".into(),
                });
            }
            let radius = (0.5 * length).ceil() as usize;
            let side = 2 * radius + 1;
            let (dy, dx) = (angle.sin(), angle.cos());
            let half = 0.5 * length;
            let mut taps = vec![0.0; side * side];
            // rasterize by supersampling points along the segment with a
            // small transverse Gaussian profile
            let samples = (length * 16.0).ceil() as usize;
            for s in 0..=samples {
                let t = -half + length * s as f64 / samples as f64;
                let py = radius as f64 + t * dy;
                let px = radius as f64 + t * dx;
                for r in 0..side {
                    for c in 0..side {
                        let d2 = (r as f64 - py).powi(2) + (c as f64 - px).powi(2);
                        taps[r * side + c] += (-d2 / 0.5).exp();
                    }
                }
            }
            BlurKernel::new(side, side, taps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_are_normalized() {
        for k in [
            make_kernel(KernelKind::Gaussian { bandwidth: 1.2 }).unwrap(),
            make_kernel(KernelKind::Box { side: 3 }).unwrap(),
            make_kernel(KernelKind::MotionLine {
                length: 5.0,
                angle: 0.7,
            })
            .unwrap(),
        ] {
            let sum: f64 = k.taps().iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn box3_is_uniform() {
        let k = make_kernel(KernelKind::Box { side: 3 }).unwrap();
        for &t in k.taps() {
            assert!((t - 1.0 / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tiny_bandwidth_approaches_delta() {
        let k = make_kernel(KernelKind::Gaussian { bandwidth: 1e-3 }).unwrap();
        let center = k.at(k.rows() / 2, k.cols() / 2);
        assert!(center > 1.0 - 1e-9);
    }

    #[test]
    fn even_sizes_rejected() {
        assert!(BlurKernel::new(2, 3, vec![1.0; 6]).is_err());
        assert!(make_kernel(KernelKind::Box { side: 4 }).is_err());
    }

    #[test]
    fn text_round_trip() {
        let k = make_kernel(KernelKind::Gaussian { bandwidth: 0.8 }).unwrap();
        let k2 = BlurKernel::from_text(&k.to_text()).unwrap();
        assert_eq!(k.rows(), k2.rows());
        for (a, b) in k.taps().iter().zip(k2.taps()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn flipped_twice_is_identity() {
        let k = make_kernel(KernelKind::MotionLine {
            length: 4.0,
            angle: 0.3,
        })
        .unwrap();
        assert_eq!(k.flipped().flipped(), k);
    }
}
