//! Diagonal Gaussians: log-densities and precision-weighted interpolation.

use crate::error::{Error, Result};

pub const LN_2PI: f64 = 1.8378770664093453;

/// A Gaussian with diagonal covariance, stored as mean and per-coordinate
/// variance. Every variance entry must be strictly positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagGaussian {
    mean: Vec<f64>,
    variance: Vec<f64>,
}

impl DiagGaussian {
    pub fn new(mean: Vec<f64>, variance: Vec<f64>) -> Result<Self> {
        if mean.len() != variance.len() {
            return Err(Error::DimMismatch {
                expected: mean.len(),
                got: variance.len(),
                context: "DiagGaussian::new",
            });
        }
        if !mean.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("DiagGaussian mean".into()));
        }
        if !variance.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(Error::InvalidParameter {
                name: "variance",
                reason: "entries must be finite and > 0".into(),
            });
        }
        Ok(Self { mean, variance })
    }

    pub fn standard(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            variance: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn variance(&self) -> &[f64] {
        &self.variance
    }

    /// Full log-density: -1/2 sum_i [ (v_i-m_i)^2/s_i + ln s_i + ln 2pi ],
    /// normalization constants included.
    pub fn log_pdf(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: v.len(),
                context: "DiagGaussian::log_pdf",
            });
        }
        let mut acc = 0.0;
        for i in 0..v.len() {
            let d = v[i] - self.mean[i];
            acc += d * d / self.variance[i] + self.variance[i].ln() + LN_2PI;
        }
        Ok(-0.5 * acc)
    }

    /// Closed-form KL(self || other) for diagonal Gaussians.
    pub fn kl_to(&self, other: &DiagGaussian) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: other.dim(),
                context: "DiagGaussian::kl_to",
            });
        }
        let mut acc = 0.0;
        for i in 0..self.dim() {
            let r = self.variance[i] / other.variance[i];
            let d = self.mean[i] - other.mean[i];
            acc += r + d * d / other.variance[i] - 1.0 - r.ln();
        }
        Ok(0.5 * acc)
    }
}

/// Precision-weighted interpolation between an encoder Gaussian `q` and a
/// prior Gaussian `p`:
///
///   z_i = (m_q_i/s_q_i + lambda m_p_i/s_p_i) / (1/s_q_i + lambda/s_p_i)
///
/// This is the per-coordinate minimizer of -log q(z) - lambda log p(z).
/// lambda = 0 returns the encoder mean exactly.
pub fn gaussian_interpolate(q: &DiagGaussian, p: &DiagGaussian, lambda: f64) -> Result<Vec<f64>> {
    if q.dim() != p.dim() {
        return Err(Error::DimMismatch {
            expected: q.dim(),
            got: p.dim(),
            context: "gaussian_interpolate",
        });
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("must be finite and >= 0, got {lambda}"),
        });
    }
    let mut out = Vec::with_capacity(q.dim());
    for i in 0..q.dim() {
        let wq = 1.0 / q.variance[i];
        let wp = lambda / p.variance[i];
        out.push((wq * q.mean[i] + wp * p.mean[i]) / (wq + wp));
    }
    Ok(out)
}
