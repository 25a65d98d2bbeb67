//! The hierarchical-VAE abstraction: model interface, temperature schedules,
//! greedy regularized encoding, reconstruction, sampling, and the joint-MAP
//! objective evaluators.

mod encode;
mod objective;
pub mod params;

pub use encode::{encode_regularized, reconstruct, sample_prior};
pub use objective::{
    decomposition_terms, elbo, eval_j1, eval_j2_tilde, DecompositionTerms, ElboEstimate,
};

use crate::error::{Error, Result};
use crate::gaussian::DiagGaussian;
use crate::grid::{ImageGrid, ImageShape};

/// Ordered per-level latent vectors z_0 .. z_{L-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentHierarchy {
    levels: Vec<Vec<f64>>,
}

impl LatentHierarchy {
    pub fn new(levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter {
                name: "levels",
                reason: "need at least one level".into(),
            });
        }
        Ok(Self { levels })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn level(&self, l: usize) -> &[f64] {
        &self.levels[l]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn prefix(&self, l: usize) -> &[Vec<f64>] {
        &self.levels[..l]
    }

    /// All levels concatenated in order.
    pub fn stacked(&self) -> Vec<f64> {
        self.levels.iter().flatten().copied().collect()
    }

    /// Split a stacked vector back into levels of the given dims.
    pub fn from_stacked(dims: &[usize], stacked: &[f64]) -> Result<Self> {
        let total: usize = dims.iter().sum();
        if stacked.len() != total {
            return Err(Error::DimMismatch {
                expected: total,
                got: stacked.len(),
                context: "LatentHierarchy::from_stacked",
            });
        }
        let mut levels = Vec::with_capacity(dims.len());
        let mut off = 0;
        for &d in dims {
            levels.push(stacked[off..off + d].to_vec());
            off += d;
        }
        Self::new(levels)
    }

    pub fn l2_distance(&self, other: &LatentHierarchy) -> f64 {
        self.levels
            .iter()
            .flatten()
            .zip(other.levels.iter().flatten())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Per-level temperatures tau_l in (0, 1]. The equivalent latent
/// regularization weight is lambda_l = 1/tau_l^2 - 1, so tau = 1 gives
/// lambda = 0 with no special-casing.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureSchedule {
    taus: Vec<f64>,
}

/// Temperatures are clamped below at this value when forming lambda, so
/// extremely small tau cannot overflow 1/tau^2.
pub const MIN_TAU: f64 = 1e-6;

impl TemperatureSchedule {
    pub fn new(taus: Vec<f64>) -> Result<Self> {
        if taus.is_empty() {
            return Err(Error::InvalidParameter {
                name: "taus",
                reason: "need at least one level".into(),
            });
        }
        for &t in &taus {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::InvalidParameter {
                    name: "tau",
                    reason: format!("each tau must lie in (0, 1], got {t}"),
                });
            }
        }
        Ok(Self { taus })
    }

    /// Constant temperature across all levels.
    pub fn constant(tau: f64, levels: usize) -> Result<Self> {
        Self::new(vec![tau; levels])
    }

    pub fn num_levels(&self) -> usize {
        self.taus.len()
    }

    pub fn tau(&self, l: usize) -> f64 {
        self.taus[l]
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    /// lambda_l = 1/tau_l^2 - 1 with tau clamped to >= MIN_TAU.
    pub fn lambda(&self, l: usize) -> f64 {
        let t = self.taus[l].max(MIN_TAU);
        1.0 / (t * t) - 1.0
    }
}

/// Interface to a hierarchical VAE with Gaussian conditionals and a Gaussian
/// decoder of constant variance.
///
/// At level 0 the prefix is empty; implementations must ignore it there.
/// `decoder_variance` must not depend on z (the proximal form of the x-step
/// relies on it).
pub trait HvaeModel {
    fn num_levels(&self) -> usize;

    /// Latent dimensions for images of the given shape.
    fn latent_dims(&self, shape: &ImageShape) -> Result<Vec<usize>>;

    /// The image shape this model operates on.
    fn image_shape(&self) -> ImageShape;

    /// p(z_l | z_{<l})
    fn prior_conditional(&self, level: usize, prefix: &[Vec<f64>]) -> Result<DiagGaussian>;

    /// q(z_l | z_{<l}, x)
    fn encoder_conditional(
        &self,
        level: usize,
        prefix: &[Vec<f64>],
        x: &ImageGrid,
    ) -> Result<DiagGaussian>;

    /// Decoder mean mu(z).
    fn decoder_mean(&self, z: &LatentHierarchy) -> Result<ImageGrid>;

    /// Constant decoder variance gamma^2 > 0.
    fn decoder_variance(&self) -> f64;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_of_tau_one_is_exactly_zero() {
        let ts = TemperatureSchedule::constant(1.0, 3).unwrap();
        for l in 0..3 {
            assert_eq!(ts.lambda(l), 0.0);
        }
    }

    #[test]
    fn lambda_of_half_is_three() {
        let ts = TemperatureSchedule::constant(0.5, 1).unwrap();
        assert!((ts.lambda(0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn tau_out_of_range_rejected() {
        assert!(TemperatureSchedule::constant(0.0, 1).is_err());
        assert!(TemperatureSchedule::constant(1.5, 1).is_err());
        assert!(TemperatureSchedule::constant(-0.1, 1).is_err());
    }

    #[test]
    fn stacked_round_trip() {
        let z = LatentHierarchy::new(vec![vec![1.0, 2.0], vec![3.0]]).unwrap();
        let s = z.stacked();
        assert_eq!(s, vec![1.0, 2.0, 3.0]);
        let back = LatentHierarchy::from_stacked(&[2, 1], &s).unwrap();
        assert_eq!(back, z);
    }
}
