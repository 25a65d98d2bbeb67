//! Greedy hierarchical encoding with latent regularization, reconstruction,
//! and ancestral prior sampling.

use super::{HvaeModel, LatentHierarchy, TemperatureSchedule};
use crate::error::{Error, Result};
use crate::gaussian::gaussian_interpolate;
use crate::grid::ImageGrid;
use crate::rng::{self, Rng};

/// Regularized encoding E_tau(x): level by level, from coarsest to finest,
/// interpolate between the encoder conditional q(z_l | z_{<l}, x) and the
/// prior conditional p(z_l | z_{<l}) with weight lambda_l = 1/tau_l^2 - 1.
/// Deterministic; no sampling.
pub fn encode_regularized(
    model: &dyn HvaeModel,
    x: &ImageGrid,
    tau: &TemperatureSchedule,
) -> Result<LatentHierarchy> {
    if !x.all_finite() {
        return Err(Error::NonFinite("encode_regularized input".into()));
    }
    let levels = model.num_levels();
    if tau.num_levels() != levels {
        return Err(Error::DimMismatch {
            expected: levels,
            got: tau.num_levels(),
            context: "encode_regularized: temperature schedule",
        });
    }
    let mut z: Vec<Vec<f64>> = Vec::with_capacity(levels);
    for l in 0..levels {
        let q = model.encoder_conditional(l, &z, x)?;
        let p = model.prior_conditional(l, &z)?;
        if !q.mean().iter().all(|v| v.is_finite()) || !q.variance().iter().all(|v| v.is_finite()) {
            return Err(Error::BadConditional {
                level: l,
                which: "encoder",
            });
        }
        if !p.mean().iter().all(|v| v.is_finite()) || !p.variance().iter().all(|v| v.is_finite()) {
            return Err(Error::BadConditional {
                level: l,
                which: "prior",
            });
        }
        z.push(gaussian_interpolate(&q, &p, tau.lambda(l))?);
    }
    LatentHierarchy::new(z)
}

/// The reconstruction operator HVAE(x, tau) = mu(E_tau(x)).
pub fn reconstruct(
    model: &dyn HvaeModel,
    x: &ImageGrid,
    tau: &TemperatureSchedule,
) -> Result<ImageGrid> {
    let z = encode_regularized(model, x, tau)?;
    model.decoder_mean(&z)
}

/// Ancestral sample from the tempered prior: z_l ~ N(prior mean, tau_l^2 *
/// prior variance) level by level, decoded through the mean.
pub fn sample_prior(
    model: &dyn HvaeModel,
    tau: &TemperatureSchedule,
    rng: &mut Rng,
) -> Result<ImageGrid> {
    let levels = model.num_levels();
    if tau.num_levels() != levels {
        return Err(Error::DimMismatch {
            expected: levels,
            got: tau.num_levels(),
            context: "sample_prior: temperature schedule",
        });
    }
    let mut z: Vec<Vec<f64>> = Vec::with_capacity(levels);
    for l in 0..levels {
        let p = model.prior_conditional(l, &z)?;
        let t = tau.tau(l);
        let sample: Vec<f64> = p
            .mean()
            .iter()
            .zip(p.variance())
            .map(|(&m, &v)| m + t * v.sqrt() * rng::standard_normal(rng))
            .collect();
        z.push(sample);
    }
    model.decoder_mean(&LatentHierarchy::new(z)?)
}
