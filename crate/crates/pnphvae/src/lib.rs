//! Restoration of linear image inverse problems (deblurring, inpainting,
//! super-resolution, denoising) with a hierarchical VAE prior.
//!
//! The solver alternates a closed-form data-fidelity proximal step with a
//! greedy temperature-regularized hierarchical encoding step. An analytic
//! linear-Gaussian model family provides closed-form ground truth (joint MAP,
//! tempered marginals, Tweedie identity), and a small trainable nonlinear
//! HVAE stands in for full-scale patch models at desk scale.

pub mod acceptance;
pub mod cg;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod hvae;
pub mod inverse;
pub mod linop;
pub mod metrics;
pub mod oracle;
pub mod pnm;
pub mod rng;
pub mod solver;
pub mod spectral;
pub mod toy;

pub use error::{Error, Result};
pub use gaussian::DiagGaussian;
pub use grid::{ImageGrid, ImageShape};
pub use hvae::{HvaeModel, LatentHierarchy, TemperatureSchedule};
pub use linop::LinearOperator;
