//! Numerical oracle: sampled functions, radiating-kernel convolution, norms,
//! rearrangement and inequality checks.

pub mod calibrate;
pub mod convolution;
pub mod grid;
pub mod norms;
pub mod pde;
pub mod rearrange;
pub mod suite;
pub mod verify;

pub use convolution::{convolve, ConvolutionPlan};
pub use grid::{Geometry, Grid, SampledFunction};
pub use norms::{lorentz_norm, lp_norm, norms, NormReport, NormRequest};
pub use rearrange::rearrange;
pub use verify::{verify_hardy_littlewood, verify_mode_inequality, ModeVerifier, VerificationResult, VerificationRow};
pub use pde::{pde_residual, radiation_check, RadiationReport, ResidualGrid, ResidualReport};
pub use calibrate::{calibrate_constant, calibrated_constants, default_table};
