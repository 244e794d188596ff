//! Uniqueness thresholds for the Schrödinger equation `-Δu = (k + V) u` in the
//! slab `ℝ^{n-1} × (0, 1)` with Dirichlet walls.
//!
//! Expanding a solution in `sin(mπy)` reduces the problem to one Helmholtz-type
//! equation per mode, `-Δ_x u_m - k_m² u_m = f_m` with `f = V u`. Any family of
//! estimates `‖u_m‖₂ ≤ c_m ‖f_m‖₂` on the support `I` of `V` yields the
//! uniqueness condition `‖V‖_∞ < 1 / sup_m c_m`.
//!
//! The crate is organised as
//!
//! - [`spectral`]: problem description, modal wavenumbers, spectral gaps, mode projection;
//! - [`kernel`]: fundamental solutions `g_m` and the special functions behind them;
//! - [`bounds`]: per-mode constants, their aggregate and the resulting certificate;
//! - [`oracle`]: discrete convolution, norms, rearrangement and inequality checks;
//! - [`sharpness`]: explicit solutions that show how tight the estimates are;
//! - [`cli`]: the `slabcert` command-line front end.
//!
//! See the `examples/` directory of this crate for one runnable program per capability.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod kernel;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod sharpness;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
