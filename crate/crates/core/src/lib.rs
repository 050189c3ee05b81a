//! Stochastic thermodynamics of a chiral nanoparticle in a bistable
//! dual-beam optical trap.
//!
//! The crate covers the full chain from the paraxial standing-wave fields to
//! residency-time statistics:
//!
//! - [`optics`]: beam geometry, polarization control, energy densities,
//!   chiral density K and chiral flux Phi, with an independent complex-field
//!   evaluation path for cross-validation;
//! - [`particle`]: quasistatic Clausius-Mossotti polarizabilities of a
//!   chiral nanosphere and the inverse problem for the chiral parameter;
//! - [`forcefield`]: the six dipolar force components with analytic
//!   gradients;
//! - [`landscape`]: double-well location, barrier calibration, Kramers
//!   escape rates (steepest-descent and brute-force quadrature), chiral rate
//!   corrections, stationary densities and polarization sweeps;
//! - [`simulator`]: overdamped Euler-Maruyama ensembles with deterministic
//!   per-trajectory random streams and inverse-transform initialization;
//! - [`statistics`]: hysteresis jump detection, exponential residency fits
//!   and the absolute chirality determination from residency times;
//! - [`setup`]: ready-made parameter sets wiring all of the above together.
//!
//! The `parallel` feature (default) runs ensembles on a rayon pool; without
//! it the same code paths execute sequentially.

pub mod constants;
pub mod error;
pub mod forcefield;
pub mod landscape;
pub mod medium;
pub mod optics;
pub mod particle;
pub mod setup;
pub mod simulator;
pub mod statistics;

pub use error::{Error, Result};
