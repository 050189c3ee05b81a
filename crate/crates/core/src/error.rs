//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by trap analytics and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// Clausius-Mossotti denominator vanishes: unphysical material/fluid pair.
    #[error("singular Clausius-Mossotti denominator (|den| = {magnitude:.3e})")]
    SingularDenominator { magnitude: f64 },

    /// The chirality quadratic has no usable root for the requested ratio.
    #[error("no chiral parameter solves the requested ratio: {reason}")]
    NoSolution { reason: String },

    /// The scanned axial potential is not a double well.
    #[error("potential is not bistable: found {minima} minima and {maxima} interior maxima in the scan window")]
    NotBistable { minima: usize, maxima: usize },

    /// Polarization settings do not match the requested coupling regime.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    /// Numerical integration failed to reach the requested tolerance.
    #[error("quadrature not converged: relative change {estimate:.3e} exceeds {tolerance:.3e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    /// Inverse-transform sampling cannot resolve the CDF on the supplied grid.
    #[error("sampling grid too coarse: inversion residual {residual:.3e} exceeds one cell ({cell:.3e})")]
    GridTooCoarse { residual: f64, cell: f64 },

    /// Too few uncensored jump events to fit a residency distribution.
    #[error("insufficient events for residency fit: well A has {well_a}, well C has {well_c}, need {required}")]
    InsufficientEvents {
        well_a: usize,
        well_c: usize,
        required: usize,
    },

    /// Per-well chirality estimates disagree beyond their combined uncertainty.
    #[error("well A and well C estimates inconsistent: {a:.4e} vs {c:.4e} (combined sigma {sigma:.4e})")]
    InconsistentWells { a: f64, c: f64, sigma: f64 },

    /// Time step fails the drift-vs-diffusion stability criterion.
    #[error("time step unstable: max drift/diffusion ratio {ratio:.3} exceeds 1")]
    DtUnstable { ratio: f64 },

    /// A parameter violates a documented invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
