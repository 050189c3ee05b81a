//! Multidimensional inverse-transform sampling of the stationary density.
//!
//! The axisymmetric target p(q, z) is tabulated on a rectangular grid. The
//! azimuth is uniform; z is drawn by inverting the radially integrated
//! marginal CDF F_z(z) = F(z, infinity), and q by inverting the conditional
//! CDF over q at the sampled z (linear interpolation between grid rows).
//! All CDFs carry the cylindrical 2 pi q volume weight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forcefield::ForceModel;
use crate::landscape::{locate_extrema_of, pseudo_potential, AxialPotential};
use crate::medium::Regime;
use crate::optics::FieldPoint;

/// Tabulated axisymmetric density with precomputed sampling tables.
#[derive(Debug, Clone, Serialize)]
pub struct Pdf2dGrid {
    /// Radial nodes, ascending from 0, m.
    pub q: Vec<f64>,
    /// Axial nodes, ascending, m.
    pub z: Vec<f64>,
    /// Density values p[iz][iq] (arbitrary normalization), 1/m^3.
    pub p: Vec<Vec<f64>>,
    /// Marginal CDF over z at the z nodes, normalized to end at 1.
    marginal_cdf: Vec<f64>,
    /// Radial weights of each row: integral of p(q, z_j) 2 pi q dq.
    row_mass: Vec<f64>,
}

impl Pdf2dGrid {
    /// Build from explicit values. `p[iz][iq]` must be non-negative with at
    /// least one strictly positive entry.
    pub fn from_values(q: Vec<f64>, z: Vec<f64>, p: Vec<Vec<f64>>) -> Result<Self> {
        if q.len() < 2 || z.len() < 2 || p.len() != z.len() || p.iter().any(|r| r.len() != q.len())
        {
            return Err(Error::InvalidParameter(
                "pdf grid needs at least 2x2 nodes and matching value rows".into(),
            ));
        }
        if p.iter().flatten().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidParameter(
                "pdf values must be finite and non-negative".into(),
            ));
        }
        let row_mass: Vec<f64> = p.iter().map(|row| radial_mass(&q, row)).collect();
        let mut marginal_cdf = vec![0.0; z.len()];
        for j in 1..z.len() {
            marginal_cdf[j] = marginal_cdf[j - 1]
                + 0.5 * (row_mass[j] + row_mass[j - 1]) * (z[j] - z[j - 1]);
        }
        let total = *marginal_cdf.last().unwrap();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::InvalidParameter(
                "pdf has zero total mass on the grid".into(),
            ));
        }
        for v in marginal_cdf.iter_mut() {
            *v /= total;
        }
        Ok(Self {
            q,
            z,
            p,
            marginal_cdf,
            row_mass,
        })
    }

    /// Tabulate the stationary model density of the given regime:
    /// p(q, z) = exp(-[U_opt + U_chi + u_chi_diss](q, z) / kT), on
    /// [0, q_max] x [-z_max, z_max].
    pub fn from_model(model: &ForceModel, regime: Regime, nq: usize, nz: usize) -> Result<Self> {
        let potential = AxialPotential::effective(model, regime)?;
        let landscape = locate_extrema_of(&potential)?;
        let kt = model.fluid().thermal_energy();
        let (sigma_a, sigma_c) = landscape.well_sigmas(kt);
        let z_max = landscape.z_c.abs().max(landscape.z_a.abs()) + 8.0 * sigma_a.max(sigma_c);
        let sigma_q = (kt / model.radial_stiffness(0.0)).sqrt();
        let q_max = (12.0 * sigma_q).min(4.0 * model.config.beam.waist_radius);

        let q: Vec<f64> = (0..nq)
            .map(|i| q_max * i as f64 / (nq - 1) as f64)
            .collect();
        let z: Vec<f64> = (0..nz)
            .map(|j| -z_max + 2.0 * z_max * j as f64 / (nz - 1) as f64)
            .collect();

        let reactive = matches!(regime, Regime::Reactive);
        let dissipative = matches!(regime, Regime::Dissipative);
        let mut u = vec![vec![0.0; q.len()]; z.len()];
        let mut u_min = f64::INFINITY;
        for (i, &qi) in q.iter().enumerate() {
            let pseudo = if dissipative {
                Some(pseudo_potential(model, qi, 2)?)
            } else {
                None
            };
            for (j, &zj) in z.iter().enumerate() {
                let pot = model.potential(&FieldPoint::new(qi, zj)?);
                let mut val = pot.u_opt;
                if reactive {
                    val += pot.u_chi;
                }
                if let Some(ps) = &pseudo {
                    val += ps.potential(zj);
                }
                u[j][i] = val;
                u_min = u_min.min(val);
            }
        }
        let p: Vec<Vec<f64>> = u
            .iter()
            .map(|row| row.iter().map(|&v| (-(v - u_min) / kt).exp()).collect())
            .collect();
        Self::from_values(q, z, p)
    }

    /// Marginal z-CDF nodes for goodness-of-fit tests.
    pub fn marginal_z(&self) -> (&[f64], &[f64]) {
        (&self.z, &self.marginal_cdf)
    }

    /// Draw one Cartesian position from (u_z, u_q, u_theta) in [0, 1).
    pub fn sample(&self, u_z: f64, u_q: f64, u_theta: f64) -> Result<[f64; 3]> {
        let z = invert_linear_cdf(&self.z, &self.marginal_cdf, u_z)?;

        // Conditional density over q at z: interpolate between bracketing rows.
        let j = bracket(&self.z, z);
        let t = ((z - self.z[j]) / (self.z[j + 1] - self.z[j])).clamp(0.0, 1.0);
        let row: Vec<f64> = (0..self.q.len())
            .map(|i| (1.0 - t) * self.p[j][i] + t * self.p[j + 1][i])
            .collect();
        let mut cdf = vec![0.0; self.q.len()];
        for i in 1..self.q.len() {
            cdf[i] = cdf[i - 1]
                + 0.25
                    * (self.q[i] - self.q[i - 1])
                    * (row[i] * self.q[i] + row[i - 1] * self.q[i - 1])
                    * 2.0
                    * std::f64::consts::PI;
        }
        let total = *cdf.last().unwrap();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::GridTooCoarse {
                residual: 1.0,
                cell: 0.0,
            });
        }
        for v in cdf.iter_mut() {
            *v /= total;
        }
        let q = invert_linear_cdf(&self.q, &cdf, u_q)?;

        let theta = 2.0 * std::f64::consts::PI * u_theta;
        Ok([q * theta.cos(), q * theta.sin(), z])
    }

    /// Largest single-cell CDF increment of the z marginal; the resolution
    /// floor of the inversion.
    pub fn max_cell_mass(&self) -> f64 {
        self.marginal_cdf
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Radial mass of each z row (the un-normalized marginal), 1/m.
    pub fn row_mass(&self) -> &[f64] {
        &self.row_mass
    }
}

/// Trapezoid of p(q) 2 pi q dq over the radial nodes.
fn radial_mass(q: &[f64], row: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..q.len() {
        acc += 0.5
            * (q[i] - q[i - 1])
            * (row[i] * q[i] + row[i - 1] * q[i - 1])
            * 2.0
            * std::f64::consts::PI;
    }
    acc
}

/// Index j with nodes[j] <= x < nodes[j+1] (clamped to valid range).
fn bracket(nodes: &[f64], x: f64) -> usize {
    match nodes.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i.min(nodes.len() - 2),
        Err(i) => i.saturating_sub(1).min(nodes.len() - 2),
    }
}

/// Invert a monotone piecewise-linear CDF by binary search plus linear
/// interpolation. Fails with `GridTooCoarse` when the bracketing cell is
/// degenerate (zero CDF increment wider than the target resolution).
fn invert_linear_cdf(nodes: &[f64], cdf: &[f64], u: f64) -> Result<f64> {
    let u = u.clamp(0.0, 1.0);
    let mut lo = 0usize;
    let mut hi = cdf.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cdf[mid] <= u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dc = cdf[hi] - cdf[lo];
    if dc <= 0.0 {
        // Flat cell: the value is ambiguous within it; report against the
        // cell width as the resolution.
        if u > cdf[hi] || u < cdf[lo] {
            return Err(Error::GridTooCoarse {
                residual: (u - cdf[lo]).abs(),
                cell: dc,
            });
        }
        return Ok(nodes[lo]);
    }
    let t = (u - cdf[lo]) / dc;
    Ok(nodes[lo] + t * (nodes[hi] - nodes[lo]))
}
