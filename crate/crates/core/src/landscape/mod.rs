//! On-axis bistable landscape analytics.
//!
//! The optical potential U_opt(0, z) forms a double well whose wells A and C
//! sit symmetrically around the barrier B at the waist. This module locates
//! the extrema, calibrates the barrier height through the beam intensity,
//! evaluates steepest-descent (Kramers) escape rates together with their
//! brute-force quadrature counterparts, applies the chiral reactive and
//! dissipative corrections, and produces stationary probability densities in
//! one and three dimensions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forcefield::ForceModel;
use crate::medium::Regime;
use crate::optics::FieldPoint;

/// Tolerance on the helicity selection rules (|h+ +- h-|).
const SELECTION_TOL: f64 = 1e-12;

/// Wells, barrier, curvatures and barrier heights of the double well.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BistableLandscape {
    /// Well A position z_A < 0, m.
    pub z_a: f64,
    /// Barrier position z_B, m.
    pub z_b: f64,
    /// Well C position z_C > 0, m.
    pub z_c: f64,
    /// |d2U/dz2| at z_A, J/m^2 (equals 2 a^2 in steepest-descent notation).
    pub curvature_a: f64,
    /// |d2U/dz2| at z_B, J/m^2.
    pub curvature_b: f64,
    /// |d2U/dz2| at z_C, J/m^2.
    pub curvature_c: f64,
    /// U(z_B) - U(z_A), J.
    pub barrier_ab: f64,
    /// U(z_B) - U(z_C), J.
    pub barrier_cb: f64,
    /// Inter-well distance delta-ell = z_C - z_A, m.
    pub well_separation: f64,
}

impl BistableLandscape {
    /// Thermal widths sqrt(kT / curvature) of wells A and C, m.
    pub fn well_sigmas(&self, thermal_energy: f64) -> (f64, f64) {
        (
            (thermal_energy / self.curvature_a).sqrt(),
            (thermal_energy / self.curvature_c).sqrt(),
        )
    }

    /// Thermal width of the barrier region, m.
    pub fn barrier_sigma(&self, thermal_energy: f64) -> f64 {
        (thermal_energy / self.curvature_b).sqrt()
    }
}

/// Escape rates over the barrier in both directions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EscapeRates {
    /// kappa_{A->C}, 1/s.
    pub rate_ac: f64,
    /// kappa_{C->A}, 1/s.
    pub rate_ca: f64,
    pub regime: Regime,
}

impl EscapeRates {
    pub fn ratio(&self) -> f64 {
        self.rate_ac / self.rate_ca
    }
}

/// Taylor-integrated stand-in for the slowly varying dissipative force at a
/// fixed radius: u(z) = -c0 z - sum_{n>=1} c_{2n} z^{2n+1} / (2n+1).
#[derive(Debug, Clone, Serialize)]
pub struct PseudoPotential {
    /// Even expansion order of the force (2, 4 or 6).
    pub expansion_order: usize,
    /// Force Taylor coefficients [c0, c2, ...], N/m^{2n}.
    pub force_coefficients: Vec<f64>,
    /// Radius q at which the expansion was taken, m.
    pub reference_radius: f64,
}

impl PseudoPotential {
    /// u_chi_diss(z), J.
    pub fn potential(&self, z: f64) -> f64 {
        let z2 = z * z;
        let mut power = z;
        let mut u = 0.0;
        for (n, &c) in self.force_coefficients.iter().enumerate() {
            u -= c * power / (2 * n + 1) as f64;
            power *= z2;
        }
        u
    }

    /// The represented force -du/dz, N.
    pub fn force(&self, z: f64) -> f64 {
        let z2 = z * z;
        let mut power = 1.0;
        let mut f = 0.0;
        for &c in &self.force_coefficients {
            f += c * power;
            power *= z2;
        }
        f
    }

    /// du/dz, N.
    pub fn potential_derivative(&self, z: f64) -> f64 {
        -self.force(z)
    }

    /// d2u/dz2, J/m^3.
    pub fn potential_second_derivative(&self, z: f64) -> f64 {
        let z2 = z * z;
        let mut acc = 0.0;
        let mut power = z;
        for (n, &c) in self.force_coefficients.iter().enumerate().skip(1) {
            acc -= c * (2 * n) as f64 * power;
            power *= z2;
        }
        acc
    }
}

/// Heat, entropy and free-energy bookkeeping of the chiral coupling.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChiralThermodynamics {
    /// Dissipative chiral heat dQ_chi = F(0,0) dl / kT, dimensionless.
    /// Zero in the reactive regime.
    pub heat_transfer: f64,
    /// F(0,0) dl, J.
    pub heat_transfer_joules: f64,
    /// Entropy production dS_chi = F(0,0) dl / T, J/K.
    pub entropy_production: f64,
    /// Reactive Helmholtz shift dF_chi,A = U_chi(z_B) - U_chi(z_A), J.
    /// Absent in the dissipative regime.
    pub free_energy_shift_a: Option<f64>,
    /// Reactive Helmholtz shift dF_chi,C, J.
    pub free_energy_shift_c: Option<f64>,
}

/// On-axis effective potential with analytic derivatives.
#[derive(Debug, Clone)]
pub struct AxialPotential {
    model: ForceModel,
    include_chi: bool,
    pseudo: Option<PseudoPotential>,
}

impl AxialPotential {
    /// The bare optical potential U_opt(0, z): the achiral reference all
    /// chiral corrections multiply onto.
    pub fn optical(model: &ForceModel) -> Self {
        Self {
            model: model.clone(),
            include_chi: false,
            pseudo: None,
        }
    }

    /// Regime-appropriate effective potential:
    /// achiral -> U_opt, reactive -> U_opt + U_chi,
    /// dissipative -> U_opt + u_chi_diss (order-2 pseudo-potential at q = 0).
    pub fn effective(model: &ForceModel, regime: Regime) -> Result<Self> {
        check_regime(model, regime)?;
        let pseudo = match regime {
            Regime::Dissipative => Some(pseudo_potential(model, 0.0, 2)?),
            _ => None,
        };
        Ok(Self {
            model: model.clone(),
            include_chi: matches!(regime, Regime::Reactive),
            pseudo,
        })
    }

    pub fn value(&self, z: f64) -> f64 {
        self.derivs(z)[0]
    }

    pub fn derivative(&self, z: f64) -> f64 {
        self.derivs(z)[1]
    }

    pub fn second_derivative(&self, z: f64) -> f64 {
        self.derivs(z)[2]
    }

    fn derivs(&self, z: f64) -> [f64; 3] {
        let (u_opt, u_chi) = self.model.axial_potential_derivatives(z);
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = u_opt[i];
            if self.include_chi {
                out[i] += u_chi[i];
            }
        }
        if let Some(pseudo) = &self.pseudo {
            out[0] += pseudo.potential(z);
            out[1] += pseudo.potential_derivative(z);
            out[2] += pseudo.potential_second_derivative(z);
        }
        out
    }

    pub fn model(&self) -> &ForceModel {
        &self.model
    }
}

fn check_regime(model: &ForceModel, regime: Regime) -> Result<()> {
    let pol = &model.config.polarization;
    let sum = pol.helicity_sum();
    let diff = pol.helicity_difference();
    match regime {
        Regime::Achiral => {
            if pol.helicity_plus.abs() > SELECTION_TOL || pol.helicity_minus.abs() > SELECTION_TOL
            {
                return Err(Error::RegimeMismatch(format!(
                    "achiral regime requires h+ = h- = 0, got ({}, {})",
                    pol.helicity_plus, pol.helicity_minus
                )));
            }
        }
        Regime::Reactive => {
            if sum.abs() > SELECTION_TOL {
                return Err(Error::RegimeMismatch(format!(
                    "reactive regime requires h+ = -h- (zero chiral flux), got h+ + h- = {sum}"
                )));
            }
        }
        Regime::Dissipative => {
            if diff.abs() > SELECTION_TOL {
                return Err(Error::RegimeMismatch(format!(
                    "dissipative regime requires h+ = h- (zero chiral density), got h+ - h- = {diff}"
                )));
            }
        }
    }
    Ok(())
}

/// Locate wells and barrier of an axial potential by scanning its analytic
/// derivative over |z| <= lambda / (2n) and refining each sign change by
/// bisection. Exactly two minima around one interior maximum are required.
pub fn locate_extrema_of(potential: &AxialPotential) -> Result<BistableLandscape> {
    let beam = &potential.model().config.beam;
    let fluid = &potential.model().config.fluid;
    let half_fringe = beam.vacuum_wavelength / (2.0 * fluid.refractive_index());

    let n_scan = 4096;
    let mut extrema: Vec<(f64, f64)> = Vec::new(); // (z, d2U/dz2)
    let mut prev_z = -half_fringe;
    let mut prev_d = potential.derivative(prev_z);
    for i in 1..=n_scan {
        let z = -half_fringe + 2.0 * half_fringe * i as f64 / n_scan as f64;
        let d = potential.derivative(z);
        if prev_d == 0.0 {
            extrema.push((prev_z, potential.second_derivative(prev_z)));
        } else if prev_d * d < 0.0 {
            let root = bisect(|x| potential.derivative(x), prev_z, z);
            extrema.push((root, potential.second_derivative(root)));
        }
        prev_z = z;
        prev_d = d;
    }

    let minima: Vec<(f64, f64)> = extrema.iter().copied().filter(|e| e.1 > 0.0).collect();
    let maxima: Vec<(f64, f64)> = extrema.iter().copied().filter(|e| e.1 < 0.0).collect();
    if minima.len() != 2 || maxima.len() != 1 {
        return Err(Error::NotBistable {
            minima: minima.len(),
            maxima: maxima.len(),
        });
    }
    let (mut z_a, mut curvature_a) = minima[0];
    let (mut z_b, curvature_b) = maxima[0];
    let (mut z_c, mut curvature_c) = minima[1];
    if !(z_a < z_b && z_b < z_c) {
        return Err(Error::NotBistable {
            minima: 2,
            maxima: 1,
        });
    }
    if z_b.abs() < 1e-18 {
        z_b = 0.0;
    }

    // If the potential is even in z (the delta-tuned symmetric landscape),
    // mirror one refined extremum so the symmetry holds exactly; without this
    // the independently bisected wells agree only to root-finder tolerance.
    let probe = z_c.max(-z_a);
    let even = |s: f64| {
        let (p, m) = (potential.value(s * probe), potential.value(-s * probe));
        (p - m).abs() <= 1e-12 * p.abs().max(m.abs())
    };
    let mut symmetric = false;
    if z_b == 0.0 && even(0.5) && even(1.0) && even(1.5) {
        symmetric = true;
        z_c = 0.5 * (z_c - z_a);
        z_a = -z_c;
        let c = potential.second_derivative(z_c);
        curvature_a = c;
        curvature_c = c;
    }

    let u_a = potential.value(z_a);
    let u_b = potential.value(z_b);
    let u_c = if symmetric { u_a } else { potential.value(z_c) };
    let landscape = BistableLandscape {
        z_a,
        z_b,
        z_c,
        curvature_a: curvature_a.abs(),
        curvature_b: curvature_b.abs(),
        curvature_c: curvature_c.abs(),
        barrier_ab: u_b - u_a,
        barrier_cb: u_b - u_c,
        well_separation: z_c - z_a,
    };
    if landscape.barrier_ab <= 0.0 || landscape.barrier_cb <= 0.0 {
        return Err(Error::NotBistable {
            minima: 2,
            maxima: 1,
        });
    }
    Ok(landscape)
}

/// Locate the extrema of the regime-effective potential.
pub fn locate_extrema(model: &ForceModel, regime: Regime) -> Result<BistableLandscape> {
    locate_extrema_of(&AxialPotential::effective(model, regime)?)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

/// Field amplitude that sets the optical barrier U_opt(z_B) - U_opt(z_A) to
/// `target_barrier`. Every potential term is bilinear in the field, so the
/// rescaling E0' = E0 sqrt(target / current) is exact in one step.
pub fn calibrate_intensity(model: &ForceModel, target_barrier: f64) -> Result<f64> {
    if target_barrier <= 0.0 {
        return Err(Error::InvalidParameter(
            "target barrier must be positive".into(),
        ));
    }
    let landscape = locate_extrema_of(&AxialPotential::optical(model))?;
    let e0 = model.config.beam.field_amplitude;
    Ok(e0 * (target_barrier / landscape.barrier_ab).sqrt())
}

/// Steepest-descent (Kramers) escape rates from the landscape curvatures:
/// kappa_{A->C} = a b / (pi gamma) exp(-dU_AB / kT) with a = sqrt(curv_A / 2).
pub fn kramers_rates(
    landscape: &BistableLandscape,
    thermal_energy: f64,
    drag: f64,
) -> EscapeRates {
    let a = (0.5 * landscape.curvature_a).sqrt();
    let b = (0.5 * landscape.curvature_b).sqrt();
    let c = (0.5 * landscape.curvature_c).sqrt();
    let prefactor = 1.0 / (std::f64::consts::PI * drag);
    EscapeRates {
        rate_ac: a * b * prefactor * (-landscape.barrier_ab / thermal_energy).exp(),
        rate_ca: c * b * prefactor * (-landscape.barrier_cb / thermal_energy).exp(),
        regime: Regime::Achiral,
    }
}

/// Escape rates under reactive chiral coupling:
/// kappa~_i = kappa_i exp(-[U_chi(z_B) - U_chi(z_i)] / kT).
///
/// `landscape` must be the achiral reference landscape of U_opt; the chiral
/// potential enters only through the Boltzmann factors. The z-even chiral
/// density keeps the equilibrium constant at exactly 1.
pub fn reactive_rates(
    landscape: &BistableLandscape,
    model: &ForceModel,
    drag: f64,
) -> Result<(EscapeRates, ChiralThermodynamics)> {
    check_regime(model, Regime::Reactive)?;
    let kt = model.fluid().thermal_energy();
    let base = kramers_rates(landscape, kt, drag);

    let u_chi = |z: f64| model.axial_potential_derivatives(z).1[0];
    let shift_a = u_chi(landscape.z_b) - u_chi(landscape.z_a);
    let shift_c = u_chi(landscape.z_b) - u_chi(landscape.z_c);

    let rates = EscapeRates {
        rate_ac: base.rate_ac * (-shift_a / kt).exp(),
        rate_ca: base.rate_ca * (-shift_c / kt).exp(),
        regime: Regime::Reactive,
    };
    let thermo = ChiralThermodynamics {
        heat_transfer: 0.0,
        heat_transfer_joules: 0.0,
        entropy_production: 0.0,
        free_energy_shift_a: Some(shift_a),
        free_energy_shift_c: Some(shift_c),
    };
    Ok((rates, thermo))
}

/// Escape rates under dissipative chiral coupling:
/// kappa^_{A->C} = kappa_{A->C} exp(+F(0,0)(z_B - z_A) / kT), likewise for
/// C->A, so on the symmetric landscape the ratio is exp(F(0,0) dl / kT).
/// The work F(0,0) dl is released to the bath as heat, with entropy
/// production F(0,0) dl / T.
pub fn dissipative_rates(
    landscape: &BistableLandscape,
    model: &ForceModel,
    drag: f64,
) -> Result<(EscapeRates, ChiralThermodynamics)> {
    check_regime(model, Regime::Dissipative)?;
    let kt = model.fluid().thermal_energy();
    let temperature = model.fluid().temperature;
    let base = kramers_rates(landscape, kt, drag);
    let f0 = model.chiral_dissipative_z(0.0, 0.0);

    let rates = EscapeRates {
        rate_ac: base.rate_ac * (f0 * (landscape.z_b - landscape.z_a) / kt).exp(),
        rate_ca: base.rate_ca * (f0 * (landscape.z_b - landscape.z_c) / kt).exp(),
        regime: Regime::Dissipative,
    };
    let heat_joules = f0 * landscape.well_separation;
    let thermo = ChiralThermodynamics {
        heat_transfer: heat_joules / kt,
        heat_transfer_joules: heat_joules,
        entropy_production: heat_joules / temperature,
        free_energy_shift_a: None,
        free_energy_shift_c: None,
    };
    Ok((rates, thermo))
}

/// Taylor-expand the dissipative chiral force in z about (q, 0) up to the
/// given even order and integrate it into a pseudo-potential.
pub fn pseudo_potential(model: &ForceModel, q: f64, order: usize) -> Result<PseudoPotential> {
    if !matches!(order, 2 | 4 | 6) {
        return Err(Error::InvalidParameter(format!(
            "pseudo-potential order must be 2, 4 or 6, got {order}"
        )));
    }
    // Only the flux-borne dissipative force integrates into this form; a
    // chiral density must be absent.
    check_regime(model, Regime::Dissipative)?;
    let taylor = model.w_trap_axial_taylor(q);
    let c = model.dissipative_coefficient();
    let n_coeffs = order / 2 + 1;
    Ok(PseudoPotential {
        expansion_order: order,
        force_coefficients: taylor[..n_coeffs].iter().map(|t| c * t).collect(),
        reference_radius: q,
    })
}

/// Normalized stationary density on the optical axis.
#[derive(Debug, Clone, Serialize)]
pub struct AxialPdf {
    /// Grid positions, m.
    pub z: Vec<f64>,
    /// Normalized density p(0, z), 1/m; Simpson-integrates to 1.
    pub p: Vec<f64>,
    /// Landscape of the effective potential the density derives from.
    pub landscape: BistableLandscape,
}

impl AxialPdf {
    /// CDF on the grid by trapezoid accumulation, normalized to end at 1.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut cdf = vec![0.0; self.z.len()];
        for i in 1..self.z.len() {
            cdf[i] =
                cdf[i - 1] + 0.5 * (self.p[i] + self.p[i - 1]) * (self.z[i] - self.z[i - 1]);
        }
        let total = *cdf.last().unwrap();
        for v in cdf.iter_mut() {
            *v /= total;
        }
        cdf
    }
}

/// Stationary axial PDF p(0, z) = C exp(-phi_eff(z) / kT) on a grid over
/// [z_A - 6 sigma_A, z_C + 6 sigma_C], Simpson-normalized to 1.
pub fn stationary_pdf_axis(
    model: &ForceModel,
    regime: Regime,
    n_points: usize,
) -> Result<AxialPdf> {
    let potential = AxialPotential::effective(model, regime)?;
    let landscape = locate_extrema_of(&potential)?;
    let kt = model.fluid().thermal_energy();
    let (sigma_a, sigma_c) = landscape.well_sigmas(kt);
    let lo = landscape.z_a - 6.0 * sigma_a;
    let hi = landscape.z_c + 6.0 * sigma_c;

    // Odd point count for Simpson; at least 9.
    let n = (n_points.max(9)) | 1;
    let h = (hi - lo) / (n - 1) as f64;
    let z: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    let u_ref = potential
        .value(landscape.z_a)
        .min(potential.value(landscape.z_c));
    let mut p: Vec<f64> = z
        .iter()
        .map(|&zi| (-(potential.value(zi) - u_ref) / kt).exp())
        .collect();

    let integral = simpson(&p, h);
    let coarse = simpson_strided(&p, h, 2);
    let rel = ((integral - coarse) / integral).abs();
    if rel > 1e-8 {
        return Err(Error::QuadratureNotConverged {
            estimate: rel,
            tolerance: 1e-8,
        });
    }
    for v in p.iter_mut() {
        *v /= integral;
    }
    Ok(AxialPdf { z, p, landscape })
}

fn simpson(values: &[f64], h: f64) -> f64 {
    debug_assert!(values.len() % 2 == 1, "Simpson needs an odd point count");
    let n = values.len();
    let mut sum = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    sum * h / 3.0
}

/// Simpson over every `stride`-th sample, for convergence estimates.
fn simpson_strided(values: &[f64], h: f64, stride: usize) -> f64 {
    let sub: Vec<f64> = values.iter().step_by(stride).copied().collect();
    simpson(&sub, h * stride as f64)
}

/// Brute-force flux-over-population escape rates of a 1D axial potential:
///
/// kappa^{-1} = (1/D) int_well dz' e^{-U(z')/kT} int_{z'}^{z_abs} du e^{U(u)/kT},
///
/// with the absorbing point at the opposite well minimum. This is the
/// quadrature oracle against which the steepest-descent formula is checked;
/// it carries the full anharmonicity of the landscape.
pub fn quadrature_rates(
    potential: &AxialPotential,
    landscape: &BistableLandscape,
    thermal_energy: f64,
    drag: f64,
) -> EscapeRates {
    let d = thermal_energy / drag;
    // Walk out from the wells until the confining walls rise 60 kT above the
    // well floor; the truncated tails contribute at the e^{-60} level.
    let (sigma_a, sigma_c) = landscape.well_sigmas(thermal_energy);
    let walk = |start: f64, step: f64, reference: f64| {
        let mut z = start;
        for _ in 0..100_000 {
            if potential.value(z) - reference > 60.0 * thermal_energy {
                break;
            }
            z += step;
        }
        z
    };
    let lo = walk(
        landscape.z_a,
        -sigma_a / 16.0,
        potential.value(landscape.z_a),
    );
    let hi = walk(
        landscape.z_c,
        sigma_c / 16.0,
        potential.value(landscape.z_c),
    );
    let n = 16_385usize;

    let u_barrier = potential.value(landscape.z_b);
    let rate = |from_a: bool| {
        let (outer_lo, outer_hi, abs_point, u_well) = if from_a {
            (
                lo,
                landscape.z_b,
                landscape.z_c,
                potential.value(landscape.z_a),
            )
        } else {
            (
                landscape.z_b,
                hi,
                landscape.z_a,
                potential.value(landscape.z_c),
            )
        };

        let a = outer_lo.min(abs_point);
        let b = outer_hi.max(abs_point);
        let h = (b - a) / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
        let boltz_up: Vec<f64> = grid
            .iter()
            .map(|&z| ((potential.value(z) - u_barrier) / thermal_energy).exp())
            .collect();
        // Inner integral int_{z'}^{abs} e^{(U - U_B)/kT} du accumulated FROM
        // the absorbing point toward the well, so that values in the barrier
        // region never difference against the enormous outer-wall values.
        let mut inner = vec![0.0; n];
        if from_a {
            // Absorbing point is the right end of the grid.
            for i in (0..n - 1).rev() {
                inner[i] = inner[i + 1] + 0.5 * (boltz_up[i] + boltz_up[i + 1]) * h;
            }
        } else {
            // Absorbing point is the left end; inner = int_{abs}^{z'}.
            for i in 1..n {
                inner[i] = inner[i - 1] + 0.5 * (boltz_up[i] + boltz_up[i - 1]) * h;
            }
        }

        let mut integral = 0.0;
        let mut prev: Option<f64> = None;
        for (i, &z) in grid.iter().enumerate() {
            if z < outer_lo - 0.5 * h || z > outer_hi + 0.5 * h {
                continue;
            }
            let val = (-(potential.value(z) - u_well) / thermal_energy).exp() * inner[i];
            if let Some(p) = prev {
                integral += 0.5 * (p + val) * h;
            }
            prev = Some(val);
        }
        // Reassemble the split exponent references.
        d / (integral * ((u_barrier - u_well) / thermal_energy).exp())
    };

    EscapeRates {
        rate_ac: rate(true),
        rate_ca: rate(false),
        regime: Regime::Achiral,
    }
}

/// 3D population ratio n_C / n_A from the stationary nonequilibrium density
/// p(q, z) = C exp(-[U_opt(q, z) + u_chi_diss(q, z)] / kT), integrated with
/// the 2 pi q volume weight over z > 0 versus z < 0.
///
/// The per-q pseudo-potential retains the radial dependence of the force
/// expansion. Fails with `QuadratureNotConverged` if halving the grid moves
/// the ratio by more than 1e-4 relative.
pub fn population_ratio_3d(model: &ForceModel, order: usize) -> Result<f64> {
    check_regime(model, Regime::Dissipative)?;
    let kt = model.fluid().thermal_energy();
    let landscape = locate_extrema_of(&AxialPotential::optical(model))?;
    let (sigma_a, sigma_c) = landscape.well_sigmas(kt);
    let z_max = landscape.z_c.abs().max(landscape.z_a.abs()) + 8.0 * sigma_a.max(sigma_c);

    // The radial confinement is far tighter than the beam waist; clip the
    // domain where the radial Boltzmann factor drops below ~e^{-200}.
    let sigma_q = (kt / model.radial_stiffness(0.0)).sqrt();
    let q_max = (20.0 * sigma_q).min(4.0 * model.config.beam.waist_radius);

    let ratio_at = |nz: usize, nq: usize| -> f64 {
        let hz = z_max / nz as f64;
        let hq = q_max / nq as f64;
        // First pass: potential values, tracking the global minimum.
        let mut u_up = vec![0.0; (nq + 1) * (nz + 1)];
        let mut u_dn = vec![0.0; (nq + 1) * (nz + 1)];
        let mut u_min = f64::INFINITY;
        for iq in 0..=nq {
            let q = hq * iq as f64;
            let pseudo = pseudo_potential(model, q, order).expect("regime already checked");
            for iz in 0..=nz {
                let z = hz * iz as f64;
                let idx = iq * (nz + 1) + iz;
                let up = model.potential(&FieldPoint::new(q, z).unwrap()).u_opt
                    + pseudo.potential(z);
                let dn = model.potential(&FieldPoint::new(q, -z).unwrap()).u_opt
                    + pseudo.potential(-z);
                u_up[idx] = up;
                u_dn[idx] = dn;
                u_min = u_min.min(up).min(dn);
            }
        }
        // Second pass: Simpson in both directions, 2 pi q weight folded in.
        let (mut upper, mut lower) = (0.0, 0.0);
        for iq in 0..=nq {
            let q = hq * iq as f64;
            let wq = simpson_weight(iq, nq) * q;
            let (mut col_up, mut col_dn) = (0.0, 0.0);
            for iz in 0..=nz {
                let wz = simpson_weight(iz, nz);
                let idx = iq * (nz + 1) + iz;
                col_up += wz * (-(u_up[idx] - u_min) / kt).exp();
                col_dn += wz * (-(u_dn[idx] - u_min) / kt).exp();
            }
            upper += wq * col_up;
            lower += wq * col_dn;
        }
        upper / lower
    };

    let coarse = ratio_at(512, 128);
    let fine = ratio_at(1024, 256);
    let rel = ((fine - coarse) / fine).abs();
    if rel > 1e-4 {
        return Err(Error::QuadratureNotConverged {
            estimate: rel,
            tolerance: 1e-4,
        });
    }
    Ok(fine)
}

fn simpson_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Chiral-to-interferential force ratio surface over (h+, dtheta).
#[derive(Debug, Clone, Serialize)]
pub struct SweepSurface {
    pub mode: Regime,
    pub helicities: Vec<f64>,
    pub axis_angles: Vec<f64>,
    /// Max_z |F_chi| / Max_z |F_inter| per (helicity, axis angle); +inf where
    /// the interference force vanishes identically, 0 where both vanish.
    pub ratios: Vec<Vec<f64>>,
}

/// Sweep the chiral-to-interferential force ratio over (h+, dtheta).
///
/// The reactive sweep sets h- = -h+, the dissipative one h- = h+; for each
/// grid point the phase delay is tuned so the interference potential is
/// maximal at the trap center: delta = pi + atan2(h1 sin dt, h2 cos dt).
pub fn polarization_sweep(
    model: &ForceModel,
    mode: Regime,
    helicities: &[f64],
    axis_angles: &[f64],
) -> Result<SweepSurface> {
    if matches!(mode, Regime::Achiral) {
        return Err(Error::InvalidParameter(
            "sweep mode must be reactive or dissipative".into(),
        ));
    }
    let beam = model.config.beam;
    let fluid = model.config.fluid;
    let half_fringe = beam.vacuum_wavelength / (2.0 * fluid.refractive_index());
    let n_scan = 1024;

    let mut ratios = Vec::with_capacity(helicities.len());
    for &h in helicities {
        let mut row = Vec::with_capacity(axis_angles.len());
        for &dtheta in axis_angles {
            let h_minus = match mode {
                Regime::Reactive => -h,
                _ => h,
            };
            let mut pol = crate::optics::PolarizationSettings::new(h, h_minus, 0.0, dtheta)?;
            pol.phase_delay = std::f64::consts::PI
                + f64::atan2(pol.h1() * dtheta.sin(), pol.h2() * dtheta.cos());
            let cfg = crate::optics::TrapConfiguration {
                polarization: pol,
                ..model.config
            };
            let swept = ForceModel::new(cfg, model.polarizabilities, model.options);

            let mut max_inter: f64 = 0.0;
            let mut max_chi: f64 = 0.0;
            for i in 0..=n_scan {
                let z = -half_fringe + 2.0 * half_fringe * i as f64 / n_scan as f64;
                let d = swept.decompose(&FieldPoint::new(0.0, z).unwrap());
                let f_chi = match mode {
                    Regime::Reactive => d.chiral_reactive.f_z,
                    _ => d.chiral_dissipative.f_z,
                };
                max_chi = max_chi.max(f_chi.abs());
                max_inter = max_inter.max(swept.interference_force_z(z).abs());
            }
            row.push(if max_inter == 0.0 {
                if max_chi == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                max_chi / max_inter
            });
        }
        ratios.push(row);
    }
    Ok(SweepSurface {
        mode,
        helicities: helicities.to_vec(),
        axis_angles: axis_angles.to_vec(),
        ratios,
    })
}
