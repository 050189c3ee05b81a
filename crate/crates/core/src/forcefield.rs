//! Dipolar optical forces in the standing wave.
//!
//! Six components are assembled from analytic gradients of the field scalars:
//! achiral reactive (electric and magnetic) gradient forces, achiral
//! dissipative (purely azimuthal, from the curls of the ellipticities since
//! the Poynting vector vanishes), and the two chiral forces
//!
//! F_chi_reac = Re[chi] grad K / (omega sqrt(eps mu)),
//! F_chi_diss = sqrt(eps mu) Im[chi] 2 Phi        (axial).
//!
//! Gradients are closed-form; finite differences of the directly superposed
//! complex fields serve as the independent oracle in the test suite.

use serde::{Deserialize, Serialize};

use crate::medium::FluidMedium;
use crate::optics::{FieldPoint, PointFields, TrapConfiguration};
use crate::particle::Polarizabilities;

/// Force in cylindrical components, N.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceVector {
    pub f_rho: f64,
    pub f_theta: f64,
    pub f_z: f64,
}

impl ForceVector {
    pub fn norm(&self) -> f64 {
        (self.f_rho * self.f_rho + self.f_theta * self.f_theta + self.f_z * self.f_z).sqrt()
    }

    fn add(&self, other: &ForceVector) -> ForceVector {
        ForceVector {
            f_rho: self.f_rho + other.f_rho,
            f_theta: self.f_theta + other.f_theta,
            f_z: self.f_z + other.f_z,
        }
    }
}

/// The six dipolar force components at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceDecomposition {
    /// Re[alpha] grad W_E.
    pub electric_reactive: ForceVector,
    /// Re[beta] grad W_H.
    pub magnetic_reactive: ForceVector,
    /// -Im[alpha] (curl Phi_E) / omega, azimuthal.
    pub electric_dissipative: ForceVector,
    /// -Im[beta] (curl Phi_H) / omega, azimuthal.
    pub magnetic_dissipative: ForceVector,
    /// Re[chi] grad K / k, conservative.
    pub chiral_reactive: ForceVector,
    /// 2 sqrt(eps mu) Im[chi] Phi, axial and non-conservative.
    pub chiral_dissipative: ForceVector,
}

/// Potential energies at one point, J.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    /// U_opt = -Re[alpha] W_E (plus -Re[beta] W_H when the magnetic force is enabled).
    pub u_opt: f64,
    /// U_chi = -Re[chi] K / (omega sqrt(eps mu)).
    pub u_chi: f64,
    /// U_pot = U_opt + U_chi.
    pub u_pot: f64,
}

/// Which force contributions enter the total used by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForceOptions {
    /// Include Re[beta] grad W_H and Im[beta] azimuthal terms. Off by default:
    /// with a chiral sphere beta picks up a kappa^2 contribution large enough
    /// to destroy the finely balanced double well.
    pub include_magnetic: bool,
    /// Include the achiral azimuthal dissipative forces in the 3D total.
    /// They play no role in the axial analytics.
    pub include_azimuthal: bool,
}

impl Default for ForceOptions {
    fn default() -> Self {
        Self {
            include_magnetic: false,
            include_azimuthal: true,
        }
    }
}

/// Immutable, reentrant force evaluator shared by all simulation workers.
#[derive(Debug, Clone)]
pub struct ForceModel {
    pub config: TrapConfiguration,
    pub polarizabilities: Polarizabilities,
    pub options: ForceOptions,
    // Combined coefficients for the hot-path total force:
    // F_rho/z = a_trap d(W_trap) + a_cos d(T_c) + a_sin d(T_s) [+ c_diss W_trap on z]
    // F_theta = b_trap dq(W_trap) + b_cos dq(T_c) + b_sin dq(T_s)
    a_trap: f64,
    a_cos: f64,
    a_sin: f64,
    b_trap: f64,
    b_cos: f64,
    b_sin: f64,
    c_diss: f64,
    // Per-component coefficients for the decomposition.
    w_cos: f64,
    w_sin: f64,
    phi_cos: f64,
    phi_sin: f64,
    half_sum: f64,
    difference: f64,
}

impl ForceModel {
    pub fn new(
        config: TrapConfiguration,
        polarizabilities: Polarizabilities,
        options: ForceOptions,
    ) -> Self {
        let pol = &config.polarization;
        let (sin_t, cos_t) = pol.axis_angle.sin_cos();
        let (h1, h2) = (pol.h1(), pol.h2());
        let w_cos = cos_t * h2;
        let w_sin = sin_t * h1;
        let phi_cos = cos_t * h1;
        let phi_sin = sin_t * h2;
        let half_sum = 0.5 * pol.helicity_sum();
        let difference = pol.helicity_difference();
        let k = config.beam.wavenumber();

        let (re_a, im_a) = (polarizabilities.alpha.re, polarizabilities.alpha.im);
        let (re_b, im_b) = if options.include_magnetic {
            (polarizabilities.beta.re, polarizabilities.beta.im)
        } else {
            (0.0, 0.0)
        };
        let (re_c, im_c) = (polarizabilities.chi.re, polarizabilities.chi.im);
        let (b_trap, b_cos, b_sin) = if options.include_azimuthal {
            (
                -half_sum * (im_a + im_b),
                (im_a - im_b) * phi_cos,
                (im_a - im_b) * phi_sin,
            )
        } else {
            (0.0, 0.0, 0.0)
        };

        Self {
            config,
            polarizabilities,
            options,
            a_trap: re_a + re_b - difference * re_c,
            a_cos: (re_a - re_b) * w_cos,
            a_sin: (re_a - re_b) * w_sin,
            b_trap,
            b_cos,
            b_sin,
            c_diss: -2.0 * pol.helicity_sum() * k * im_c,
            w_cos,
            w_sin,
            phi_cos,
            phi_sin,
            half_sum,
            difference,
        }
    }

    pub fn fluid(&self) -> &FluidMedium {
        &self.config.fluid
    }

    /// Total force in cylindrical components. This is the simulator hot path.
    #[inline]
    pub fn total_cyl(&self, q: f64, z: f64) -> ForceVector {
        let pf = self.config.point_fields(q, z);
        ForceVector {
            f_rho: self.a_trap * pf.dq_w_trap + self.a_cos * pf.dq_t_cos + self.a_sin * pf.dq_t_sin,
            f_theta: self.b_trap * pf.dq_w_trap
                + self.b_cos * pf.dq_t_cos
                + self.b_sin * pf.dq_t_sin,
            f_z: self.a_trap * pf.dz_w_trap
                + self.a_cos * pf.dz_t_cos
                + self.a_sin * pf.dz_t_sin
                + self.c_diss * pf.w_trap,
        }
    }

    /// All six force components, for diagnostics and field maps.
    pub fn decompose(&self, p: &FieldPoint) -> ForceDecomposition {
        let pf = self.config.point_fields(p.radius, p.axial);
        let (re_a, im_a) = (self.polarizabilities.alpha.re, self.polarizabilities.alpha.im);
        let (re_b, im_b) = (self.polarizabilities.beta.re, self.polarizabilities.beta.im);
        let re_c = self.polarizabilities.chi.re;

        let dq_inter = self.w_cos * pf.dq_t_cos + self.w_sin * pf.dq_t_sin;
        let dz_inter = self.w_cos * pf.dz_t_cos + self.w_sin * pf.dz_t_sin;
        // d/dq of Phi_{E,z} / omega and its interference part.
        let dq_phi_inter = self.phi_cos * pf.dq_t_cos + self.phi_sin * pf.dq_t_sin;
        let dq_phi_trap = -self.half_sum * pf.dq_w_trap;

        ForceDecomposition {
            electric_reactive: ForceVector {
                f_rho: re_a * (pf.dq_w_trap + dq_inter),
                f_theta: 0.0,
                f_z: re_a * (pf.dz_w_trap + dz_inter),
            },
            magnetic_reactive: ForceVector {
                f_rho: re_b * (pf.dq_w_trap - dq_inter),
                f_theta: 0.0,
                f_z: re_b * (pf.dz_w_trap - dz_inter),
            },
            electric_dissipative: ForceVector {
                f_rho: 0.0,
                f_theta: im_a * (dq_phi_trap + dq_phi_inter),
                f_z: 0.0,
            },
            magnetic_dissipative: ForceVector {
                f_rho: 0.0,
                f_theta: im_b * (dq_phi_trap - dq_phi_inter),
                f_z: 0.0,
            },
            chiral_reactive: ForceVector {
                f_rho: -self.difference * re_c * pf.dq_w_trap,
                f_theta: 0.0,
                f_z: -self.difference * re_c * pf.dz_w_trap,
            },
            chiral_dissipative: ForceVector {
                f_rho: 0.0,
                f_theta: 0.0,
                f_z: self.c_diss * pf.w_trap,
            },
        }
    }

    /// Sum of the reactive (conservative) components honoring the options.
    pub fn reactive_total(&self, p: &FieldPoint) -> ForceVector {
        let d = self.decompose(p);
        let mut f = d.electric_reactive.add(&d.chiral_reactive);
        if self.options.include_magnetic {
            f = f.add(&d.magnetic_reactive);
        }
        f
    }

    /// Potential energies U_opt, U_chi, U_pot at a point.
    pub fn potential(&self, p: &FieldPoint) -> PotentialSample {
        let pf = self.config.point_fields(p.radius, p.axial);
        let w_inter = self.w_cos * pf.t_cos + self.w_sin * pf.t_sin;
        let mut u_opt = -self.polarizabilities.alpha.re * (pf.w_trap + w_inter);
        if self.options.include_magnetic {
            u_opt -= self.polarizabilities.beta.re * (pf.w_trap - w_inter);
        }
        // U_chi = -Re[chi] K / k = (h+ - h-) Re[chi] W_trap.
        let u_chi = self.difference * self.polarizabilities.chi.re * pf.w_trap;
        PotentialSample {
            u_opt,
            u_chi,
            u_pot: u_opt + u_chi,
        }
    }

    /// Axial chiral dissipative force F_chi_diss(q, 0) and, more generally,
    /// its value at any (q, z).
    pub fn chiral_dissipative_z(&self, q: f64, z: f64) -> f64 {
        self.c_diss * self.config.point_fields(q, z).w_trap
    }

    /// Per-unit-Im[chi] factor of the chiral dissipative force:
    /// F_chi_diss(q, z) = Im[chi] * this.
    pub fn chiral_dissipative_per_im_chi(&self, q: f64, z: f64) -> f64 {
        -2.0 * self.config.polarization.helicity_sum()
            * self.config.beam.wavenumber()
            * self.config.point_fields(q, z).w_trap
    }

    /// Coefficient relating the chiral dissipative force to the trapping
    /// envelope: F_chi_diss,z(q, z) = coefficient * W_trap(q, z).
    pub fn dissipative_coefficient(&self) -> f64 {
        self.c_diss
    }

    /// Axial interferential force F_inter = Re[alpha] dz W_inter at (0, z), N.
    pub fn interference_force_z(&self, z: f64) -> f64 {
        let pf = self.config.point_fields(0.0, z);
        self.polarizabilities.alpha.re * (self.w_cos * pf.dz_t_cos + self.w_sin * pf.dz_t_sin)
    }

    /// On-axis value, first and second z-derivatives of U_opt and U_chi.
    ///
    /// Used by the landscape analytics for extremum refinement and exact
    /// curvatures. Returns ([u_opt, u_opt', u_opt''], [u_chi, u_chi', u_chi'']).
    pub fn axial_potential_derivatives(&self, z: f64) -> ([f64; 3], [f64; 3]) {
        let d = self.axial_terms(z);
        let re_a = self.polarizabilities.alpha.re;
        let re_b = if self.options.include_magnetic {
            self.polarizabilities.beta.re
        } else {
            0.0
        };
        let re_c = self.polarizabilities.chi.re;

        let mut u_opt = [0.0; 3];
        let mut u_chi = [0.0; 3];
        for i in 0..3 {
            let inter = self.w_cos * d.t_cos[i] + self.w_sin * d.t_sin[i];
            u_opt[i] = -re_a * (d.w_trap[i] + inter) - re_b * (d.w_trap[i] - inter);
            u_chi[i] = self.difference * re_c * d.w_trap[i];
        }
        (u_opt, u_chi)
    }

    /// On-axis radial stiffness d^2 U_pot / dq^2 at (0, z), J/m^2.
    pub fn radial_stiffness(&self, z: f64) -> f64 {
        let pf = self.config.point_fields(0.0, z);
        let zr = self.config.beam.rayleigh_range();
        let w0 = self.config.beam.waist_radius;
        let u = z / zr;
        let w2 = w0 * w0 * (1.0 + u * u);
        let inv_r = z / (z * z + zr * zr);
        let two_k_inv_r = 2.0 * self.config.beam.wavenumber() * inv_r;
        // d^2/dq^2 at q = 0: W_trap -> -4 W/w2; T_c -> -4 T_c/w2 - T_s 2k/R;
        // T_s -> -4 T_s/w2 + T_c 2k/R.
        let d2_w = -4.0 * pf.w_trap / w2;
        let d2_tc = -4.0 * pf.t_cos / w2 - pf.t_sin * two_k_inv_r;
        let d2_ts = -4.0 * pf.t_sin / w2 + pf.t_cos * two_k_inv_r;
        let d2_u_per_term = |w: f64, tc: f64, ts: f64| {
            let inter = self.w_cos * tc + self.w_sin * ts;
            let re_b = if self.options.include_magnetic {
                self.polarizabilities.beta.re
            } else {
                0.0
            };
            -self.polarizabilities.alpha.re * (w + inter) - re_b * (w - inter)
                + self.difference * self.polarizabilities.chi.re * w
        };
        d2_u_per_term(d2_w, d2_tc, d2_ts)
    }

    fn axial_terms(&self, z: f64) -> AxialTerms {
        let zr = self.config.beam.rayleigh_range();
        let k = self.config.beam.wavenumber();
        let w0_peak = self.config.w_trap_peak();

        let u = z / zr;
        let s2 = 1.0 + u * u;
        let t = 1.0 / s2;
        let dt = -2.0 * z * t * t / (zr * zr);
        let d2t = -(2.0 / (zr * zr)) * (t * t + 2.0 * z * t * dt);

        let phase = self.config.polarization.phase_delay + 2.0 * k * z - 2.0 * u.atan();
        let dphase = 2.0 * k - 2.0 * t / zr;
        let d2phase = -2.0 * dt / zr;
        let (s, c) = phase.sin_cos();

        let tc = [
            t * c,
            dt * c - t * s * dphase,
            d2t * c - 2.0 * dt * s * dphase - t * c * dphase * dphase - t * s * d2phase,
        ];
        let ts = [
            t * s,
            dt * s + t * c * dphase,
            d2t * s + 2.0 * dt * c * dphase - t * s * dphase * dphase + t * c * d2phase,
        ];
        AxialTerms {
            w_trap: [w0_peak * t, w0_peak * dt, w0_peak * d2t],
            t_cos: [w0_peak * tc[0], w0_peak * tc[1], w0_peak * tc[2]],
            t_sin: [w0_peak * ts[0], w0_peak * ts[1], w0_peak * ts[2]],
        }
    }

    /// Even z-Taylor data of W_trap at fixed q: returns W_trap(q, 0) and the
    /// coefficients of z^2, z^4, z^6 (J/m^3 per m^2n). Feeds the dissipative
    /// pseudo-potential.
    pub fn w_trap_axial_taylor(&self, q: f64) -> [f64; 4] {
        let w0 = self.config.beam.waist_radius;
        let zr = self.config.beam.rayleigh_range();
        let big_q = 2.0 * q * q / (w0 * w0);
        let g0 = (-big_q).exp();
        let g1 = g0 * (big_q - 1.0);
        let g2 = g0 * (big_q * big_q - 4.0 * big_q + 2.0);
        let g3 = g0 * (big_q * big_q * big_q - 9.0 * big_q * big_q + 18.0 * big_q - 6.0);
        let w_peak = self.config.w_trap_peak();
        let zr2 = zr * zr;
        [
            w_peak * g0,
            w_peak * g1 / zr2,
            w_peak * g2 / (2.0 * zr2 * zr2),
            w_peak * g3 / (6.0 * zr2 * zr2 * zr2),
        ]
    }
}

struct AxialTerms {
    w_trap: [f64; 3],
    t_cos: [f64; 3],
    t_sin: [f64; 3],
}

/// Numerical curl report over a grid, comparing conservative (reactive) and
/// non-conservative (chiral dissipative) components.
#[derive(Debug, Clone, Serialize)]
pub struct CurlReport {
    /// max |curl F_reactive| over the grid, N/m.
    pub max_curl_reactive: f64,
    /// max |curl F_chi_diss| over the grid, N/m.
    pub max_curl_chiral_dissipative: f64,
    /// max |F_reactive| over the grid, N.
    pub max_force_reactive: f64,
    /// max |F_chi_diss| over the grid, N.
    pub max_force_chiral_dissipative: f64,
}

/// Evaluate curls by fourth-order central differences on an (nq x nz) grid
/// spanning q in (0, q_max], z in [-z_max, z_max].
///
/// For the axisymmetric components the curl reduces to
/// curl_theta = d(F_rho)/dz - d(F_z)/dq for (rho, z) fields and
/// (-d(F_theta)/dz, d(q F_theta)/dq / q) for azimuthal fields.
pub fn curl_diagnostic(
    model: &ForceModel,
    nq: usize,
    nz: usize,
    q_max: f64,
    z_max: f64,
) -> CurlReport {
    let h = 1e-10;
    let reactive = |q: f64, z: f64| {
        let p = FieldPoint::new(q.max(0.0), z).unwrap();
        model.reactive_total(&p)
    };
    let diss_z = |q: f64, z: f64| model.chiral_dissipative_z(q.max(0.0), z);

    let deriv = |f: &dyn Fn(f64) -> f64, x: f64| {
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    };

    let mut report = CurlReport {
        max_curl_reactive: 0.0,
        max_curl_chiral_dissipative: 0.0,
        max_force_reactive: 0.0,
        max_force_chiral_dissipative: 0.0,
    };
    for iq in 1..=nq {
        // Keep two stencil widths away from the axis.
        let q = q_max * iq as f64 / nq as f64 + 2.0 * h;
        for iz in 0..nz {
            let z = -z_max + 2.0 * z_max * iz as f64 / (nz - 1).max(1) as f64;

            let f = reactive(q, z);
            let dz_frho = deriv(&|zz| reactive(q, zz).f_rho, z);
            let dq_fz = deriv(&|qq| reactive(qq, z).f_z, q);
            report.max_curl_reactive = report.max_curl_reactive.max((dz_frho - dq_fz).abs());
            report.max_force_reactive = report.max_force_reactive.max(f.norm());

            let dq_fdiss = deriv(&|qq| diss_z(qq, z), q);
            report.max_curl_chiral_dissipative =
                report.max_curl_chiral_dissipative.max(dq_fdiss.abs());
            report.max_force_chiral_dissipative = report
                .max_force_chiral_dissipative
                .max(diss_z(q, z).abs());
        }
    }
    report
}

// Re-exported for use in integration tests that need the raw point data.
#[doc(hidden)]
pub fn point_fields_for_tests(config: &TrapConfiguration, q: f64, z: f64) -> (f64, f64) {
    let pf: PointFields = config.point_fields(q, z);
    (pf.w_trap, pf.two_beam_phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::FluidMedium;
    use crate::optics::{fields, BeamGeometry, PolarizationSettings};
    use crate::particle::{clausius_mossotti, enantiomer_flip, solve_kappa, MaterialOptics};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn water() -> FluidMedium {
        FluidMedium::from_refractive_index(1.33, 0.88e-3, 295.0).unwrap()
    }

    fn gold_material() -> MaterialOptics {
        MaterialOptics {
            permittivity_rel: Complex64::new(-22.99, 1.53),
            permeability_rel: Complex64::new(1.0, 0.0),
            chiral_parameter: Complex64::new(0.0, 0.0),
        }
    }

    fn chiral_gold(fluid: &FluidMedium) -> Polarizabilities {
        let mut material = gold_material();
        let (kappa, _) = solve_kappa(Complex64::new(0.05, 0.0), &material, fluid).unwrap();
        material.chiral_parameter = kappa;
        clausius_mossotti(20e-9, &material, fluid).unwrap()
    }

    fn config(h_plus: f64, h_minus: f64, delta: f64, dtheta: f64) -> TrapConfiguration {
        let fluid = water();
        let beam = BeamGeometry::from_rayleigh_range(785e-9, 1.715e-6, 2.0e8, &fluid).unwrap();
        TrapConfiguration {
            fluid,
            beam,
            polarization: PolarizationSettings::new(h_plus, h_minus, delta, dtheta).unwrap(),
        }
    }

    fn model(cfg: TrapConfiguration, pol: Polarizabilities) -> ForceModel {
        ForceModel::new(cfg, pol, ForceOptions::default())
    }

    /// Central finite difference of a complex-field scalar, step h.
    fn fd<F: Fn(f64, f64) -> f64>(f: F, q: f64, z: f64, axis: usize, h: f64) -> f64 {
        match axis {
            0 => (f(q + h, z) - f(q - h, z)) / (2.0 * h),
            _ => (f(q, z + h) - f(q, z - h)) / (2.0 * h),
        }
    }

    #[test]
    fn achiral_particle_has_no_chiral_force() {
        let fluid = water();
        let pol = clausius_mossotti(20e-9, &gold_material(), &fluid).unwrap();
        let cfg = config(0.2, -0.2, -std::f64::consts::PI, 0.8);
        let m = model(cfg, pol);
        let d = m.decompose(&FieldPoint::new(1e-7, 5e-8).unwrap());
        assert_eq!(d.chiral_reactive.f_z, 0.0);
        assert_eq!(d.chiral_dissipative.f_z, 0.0);
        assert!(d.electric_reactive.f_z.abs() > 0.0);
    }

    #[test]
    fn dissipative_components_are_azimuthal_and_axial() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 1.3);
        let m = model(cfg, pol);
        let d = m.decompose(&FieldPoint::new(2e-7, -6e-8).unwrap());
        assert_eq!(d.electric_dissipative.f_rho, 0.0);
        assert_eq!(d.electric_dissipative.f_z, 0.0);
        assert_eq!(d.magnetic_dissipative.f_rho, 0.0);
        assert_eq!(d.magnetic_dissipative.f_z, 0.0);
        assert_eq!(d.chiral_dissipative.f_rho, 0.0);
        assert_eq!(d.chiral_dissipative.f_theta, 0.0);
        assert!(d.chiral_dissipative.f_z.abs() > 0.0);
    }

    #[test]
    fn chiral_dissipative_matches_flux_and_flips_with_enantiomer() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 1.3);
        let p = FieldPoint::new(0.0, 0.0).unwrap();
        let m = model(cfg, pol);
        let flux = crate::optics::chiral_flux(&cfg, &p);
        let sqrt_em = cfg.beam.wavenumber() / cfg.beam.angular_frequency();
        let expected = 2.0 * sqrt_em * pol.chi.im * flux.chiral_flux.z;
        assert_relative_eq!(
            m.decompose(&p).chiral_dissipative.f_z,
            expected,
            max_relative = 1e-13
        );

        let flipped = model(cfg, enantiomer_flip(&pol));
        assert_relative_eq!(
            flipped.decompose(&p).chiral_dissipative.f_z,
            -expected,
            max_relative = 1e-13
        );
    }

    #[test]
    fn forces_match_finite_differences_of_field_scalars() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.05, -0.05, -std::f64::consts::PI, 1.4);
        let m = model(cfg, pol);
        let k = cfg.beam.wavenumber();
        let omega = cfg.beam.angular_frequency();

        let w_e = |q: f64, z: f64| {
            fields::evaluate(&cfg, &FieldPoint::new(q, z).unwrap()).w_electric()
        };
        let kk = |q: f64, z: f64| {
            fields::evaluate(&cfg, &FieldPoint::new(q, z).unwrap()).chiral_density()
        };
        let phi_e_z = |q: f64, z: f64| {
            fields::evaluate(&cfg, &FieldPoint::new(q, z).unwrap())
                .chiral_flux_electric()
                .z
        };

        for &(q, z) in &[(1.3e-7f64, 4.2e-8f64), (3.0e-7, -9.0e-8), (5.0e-8, 1.5e-7)] {
            let h = 1e-12 * (1.0f64).max(z.abs() / cfg.beam.rayleigh_range());
            let d = m.decompose(&FieldPoint::new(q, z).unwrap());
            let scale = d.electric_reactive.norm();

            // Electric reactive: Re[alpha] grad W_E.
            let grad_q = pol.alpha.re * fd(w_e, q, z, 0, h);
            let grad_z = pol.alpha.re * fd(w_e, q, z, 1, h);
            assert!((d.electric_reactive.f_rho - grad_q).abs() <= 1e-8 * scale);
            assert!((d.electric_reactive.f_z - grad_z).abs() <= 1e-8 * scale);

            // Chiral reactive: Re[chi] grad K / k.
            let gk_q = pol.chi.re * fd(kk, q, z, 0, h) / k;
            let gk_z = pol.chi.re * fd(kk, q, z, 1, h) / k;
            let c_scale = d.chiral_reactive.norm().max(scale * 1e-6);
            assert!((d.chiral_reactive.f_rho - gk_q).abs() <= 1e-6 * c_scale);
            assert!((d.chiral_reactive.f_z - gk_z).abs() <= 1e-6 * c_scale);

            // Electric dissipative: Im[alpha] dq(Phi_Ez) / omega.
            let ed = pol.alpha.im * fd(phi_e_z, q, z, 0, h) / omega;
            let e_scale = d.electric_dissipative.f_theta.abs().max(scale * 1e-6);
            assert!((d.electric_dissipative.f_theta - ed).abs() <= 1e-6 * e_scale);
        }
    }

    #[test]
    fn axial_derivatives_match_finite_differences() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.05, -0.05, -std::f64::consts::PI, 1.5690663);
        let m = model(cfg, pol);
        let u = |z: f64| m.potential(&FieldPoint::new(0.0, z).unwrap());

        // Scale for mixed relative/absolute comparisons: the oscillatory
        // force and stiffness magnitudes of this landscape.
        let (u00, _) = m.axial_potential_derivatives(0.0);
        let stiffness_scale = u00[2].abs();
        let force_scale = stiffness_scale * 1e-8;

        for &z in &[0.0, 1.5e-8, -3.2e-8, 8.0e-8] {
            let (u_opt, u_chi) = m.axial_potential_derivatives(z);
            assert_relative_eq!(u_opt[0], u(z).u_opt, max_relative = 1e-12);

            let h1 = 3e-12;
            let d1 = (u(z + h1).u_opt - u(z - h1).u_opt) / (2.0 * h1);
            assert!(
                (u_opt[1] - d1).abs() <= 1e-5 * d1.abs().max(force_scale),
                "u_opt' mismatch at z={z}: {} vs {}",
                u_opt[1],
                d1
            );

            let h2 = 8e-11;
            let d2 = (u(z + h2).u_opt - 2.0 * u(z).u_opt + u(z - h2).u_opt) / (h2 * h2);
            assert!(
                (u_opt[2] - d2).abs() <= 1e-4 * d2.abs().max(stiffness_scale),
                "u_opt'' mismatch at z={z}: {} vs {}",
                u_opt[2],
                d2
            );

            let c1 = (u(z + h1).u_chi - u(z - h1).u_chi) / (2.0 * h1);
            assert!((u_chi[1] - c1).abs() <= 1e-5 * c1.abs().max(force_scale));
        }
    }

    #[test]
    fn doubling_amplitude_quadruples_forces() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 1.2);
        let cfg2 = TrapConfiguration {
            beam: cfg.beam.with_amplitude(2.0 * cfg.beam.field_amplitude),
            ..cfg
        };
        let p = FieldPoint::new(1.1e-7, 3.0e-8).unwrap();
        let f1 = model(cfg, pol).total_cyl(p.radius, p.axial);
        let f2 = model(cfg2, pol).total_cyl(p.radius, p.axial);
        assert_relative_eq!(f2.f_z, 4.0 * f1.f_z, max_relative = 1e-12);
        assert_relative_eq!(f2.f_rho, 4.0 * f1.f_rho, max_relative = 1e-12);
    }

    #[test]
    fn enantiomorph_flip_negates_chiral_forces_only() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 1.2);
        let mirrored = TrapConfiguration {
            polarization: cfg.polarization.enantiomorph(),
            ..cfg
        };
        let p = FieldPoint::new(9e-8, -2e-8).unwrap();
        let d = model(cfg, pol).decompose(&p);
        let dm = model(mirrored, pol).decompose(&p);
        assert_relative_eq!(
            dm.chiral_dissipative.f_z,
            -d.chiral_dissipative.f_z,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            dm.chiral_reactive.f_z,
            -d.chiral_reactive.f_z,
            max_relative = 1e-12,
            epsilon = 1e-40
        );
        assert_relative_eq!(
            dm.electric_reactive.f_z,
            d.electric_reactive.f_z,
            max_relative = 1e-12
        );
    }

    #[test]
    fn dissipative_force_is_flat_on_axis() {
        // |F(0, dz) - F(0, 0)| / |F(0, 0)| = dz^2 / z_R^2 at dz = 100 nm.
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 1.2);
        let m = model(cfg, pol);
        let f0 = m.chiral_dissipative_z(0.0, 0.0);
        let fdz = m.chiral_dissipative_z(0.0, 100e-9);
        let variation = (fdz - f0).abs() / f0.abs();
        let expected = (100e-9 / cfg.beam.rayleigh_range()).powi(2)
            / (1.0 + (100e-9 / cfg.beam.rayleigh_range()).powi(2));
        assert_relative_eq!(variation, expected, max_relative = 1e-10);
        assert!((variation - 3.4e-3).abs() < 0.1e-3, "variation {variation}");
    }

    #[test]
    fn curl_separates_conservative_from_dissipative() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let w0 = config(0.0, 0.0, 0.0, 0.0).beam.waist_radius;
        let zr = config(0.0, 0.0, 0.0, 0.0).beam.rayleigh_range();

        // Reactive settings: gradient field, curl vanishes.
        let reac = model(config(0.05, -0.05, -std::f64::consts::PI, 1.5690663), pol);
        let r = curl_diagnostic(&reac, 12, 13, 2.0 * w0, zr);
        assert!(
            r.max_curl_reactive < 1e-6 * r.max_force_reactive / w0,
            "reactive curl {} vs force {}",
            r.max_curl_reactive,
            r.max_force_reactive
        );

        // Dissipative settings: the axial chiral force has nonzero curl off axis.
        let diss = model(config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 1.2), pol);
        let d = curl_diagnostic(&diss, 12, 13, 2.0 * w0, zr);
        assert!(
            d.max_curl_chiral_dissipative > 1e-2 * d.max_force_chiral_dissipative / zr,
            "dissipative curl {} vs force {}",
            d.max_curl_chiral_dissipative,
            d.max_force_chiral_dissipative
        );

        // Zero chiral field: chi = 0 and no flux.
        let fluid2 = water();
        let achiral_pol = clausius_mossotti(20e-9, &gold_material(), &fluid2).unwrap();
        let zero = model(config(0.0, 0.0, 0.0, 0.0), achiral_pol);
        let z = curl_diagnostic(&zero, 6, 7, w0, zr / 2.0);
        assert_eq!(z.max_curl_chiral_dissipative, 0.0);
        assert_eq!(z.max_force_chiral_dissipative, 0.0);
    }

    #[test]
    fn pseudo_taylor_matches_w_trap() {
        let fluid = water();
        let pol = chiral_gold(&fluid);
        let cfg = config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 1.2);
        let m = model(cfg, pol);
        for &q in &[0.0, 1e-7, 3e-7] {
            let coeffs = m.w_trap_axial_taylor(q);
            for &z in &[10e-9, 50e-9, 100e-9] {
                let z2 = z * z;
                let series =
                    coeffs[0] + coeffs[1] * z2 + coeffs[2] * z2 * z2 + coeffs[3] * z2 * z2 * z2;
                let exact = point_fields_for_tests(&cfg, q, z).0;
                let bound = 2.0 * (z / cfg.beam.rayleigh_range()).powi(8) * coeffs[0].abs();
                assert!(
                    (series - exact).abs() <= bound.max(1e-12 * exact.abs()),
                    "taylor mismatch at q={q}, z={z}: {} vs {}",
                    series,
                    exact
                );
            }
        }
    }
}
