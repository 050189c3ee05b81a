//! Direct superposition of the complex beam fields.
//!
//! This is the second, independent route to every scalar in [`super`]: the
//! two paraxial Gaussian beams are assembled explicitly in the circular
//! polarization basis and W_E, W_H, K, Phi and Pi are recomputed from their
//! defining bilinears. The closed forms of the parent module must agree with
//! these values to rounding error; tests enforce that.
//!
//! By axisymmetry the point is evaluated at azimuth theta = 0, so Cartesian
//! (x, y, z) components map directly onto cylindrical (rho, theta, z).

use num_complex::Complex64;

use super::{CylVector, FieldPoint, TrapConfiguration};

/// Superposed complex fields at one point, with the fluid parameters needed
/// to form the quadratic observables.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    /// Electric field E_sw, V/m, Cartesian components at theta = 0.
    pub e: [Complex64; 3],
    /// Magnetic field H_sw, A/m.
    pub h: [Complex64; 3],
    permittivity: f64,
    permeability: f64,
    angular_frequency: f64,
}

/// Evaluate the standing-wave fields E_sw, H_sw at a cylindrical point.
pub fn evaluate(config: &TrapConfiguration, p: &FieldPoint) -> FieldSample {
    let (q, z) = (p.radius, p.axial);
    let beam = &config.beam;
    let pol = &config.polarization;
    let zr = beam.rayleigh_range();
    let k = beam.wavenumber();
    let w0 = beam.waist_radius;

    let u = z / zr;
    let s2 = 1.0 + u * u;
    let w2 = w0 * w0 * s2;
    let inv_r = z / (z * z + zr * zr);
    // Single-beam Gaussian phase: phi = k q^2 / 2R(z) - xi(z).
    let phi = 0.5 * k * q * q * inv_r - u.atan();
    let envelope = beam.field_amplitude * (1.0 / s2).sqrt() * (-q * q / w2).exp();

    // Scalar beam amplitudes including the propagation phases e^{+-ikz}.
    let amp_plus = Complex64::from_polar(envelope, phi + k * z);
    let amp_minus = Complex64::from_polar(envelope, -phi - k * z);

    // Circular basis vectors e_l = (x + iy)/sqrt(2), e_r = (x - iy)/sqrt(2).
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let e_l = [
        Complex64::new(inv_sqrt2, 0.0),
        Complex64::new(0.0, inv_sqrt2),
        Complex64::new(0.0, 0.0),
    ];
    let e_r = [
        Complex64::new(inv_sqrt2, 0.0),
        Complex64::new(0.0, -inv_sqrt2),
        Complex64::new(0.0, 0.0),
    ];

    // Polarization vectors. The counter-propagating beam carries the phase
    // factors exp(-i(delta -+ dtheta)) on its circular components; this sign
    // convention reproduces the closed-form W_inter, K and Phi expressions
    // of the parent module exactly.
    let a = Complex64::new((0.5 * (1.0 - pol.helicity_plus)).sqrt(), 0.0);
    let b = Complex64::new((0.5 * (1.0 + pol.helicity_plus)).sqrt(), 0.0);
    let c = Complex64::from_polar(
        (0.5 * (1.0 - pol.helicity_minus)).sqrt(),
        -(pol.phase_delay - pol.axis_angle),
    );
    let d = Complex64::from_polar(
        (0.5 * (1.0 + pol.helicity_minus)).sqrt(),
        -(pol.phase_delay + pol.axis_angle),
    );

    let mut e = [Complex64::new(0.0, 0.0); 3];
    let mut h = [Complex64::new(0.0, 0.0); 3];
    let inv_z_f = 1.0 / config.fluid.impedance();
    for i in 0..3 {
        let pol_plus = a * e_l[i] + b * e_r[i];
        let pol_minus = c * e_l[i] + d * e_r[i];
        e[i] = amp_plus * pol_plus + amp_minus * pol_minus;
        // z_hat x (vx, vy, 0) = (-vy, vx, 0); the backward beam flips the sign.
        let cross_plus = cross_z(&[a * e_l[0] + b * e_r[0], a * e_l[1] + b * e_r[1]], i);
        let cross_minus = cross_z(&[c * e_l[0] + d * e_r[0], c * e_l[1] + d * e_r[1]], i);
        h[i] = inv_z_f * (amp_plus * cross_plus - amp_minus * cross_minus);
    }

    FieldSample {
        e,
        h,
        permittivity: config.fluid.permittivity_abs,
        permeability: config.fluid.permeability_abs,
        angular_frequency: beam.angular_frequency(),
    }
}

fn cross_z(v: &[Complex64; 2], component: usize) -> Complex64 {
    match component {
        0 => -v[1],
        1 => v[0],
        _ => Complex64::new(0.0, 0.0),
    }
}

impl FieldSample {
    /// W_E = eps_f E . E* / 4.
    pub fn w_electric(&self) -> f64 {
        0.25 * self.permittivity * self.e.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// W_H = mu_f H . H* / 4.
    pub fn w_magnetic(&self) -> f64 {
        0.25 * self.permeability * self.h.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// K = omega eps_f mu_f Im[E . H*] / 2.
    pub fn chiral_density(&self) -> f64 {
        let dot: Complex64 = self
            .e
            .iter()
            .zip(self.h.iter())
            .map(|(ei, hi)| ei * hi.conj())
            .sum();
        0.5 * self.angular_frequency * self.permittivity * self.permeability * dot.im
    }

    /// Electric ellipticity Phi_E = i omega eps_f E x E* / 4 (a real vector).
    pub fn chiral_flux_electric(&self) -> CylVector {
        ellipticity(&self.e, 0.25 * self.angular_frequency * self.permittivity)
    }

    /// Magnetic ellipticity Phi_H = i omega mu_f H x H* / 4.
    pub fn chiral_flux_magnetic(&self) -> CylVector {
        ellipticity(&self.h, 0.25 * self.angular_frequency * self.permeability)
    }

    /// Chiral flux Phi = Phi_E + Phi_H.
    pub fn chiral_flux(&self) -> CylVector {
        let fe = self.chiral_flux_electric();
        let fh = self.chiral_flux_magnetic();
        CylVector {
            rho: fe.rho + fh.rho,
            theta: fe.theta + fh.theta,
            z: fe.z + fh.z,
        }
    }

    /// Poynting vector Pi = Re[E x H*] / 2.
    pub fn poynting(&self) -> CylVector {
        let cross = |a: &[Complex64; 3], b: &[Complex64; 3], i: usize, j: usize| {
            a[i] * b[j].conj() - a[j] * b[i].conj()
        };
        CylVector {
            rho: 0.5 * cross(&self.e, &self.h, 1, 2).re,
            theta: 0.5 * cross(&self.e, &self.h, 2, 0).re,
            z: 0.5 * cross(&self.e, &self.h, 0, 1).re,
        }
    }
}

/// i prefactor (v x v*) is real because v x v* is anti-Hermitian:
/// (v x v*)_i = 2 i Im[v_j v_k*] for cyclic (i, j, k).
fn ellipticity(v: &[Complex64; 3], prefactor: f64) -> CylVector {
    let comp = |j: usize, k: usize| -2.0 * prefactor * (v[j] * v[k].conj()).im;
    CylVector {
        rho: comp(1, 2),
        theta: comp(2, 0),
        z: comp(0, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{
        chiral_density, chiral_flux, energy_densities, BeamGeometry, PolarizationSettings,
    };
    use super::*;
    use crate::medium::FluidMedium;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn config(h_plus: f64, h_minus: f64, delta: f64, dtheta: f64) -> TrapConfiguration {
        let fluid = FluidMedium::from_refractive_index(1.33, 0.88e-3, 295.0).unwrap();
        let beam = BeamGeometry::from_rayleigh_range(785e-9, 1.715e-6, 3.0e6, &fluid).unwrap();
        TrapConfiguration {
            fluid,
            beam,
            polarization: PolarizationSettings::new(h_plus, h_minus, delta, dtheta).unwrap(),
        }
    }

    proptest! {
        /// Closed forms and the direct field superposition must agree on
        /// every scalar, and the Poynting vector must vanish.
        #[test]
        fn closed_forms_match_field_superposition(
            q in 0.0..1.0e-6f64,
            z in -2.0e-6..2.0e-6f64,
            hp in -1.0..1.0f64,
            hm in -1.0..1.0f64,
            delta in -3.2..3.2f64,
            dtheta in -1.6..1.6f64,
        ) {
            let cfg = config(hp, hm, delta, dtheta);
            let p = FieldPoint::new(q, z).unwrap();
            let sample = evaluate(&cfg, &p);
            let scalars = energy_densities(&cfg, &p);
            let flux = chiral_flux(&cfg, &p);

            let scale = scalars.w_trap;
            prop_assert!((sample.w_electric() - scalars.w_electric).abs() <= 1e-12 * scale);
            prop_assert!((sample.w_magnetic() - scalars.w_magnetic).abs() <= 1e-12 * scale);

            let k_scale = cfg.beam.wavenumber() * scale;
            prop_assert!((sample.chiral_density() - chiral_density(&cfg, &p)).abs() <= 1e-12 * k_scale);

            let phi_scale = cfg.beam.angular_frequency() * scale;
            let phi_fields = sample.chiral_flux();
            prop_assert!((phi_fields.z - flux.chiral_flux.z).abs() <= 1e-12 * phi_scale);
            prop_assert!(phi_fields.rho.abs() <= 1e-12 * phi_scale);
            prop_assert!(phi_fields.theta.abs() <= 1e-12 * phi_scale);

            // Trap/interference split of the electric ellipticity.
            let fe = sample.chiral_flux_electric();
            prop_assert!((fe.z - (flux.flux_trap_z + flux.flux_inter_z)).abs() <= 1e-12 * phi_scale);
            let fh = sample.chiral_flux_magnetic();
            prop_assert!((fh.z - (flux.flux_trap_z - flux.flux_inter_z)).abs() <= 1e-12 * phi_scale);

            // Standing wave: zero Poynting vector.
            let pi = sample.poynting();
            let pi_scale = crate::constants::SPEED_OF_LIGHT * scale;
            prop_assert!(pi.norm() <= 1e-10 * pi_scale, "|Pi| = {} vs {}", pi.norm(), pi_scale);
        }
    }

    #[test]
    fn poynting_zero_at_origin() {
        let cfg = config(0.3, -0.8, 0.9, 0.4);
        let pi = evaluate(&cfg, &FieldPoint::new(0.0, 0.0).unwrap()).poynting();
        let bound = 1e-12 * crate::constants::SPEED_OF_LIGHT * cfg.w_trap_peak();
        assert!(pi.norm() <= bound);
    }

    #[test]
    fn single_beam_amplitude_normalization() {
        // At the waist with equal linear polarizations and delta = 0 the two
        // beams interfere fully constructively: W_E = 2 eps E0^2 / 2 ... i.e.
        // 4x the single-beam energy density eps E0^2 / 4.
        let cfg = config(0.0, 0.0, 0.0, 0.0);
        let s = evaluate(&cfg, &FieldPoint::new(0.0, 0.0).unwrap());
        let single = 0.25 * cfg.fluid.permittivity_abs
            * cfg.beam.field_amplitude
            * cfg.beam.field_amplitude;
        assert_relative_eq!(s.w_electric(), 4.0 * single, max_relative = 1e-13);
    }
}
