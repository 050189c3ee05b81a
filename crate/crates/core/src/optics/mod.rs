//! Paraxial dual-beam standing wave: geometry, polarization, energy densities,
//! chiral density K, chiral flux Phi and Poynting vector.
//!
//! Two identical counter-propagating Gaussian beams share a common waist at
//! z = 0. All scalars decompose onto a polarization-independent trapping
//! envelope `W_trap` and an interference term carrying the two-beam phase
//!
//! phi(q, z) = delta + 2 k (z + q^2 / 2R(z)) - 2 xi(z),
//!
//! with xi the Gouy phase and R the wavefront curvature radius. The closed
//! forms here are cross-checked against direct superposition of the complex
//! fields in [`fields`].

pub mod fields;

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::medium::FluidMedium;

/// Beam geometry shared by the two counter-propagating beams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamGeometry {
    /// Vacuum wavelength lambda, m.
    pub vacuum_wavelength: f64,
    /// Waist radius w0, m.
    pub waist_radius: f64,
    /// Single-beam field amplitude E0 at the waist, V/m.
    pub field_amplitude: f64,
    /// Wavenumber in the fluid k = n omega / c, 1/m (derived).
    wavenumber: f64,
    /// Angular frequency omega = 2 pi c / lambda, rad/s (derived).
    angular_frequency: f64,
    /// Rayleigh range z_R = k w0^2 / 2, m (derived).
    rayleigh_range: f64,
}

impl BeamGeometry {
    /// Build from the waist radius; z_R is derived as k w0^2 / 2.
    pub fn from_waist(
        vacuum_wavelength: f64,
        waist_radius: f64,
        field_amplitude: f64,
        fluid: &FluidMedium,
    ) -> Result<Self> {
        if vacuum_wavelength <= 0.0 || waist_radius <= 0.0 || field_amplitude < 0.0 {
            return Err(Error::InvalidParameter(
                "beam requires positive wavelength and waist, non-negative amplitude".into(),
            ));
        }
        let angular_frequency = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / vacuum_wavelength;
        let wavenumber = fluid.refractive_index() * angular_frequency / SPEED_OF_LIGHT;
        Ok(Self {
            vacuum_wavelength,
            waist_radius,
            field_amplitude,
            wavenumber,
            angular_frequency,
            rayleigh_range: 0.5 * wavenumber * waist_radius * waist_radius,
        })
    }

    /// Build from the Rayleigh range; the waist is derived as sqrt(2 z_R / k).
    pub fn from_rayleigh_range(
        vacuum_wavelength: f64,
        rayleigh_range: f64,
        field_amplitude: f64,
        fluid: &FluidMedium,
    ) -> Result<Self> {
        if rayleigh_range <= 0.0 {
            return Err(Error::InvalidParameter(
                "rayleigh range must be positive".into(),
            ));
        }
        let angular_frequency = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / vacuum_wavelength;
        let wavenumber = fluid.refractive_index() * angular_frequency / SPEED_OF_LIGHT;
        let waist_radius = (2.0 * rayleigh_range / wavenumber).sqrt();
        Self::from_waist(vacuum_wavelength, waist_radius, field_amplitude, fluid)
    }

    /// Return a copy with a different field amplitude (used by calibration).
    pub fn with_amplitude(&self, field_amplitude: f64) -> Self {
        Self {
            field_amplitude,
            ..*self
        }
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn angular_frequency(&self) -> f64 {
        self.angular_frequency
    }

    pub fn rayleigh_range(&self) -> f64 {
        self.rayleigh_range
    }
}

/// Per-beam polarization control.
///
/// Helicities h+ and h- run from -1 (left circular) through 0 (linear) to
/// +1 (right circular). `phase_delay` (delta) is the relative phase of the
/// counter-propagating beam and `axis_angle` (delta-theta) the angle between
/// the polarization major axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationSettings {
    pub helicity_plus: f64,
    pub helicity_minus: f64,
    /// Phase delay delta, rad.
    pub phase_delay: f64,
    /// Axis angle delta-theta, rad.
    pub axis_angle: f64,
}

impl PolarizationSettings {
    pub fn new(
        helicity_plus: f64,
        helicity_minus: f64,
        phase_delay: f64,
        axis_angle: f64,
    ) -> Result<Self> {
        if !(-1.0..=1.0).contains(&helicity_plus) || !(-1.0..=1.0).contains(&helicity_minus) {
            return Err(Error::InvalidParameter(
                "helicities must lie in [-1, 1]".into(),
            ));
        }
        Ok(Self {
            helicity_plus,
            helicity_minus,
            phase_delay,
            axis_angle,
        })
    }

    /// Interference weight h1 = (sqrt(1-h+) sqrt(1-h-) - sqrt(1+h+) sqrt(1+h-)) / 2.
    ///
    /// Its sign is -sign(h+ + h-); together with [`Self::h2`] it satisfies
    /// h1^2 + h2^2 = 1 + h+ h- exactly.
    pub fn h1(&self) -> f64 {
        0.5 * ((1.0 - self.helicity_plus).sqrt() * (1.0 - self.helicity_minus).sqrt()
            - (1.0 + self.helicity_plus).sqrt() * (1.0 + self.helicity_minus).sqrt())
    }

    /// Interference weight h2 = (sqrt(1-h+) sqrt(1-h-) + sqrt(1+h+) sqrt(1+h-)) / 2, in [0, 1].
    pub fn h2(&self) -> f64 {
        0.5 * ((1.0 - self.helicity_plus).sqrt() * (1.0 - self.helicity_minus).sqrt()
            + (1.0 + self.helicity_plus).sqrt() * (1.0 + self.helicity_minus).sqrt())
    }

    /// Helicity sum h+ + h-, the chiral-flux selector.
    pub fn helicity_sum(&self) -> f64 {
        self.helicity_plus + self.helicity_minus
    }

    /// Helicity difference h+ - h-, the chiral-density selector.
    pub fn helicity_difference(&self) -> f64 {
        self.helicity_plus - self.helicity_minus
    }

    /// The mirror-image optical environment: (h+, h-, dtheta) -> (-h+, -h-, -dtheta).
    /// K and Phi change sign while the energy densities are unchanged.
    pub fn enantiomorph(&self) -> Self {
        Self {
            helicity_plus: -self.helicity_plus,
            helicity_minus: -self.helicity_minus,
            phase_delay: self.phase_delay,
            axis_angle: -self.axis_angle,
        }
    }
}

/// Cylindrical evaluation point r = q rho_hat + z z_hat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    /// Radial coordinate q >= 0, m.
    pub radius: f64,
    /// Axial coordinate z, m.
    pub axial: f64,
}

impl FieldPoint {
    pub fn new(radius: f64, axial: f64) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidParameter("radius must be >= 0".into()));
        }
        Ok(Self { radius, axial })
    }
}

/// Vector in cylindrical components (rho, theta, z).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CylVector {
    pub rho: f64,
    pub theta: f64,
    pub z: f64,
}

impl CylVector {
    pub fn norm(&self) -> f64 {
        (self.rho * self.rho + self.theta * self.theta + self.z * self.z).sqrt()
    }
}

/// Scalar field values at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldScalars {
    /// Trapping energy density W_trap, J/m^3.
    pub w_trap: f64,
    /// Interference energy density W_inter, J/m^3.
    pub w_inter: f64,
    /// Electric energy density W_E = W_trap + W_inter, J/m^3.
    pub w_electric: f64,
    /// Magnetic energy density W_H = W_trap - W_inter, J/m^3.
    pub w_magnetic: f64,
    /// Chiral density K = -(h+ - h-) omega sqrt(eps mu) W_trap, J/m^4.
    pub chiral_density: f64,
    /// Two-beam phase phi(q, z), rad.
    pub two_beam_phase: f64,
}

/// Flux-like vector fields at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxVectors {
    /// Chiral flux Phi = -(h+ + h-) omega W_trap z_hat, W/m^3. Purely axial.
    pub chiral_flux: CylVector,
    /// Poynting vector Pi, W/m^2. Vanishes in the standing wave.
    pub poynting: CylVector,
    /// z-component of Phi_trap = -(h+ + h-)/2 omega W_trap; Phi = 2 Phi_trap.
    pub flux_trap_z: f64,
    /// z-component of Phi_inter = omega W_trap (h1 cos dt cos phi + h2 sin dt sin phi).
    pub flux_inter_z: f64,
}

/// Full parameterization of the optical environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfiguration {
    pub fluid: FluidMedium,
    pub beam: BeamGeometry,
    pub polarization: PolarizationSettings,
}

/// Beam radius w(z) = w0 sqrt(1 + (z/z_R)^2).
pub fn beam_radius(geometry: &BeamGeometry, z: f64) -> f64 {
    let u = z / geometry.rayleigh_range;
    geometry.waist_radius * (1.0 + u * u).sqrt()
}

/// Gouy phase xi(z) = atan(z/z_R) and inverse curvature radius 1/R(z).
///
/// 1/R(z) = z / (z^2 + z_R^2) is regular at z = 0, where the phase front is
/// flat; representing the inverse removes the removable singularity of R.
pub fn gouy_and_curvature(geometry: &BeamGeometry, z: f64) -> (f64, f64) {
    let zr = geometry.rayleigh_range;
    ((z / zr).atan(), z / (z * z + zr * zr))
}

/// Intermediate per-point quantities shared by the scalar fields and the
/// analytic force gradients: the trapping envelope, the phase-carrying
/// products T_c = W_trap cos(phi), T_s = W_trap sin(phi), and their partials.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointFields {
    pub w_trap: f64,
    pub dq_w_trap: f64,
    pub dz_w_trap: f64,
    pub t_cos: f64,
    pub t_sin: f64,
    pub dq_t_cos: f64,
    pub dz_t_cos: f64,
    pub dq_t_sin: f64,
    pub dz_t_sin: f64,
    pub two_beam_phase: f64,
}

impl TrapConfiguration {
    /// Peak trapping density W0 = eps_f E0^2 / 2 at the waist, J/m^3.
    pub fn w_trap_peak(&self) -> f64 {
        0.5 * self.fluid.permittivity_abs * self.beam.field_amplitude * self.beam.field_amplitude
    }

    pub(crate) fn point_fields(&self, q: f64, z: f64) -> PointFields {
        let zr = self.beam.rayleigh_range;
        let k = self.beam.wavenumber;
        let w0 = self.beam.waist_radius;

        let u = z / zr;
        let s2 = 1.0 + u * u;
        let w2 = w0 * w0 * s2;
        let dw2_dz = 2.0 * w0 * w0 * z / (zr * zr);

        let envelope = (-2.0 * q * q / w2).exp() / s2;
        let w_trap = self.w_trap_peak() * envelope;
        let dq_w_trap = w_trap * (-4.0 * q / w2);
        // d/dz ln W_trap = -(ds2/dz)/s2 + 2 q^2 (dw2/dz) / w2^2
        let dz_w_trap = w_trap * (2.0 * q * q * dw2_dz / (w2 * w2) - (2.0 * z / (zr * zr)) / s2);

        let inv_r = z / (z * z + zr * zr);
        let dinv_r = (zr * zr - z * z) / ((z * z + zr * zr) * (z * z + zr * zr));
        let phase =
            self.polarization.phase_delay + 2.0 * k * z + k * q * q * inv_r - 2.0 * u.atan();
        let dq_phase = 2.0 * k * q * inv_r;
        let dz_phase = 2.0 * k + k * q * q * dinv_r - 2.0 / (zr * s2);

        let (sin_p, cos_p) = phase.sin_cos();
        let t_cos = w_trap * cos_p;
        let t_sin = w_trap * sin_p;

        PointFields {
            w_trap,
            dq_w_trap,
            dz_w_trap,
            t_cos,
            t_sin,
            dq_t_cos: dq_w_trap * cos_p - t_sin * dq_phase,
            dz_t_cos: dz_w_trap * cos_p - t_sin * dz_phase,
            dq_t_sin: dq_w_trap * sin_p + t_cos * dq_phase,
            dz_t_sin: dz_w_trap * sin_p + t_cos * dz_phase,
            two_beam_phase: phase,
        }
    }
}

/// Energy densities W_trap, W_inter, W_E, W_H and the chiral density K.
pub fn energy_densities(config: &TrapConfiguration, p: &FieldPoint) -> FieldScalars {
    let pf = config.point_fields(p.radius, p.axial);
    let pol = &config.polarization;
    let (sin_t, cos_t) = pol.axis_angle.sin_cos();
    let w_inter = pol.h2() * cos_t * pf.t_cos + pol.h1() * sin_t * pf.t_sin;
    FieldScalars {
        w_trap: pf.w_trap,
        w_inter,
        w_electric: pf.w_trap + w_inter,
        w_magnetic: pf.w_trap - w_inter,
        chiral_density: -pol.helicity_difference() * config.beam.wavenumber * pf.w_trap,
        two_beam_phase: pf.two_beam_phase,
    }
}

/// Chiral density K(q, z) = -(h+ - h-) omega sqrt(eps_f mu_f) W_trap.
///
/// omega sqrt(eps_f mu_f) equals the wavenumber k in the fluid.
pub fn chiral_density(config: &TrapConfiguration, p: &FieldPoint) -> f64 {
    let pf = config.point_fields(p.radius, p.axial);
    -config.polarization.helicity_difference() * config.beam.wavenumber * pf.w_trap
}

/// Chiral flux Phi and its trap/interference decomposition, plus the Poynting
/// vector recomputed from the superposed complex fields.
pub fn chiral_flux(config: &TrapConfiguration, p: &FieldPoint) -> FluxVectors {
    let pf = config.point_fields(p.radius, p.axial);
    let pol = &config.polarization;
    let omega = config.beam.angular_frequency;
    let (sin_t, cos_t) = pol.axis_angle.sin_cos();

    let flux_trap_z = -0.5 * pol.helicity_sum() * omega * pf.w_trap;
    let flux_inter_z = omega * (pol.h1() * cos_t * pf.t_cos + pol.h2() * sin_t * pf.t_sin);

    FluxVectors {
        chiral_flux: CylVector {
            rho: 0.0,
            theta: 0.0,
            z: 2.0 * flux_trap_z,
        },
        poynting: poynting(config, p),
        flux_trap_z,
        flux_inter_z,
    }
}

/// Poynting vector Pi = Re[E_sw x H_sw*] / 2 from the explicit superposed
/// fields. In this counter-propagating configuration E_sw x H_sw* is purely
/// imaginary, so Pi vanishes to rounding error.
pub fn poynting(config: &TrapConfiguration, p: &FieldPoint) -> CylVector {
    fields::evaluate(config, p).poynting()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn water() -> FluidMedium {
        FluidMedium::from_refractive_index(1.33, 0.88e-3, 295.0).unwrap()
    }

    fn config(h_plus: f64, h_minus: f64, delta: f64, dtheta: f64) -> TrapConfiguration {
        let fluid = water();
        let beam = BeamGeometry::from_rayleigh_range(785e-9, 1.715e-6, 1.0e7, &fluid).unwrap();
        let polarization = PolarizationSettings::new(h_plus, h_minus, delta, dtheta).unwrap();
        TrapConfiguration {
            fluid,
            beam,
            polarization,
        }
    }

    #[test]
    fn beam_radius_substitutions() {
        let cfg = config(0.0, 0.0, -std::f64::consts::PI, 0.0);
        let zr = cfg.beam.rayleigh_range();
        let w0 = cfg.beam.waist_radius;
        assert_relative_eq!(beam_radius(&cfg.beam, 0.0), w0, max_relative = 1e-15);
        assert_relative_eq!(
            beam_radius(&cfg.beam, zr),
            2f64.sqrt() * w0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            beam_radius(&cfg.beam, 2.0 * zr),
            5f64.sqrt() * w0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn gouy_and_curvature_limits() {
        let cfg = config(0.0, 0.0, 0.0, 0.0);
        let zr = cfg.beam.rayleigh_range();
        let (g0, c0) = gouy_and_curvature(&cfg.beam, 0.0);
        assert_eq!(g0, 0.0);
        assert_eq!(c0, 0.0);
        let (gp, cp) = gouy_and_curvature(&cfg.beam, zr);
        assert_relative_eq!(gp, std::f64::consts::FRAC_PI_4, max_relative = 1e-15);
        assert_relative_eq!(cp, 1.0 / (2.0 * zr), max_relative = 1e-15);
        let (gm, _) = gouy_and_curvature(&cfg.beam, -zr);
        assert_relative_eq!(gm, -std::f64::consts::FRAC_PI_4, max_relative = 1e-15);
    }

    #[test]
    fn waist_densities_with_linear_polarizations() {
        // h+ = h- = 0 gives h1 = 0, h2 = 1; delta = -pi puts destructive
        // interference at the waist: W_inter = -W_trap cos(dtheta).
        for dtheta in [0.0, 0.3, 1.2] {
            let cfg = config(0.0, 0.0, -std::f64::consts::PI, dtheta);
            let s = energy_densities(&cfg, &FieldPoint::new(0.0, 0.0).unwrap());
            assert_relative_eq!(s.w_trap, cfg.w_trap_peak(), max_relative = 1e-14);
            assert_relative_eq!(
                s.w_inter,
                -s.w_trap * dtheta.cos(),
                max_relative = 1e-12,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn crossed_linear_axes_kill_interference() {
        let cfg = config(0.0, 0.0, 0.7, std::f64::consts::FRAC_PI_2);
        for &(q, z) in &[(0.0, 0.0), (1e-7, 3e-7), (4e-7, -9e-7)] {
            let s = energy_densities(&cfg, &FieldPoint::new(q, z).unwrap());
            assert!(
                s.w_inter.abs() <= 1e-15 * s.w_trap,
                "w_inter = {} at ({q}, {z})",
                s.w_inter
            );
        }
    }

    #[test]
    fn chiral_density_selection_rules() {
        let p = FieldPoint::new(2e-7, 5e-8).unwrap();
        // Equal helicities: K = 0 exactly.
        let cfg = config(0.3, 0.3, 0.4, 0.2);
        assert_eq!(chiral_density(&cfg, &p), 0.0);
        // Reactive-like settings: K = -(h+ - h-) k W_trap.
        let cfg = config(0.05, -0.05, -std::f64::consts::PI, 0.2);
        let s = energy_densities(&cfg, &p);
        assert_relative_eq!(
            chiral_density(&cfg, &p),
            -0.1 * cfg.beam.wavenumber() * s.w_trap,
            max_relative = 1e-14
        );
        // Swapping helicities negates K.
        let swapped = config(-0.05, 0.05, -std::f64::consts::PI, 0.2);
        assert_relative_eq!(
            chiral_density(&swapped, &p),
            -chiral_density(&cfg, &p),
            max_relative = 1e-14
        );
    }

    #[test]
    fn chiral_flux_selection_rules() {
        let p = FieldPoint::new(1e-7, -4e-8).unwrap();
        // Opposite helicities: Phi = 0 exactly.
        let cfg = config(0.4, -0.4, 0.1, 0.3);
        assert_eq!(chiral_flux(&cfg, &p).chiral_flux.z, 0.0);
        // Dissipative-like settings.
        let cfg = config(0.0017, 0.0017, std::f64::consts::FRAC_PI_2, 0.3);
        let s = energy_densities(&cfg, &p);
        let f = chiral_flux(&cfg, &p);
        assert_relative_eq!(
            f.chiral_flux.z,
            -0.0034 * cfg.beam.angular_frequency() * s.w_trap,
            max_relative = 1e-12
        );
        assert_eq!(f.chiral_flux.rho, 0.0);
        assert_eq!(f.chiral_flux.theta, 0.0);
        assert_relative_eq!(f.chiral_flux.z, 2.0 * f.flux_trap_z, max_relative = 1e-15);
        // Flipping both helicities negates Phi, leaves W_trap unchanged.
        let flipped = config(-0.0017, -0.0017, std::f64::consts::FRAC_PI_2, 0.3);
        assert_relative_eq!(
            chiral_flux(&flipped, &p).chiral_flux.z,
            -f.chiral_flux.z,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            energy_densities(&flipped, &p).w_trap,
            s.w_trap,
            max_relative = 1e-15
        );
    }

    #[test]
    fn sum_difference_identity() {
        let cfg = config(0.2, -0.7, 1.1, 0.9);
        for &(q, z) in &[(0.0, 0.0), (3e-7, 1e-6), (8e-7, -2e-6)] {
            let s = energy_densities(&cfg, &FieldPoint::new(q, z).unwrap());
            assert_relative_eq!(
                s.w_electric + s.w_magnetic,
                2.0 * s.w_trap,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn helicity_weights_identity() {
        for (hp, hm) in [(0.0, 0.0), (0.3, 0.3), (0.5, -0.2), (-1.0, 1.0), (0.9, 0.4)] {
            let pol = PolarizationSettings::new(hp, hm, 0.0, 0.0).unwrap();
            let (h1, h2) = (pol.h1(), pol.h2());
            assert_relative_eq!(
                h1 * h1 + h2 * h2,
                1.0 + hp * hm,
                max_relative = 1e-14,
                epsilon = 1e-14
            );
            assert!(h2 >= 0.0);
            assert!(h1 * pol.helicity_sum() <= 0.0);
        }
    }

    #[test]
    fn rejects_out_of_range_helicity() {
        assert!(PolarizationSettings::new(1.2, 0.0, 0.0, 0.0).is_err());
        assert!(FieldPoint::new(-1e-9, 0.0).is_err());
    }
}
