//! Dipolar response of a chiral nanosphere.
//!
//! The electric (alpha), magnetic (beta) and mixed electric-magnetic (chi)
//! polarizabilities follow the quasistatic Clausius-Mossotti relations with
//! relative permittivities inside the fractions and 4 pi R^3 prefactors. The
//! chiral material parameter kappa_m enters alpha and beta only through
//! kappa_m^2, so the two enantiomers share alpha, beta and differ in the sign
//! of chi.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::FluidMedium;

/// Relative material constants of the nanosphere at the working wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialOptics {
    /// Complex relative permittivity eps_m.
    pub permittivity_rel: Complex64,
    /// Complex relative permeability mu_m.
    pub permeability_rel: Complex64,
    /// Complex chiral parameter kappa_m.
    pub chiral_parameter: Complex64,
}

impl MaterialOptics {
    pub fn validate(&self) -> Result<()> {
        if self.permittivity_rel.im < 0.0 {
            return Err(Error::InvalidParameter(
                "passive material requires Im(eps_m) >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Dipolar polarizabilities, all in m^3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polarizabilities {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub chi: Complex64,
    /// Sphere radius R, m.
    pub radius: f64,
}

/// Quasistatic Clausius-Mossotti polarizabilities of a chiral sphere.
///
/// Fails with `SingularDenominator` when
/// (eps_m + 2 eps_f)(mu_m + 2 mu_f) - kappa_m^2 vanishes, which signals an
/// unphysical material/fluid combination.
pub fn clausius_mossotti(
    radius: f64,
    material: &MaterialOptics,
    fluid: &FluidMedium,
) -> Result<Polarizabilities> {
    if radius <= 0.0 {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    let eps_m = material.permittivity_rel;
    let mu_m = material.permeability_rel;
    let kappa = material.chiral_parameter;
    let eps_f = Complex64::new(fluid.permittivity_rel(), 0.0);
    let mu_f = Complex64::new(fluid.permeability_rel(), 0.0);

    let kappa_sq = kappa * kappa;
    let den = (eps_m + 2.0 * eps_f) * (mu_m + 2.0 * mu_f) - kappa_sq;
    let scale = ((eps_m + 2.0 * eps_f) * (mu_m + 2.0 * mu_f)).norm() + kappa_sq.norm();
    if den.norm() < 1e-12 * scale.max(1.0) {
        return Err(Error::SingularDenominator {
            magnitude: den.norm(),
        });
    }

    let volume_factor = 4.0 * std::f64::consts::PI * radius.powi(3);
    let chi = if kappa == Complex64::new(0.0, 0.0) {
        // Exactly zero, not merely small.
        Complex64::new(0.0, 0.0)
    } else {
        3.0 * volume_factor * kappa / den
    };
    Ok(Polarizabilities {
        alpha: volume_factor * ((eps_m - eps_f) * (mu_m + 2.0 * mu_f) - kappa_sq) / den,
        beta: volume_factor * ((eps_m + 2.0 * eps_f) * (mu_m - mu_f) - kappa_sq) / den,
        chi,
        radius,
    })
}

/// Solve kappa_m^2 + 3 kappa_m / xi - (eps_m - eps_f)(mu_m + 2 mu_f) = 0 for
/// a target ratio xi = chi / alpha.
///
/// Of the four roots produced by the +-xi pair of quadratics, the opposite
/// pair with the smallest modulus is returned as `(kappa, -kappa)`, ordered
/// so that the first entry reproduces chi / alpha = +xi. The small-modulus
/// choice keeps alpha and beta essentially at their achiral values.
pub fn solve_kappa(
    target_ratio: Complex64,
    material: &MaterialOptics,
    fluid: &FluidMedium,
) -> Result<(Complex64, Complex64)> {
    if target_ratio.norm() == 0.0 {
        return Err(Error::NoSolution {
            reason: "target ratio xi must be nonzero (kappa = 0 gives chi = 0)".into(),
        });
    }
    let eps_f = Complex64::new(fluid.permittivity_rel(), 0.0);
    let mu_f = Complex64::new(fluid.permeability_rel(), 0.0);
    let n = (material.permittivity_rel - eps_f) * (material.permeability_rel + 2.0 * mu_f);

    let root = if target_ratio.is_infinite() {
        // xi -> infinity drops the 3 kappa / xi term: kappa^2 = n.
        n.sqrt()
    } else {
        // kappa^2 + b kappa - n = 0 with b = 3/xi. For small xi the linear
        // term dominates and the naive formula cancels catastrophically, so
        // form the large root first (no cancellation) and take the small one
        // as -(-n)/large = n / large.
        let b = 3.0 / target_ratio;
        let mut s = (b * b + 4.0 * n).sqrt();
        if (b.conj() * s).re < 0.0 {
            s = -s;
        }
        let large = -0.5 * (b + s);
        // Root product is -n, so the small-modulus root is -n / large.
        -n / large
    };
    if !root.re.is_finite() || !root.im.is_finite() {
        return Err(Error::NoSolution {
            reason: "quadratic is degenerate for the requested ratio".into(),
        });
    }
    if root.norm() == 0.0 {
        return Err(Error::NoSolution {
            reason: "smallest-modulus root is kappa = 0, which cannot realize a nonzero ratio"
                .into(),
        });
    }
    Ok((root, -root))
}

/// Mirror the particle: chi -> -chi, alpha and beta unchanged.
pub fn enantiomer_flip(p: &Polarizabilities) -> Polarizabilities {
    Polarizabilities { chi: -p.chi, ..*p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn water() -> FluidMedium {
        FluidMedium::from_refractive_index(1.33, 0.88e-3, 295.0).unwrap()
    }

    fn gold(kappa: Complex64) -> MaterialOptics {
        MaterialOptics {
            permittivity_rel: Complex64::new(-22.99, 1.53),
            permeability_rel: Complex64::new(1.0, 0.0),
            chiral_parameter: kappa,
        }
    }

    #[test]
    fn achiral_limit_matches_textbook_form() {
        let fluid = water();
        let p = clausius_mossotti(20e-9, &gold(Complex64::new(0.0, 0.0)), &fluid).unwrap();
        let eps_m = Complex64::new(-22.99, 1.53);
        let eps_f = Complex64::new(fluid.permittivity_rel(), 0.0);
        let expected =
            4.0 * std::f64::consts::PI * 20e-9f64.powi(3) * (eps_m - eps_f) / (eps_m + 2.0 * eps_f);
        assert_relative_eq!(p.alpha.re, expected.re, max_relative = 1e-13);
        assert_relative_eq!(p.alpha.im, expected.im, max_relative = 1e-13);
        assert_eq!(p.chi, Complex64::new(0.0, 0.0));
        assert_eq!(p.beta, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn index_matched_sphere_is_invisible() {
        let fluid = water();
        let matched = MaterialOptics {
            permittivity_rel: Complex64::new(fluid.permittivity_rel(), 0.0),
            permeability_rel: Complex64::new(1.0, 0.0),
            chiral_parameter: Complex64::new(0.0, 0.0),
        };
        let p = clausius_mossotti(20e-9, &matched, &fluid).unwrap();
        assert_eq!(p.alpha, Complex64::new(0.0, 0.0));
        assert_eq!(p.beta, Complex64::new(0.0, 0.0));
        assert_eq!(p.chi, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn kappa_round_trip_reproduces_ratio() {
        let fluid = water();
        let xi = Complex64::new(0.05, 0.0);
        let (kp, km) = solve_kappa(xi, &gold(Complex64::new(0.0, 0.0)), &fluid).unwrap();
        assert_relative_eq!(kp.re, -km.re, max_relative = 1e-15);

        let pp = clausius_mossotti(20e-9, &gold(kp), &fluid).unwrap();
        let ratio = pp.chi / pp.alpha;
        assert_relative_eq!(ratio.re, 0.05, max_relative = 1e-12);
        assert!(ratio.im.abs() < 1e-12 * ratio.re.abs());
        assert_relative_eq!((pp.chi / pp.alpha).norm(), 0.05, max_relative = 1e-12);

        let pm = clausius_mossotti(20e-9, &gold(km), &fluid).unwrap();
        let ratio_m = pm.chi / pm.alpha;
        assert_relative_eq!(ratio_m.re, -0.05, max_relative = 1e-12);

        // kappa and -kappa share alpha, beta; chi flips.
        assert_eq!(pp.alpha, pm.alpha);
        assert_eq!(pp.beta, pm.beta);
        assert_relative_eq!(pp.chi.re, -pm.chi.re, max_relative = 1e-15);
        assert_relative_eq!(pp.chi.im, -pm.chi.im, max_relative = 1e-15);

        // Switching on chirality barely moves alpha.
        let achiral = clausius_mossotti(20e-9, &gold(Complex64::new(0.0, 0.0)), &fluid).unwrap();
        let drift = (pp.alpha - achiral.alpha).norm() / achiral.alpha.norm();
        assert!(drift < 1e-2, "alpha drift {drift}");
    }

    #[test]
    fn small_ratio_limit_is_linear() {
        let fluid = water();
        let material = gold(Complex64::new(0.0, 0.0));
        let xi = Complex64::new(1e-8, 0.0);
        let (kp, _) = solve_kappa(xi, &material, &fluid).unwrap();
        let eps_f = Complex64::new(fluid.permittivity_rel(), 0.0);
        let n = (material.permittivity_rel - eps_f)
            * (material.permeability_rel + Complex64::new(2.0, 0.0));
        let leading = xi * n / 3.0;
        assert_relative_eq!(kp.re, leading.re, max_relative = 1e-6);
        assert_relative_eq!(kp.im, leading.im, max_relative = 1e-6);
    }

    #[test]
    fn flip_is_involution_and_preserves_achiral() {
        let fluid = water();
        let xi = Complex64::new(0.05, 0.0);
        let (kp, _) = solve_kappa(xi, &gold(Complex64::new(0.0, 0.0)), &fluid).unwrap();
        let p = clausius_mossotti(20e-9, &gold(kp), &fluid).unwrap();
        let flipped = enantiomer_flip(&p);
        assert_eq!(flipped.chi, -p.chi);
        assert_eq!(flipped.alpha, p.alpha);
        assert_eq!(enantiomer_flip(&flipped).chi, p.chi);

        let achiral = clausius_mossotti(20e-9, &gold(Complex64::new(0.0, 0.0)), &fluid).unwrap();
        assert_eq!(enantiomer_flip(&achiral).chi, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn zero_ratio_is_rejected() {
        let fluid = water();
        assert!(solve_kappa(
            Complex64::new(0.0, 0.0),
            &gold(Complex64::new(0.0, 0.0)),
            &fluid
        )
        .is_err());
    }
}
