//! Host fluid and drag models.

use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};

/// The fluid filling the trapping cell.
///
/// Permittivity and permeability are stored as absolute SI values so that
/// energy densities and forces come out in J/m^3 and N without unit juggling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidMedium {
    /// Absolute permittivity eps_f, F/m.
    pub permittivity_abs: f64,
    /// Absolute permeability mu_f, H/m.
    pub permeability_abs: f64,
    /// Dynamic viscosity eta, Pa s.
    pub viscosity: f64,
    /// Bath temperature T, K.
    pub temperature: f64,
}

impl FluidMedium {
    /// Build from a (real) refractive index: eps_f = n^2 eps_0, mu_f = mu_0.
    pub fn from_refractive_index(n: f64, viscosity: f64, temperature: f64) -> Result<Self> {
        let medium = Self {
            permittivity_abs: n * n * VACUUM_PERMITTIVITY,
            permeability_abs: VACUUM_PERMEABILITY,
            viscosity,
            temperature,
        };
        medium.validate()?;
        Ok(medium)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.permittivity_abs > 0.0
            && self.permeability_abs > 0.0
            && self.viscosity > 0.0
            && self.temperature > 0.0
            && self.impedance().is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "fluid requires positive permittivity, permeability, viscosity and temperature"
                    .into(),
            ))
        }
    }

    /// Optical impedance Z_f = sqrt(mu_f / eps_f), Ohm.
    pub fn impedance(&self) -> f64 {
        (self.permeability_abs / self.permittivity_abs).sqrt()
    }

    /// Relative permittivity eps_f / eps_0.
    pub fn permittivity_rel(&self) -> f64 {
        self.permittivity_abs / VACUUM_PERMITTIVITY
    }

    /// Relative permeability mu_f / mu_0.
    pub fn permeability_rel(&self) -> f64 {
        self.permeability_abs / VACUUM_PERMEABILITY
    }

    /// Refractive index n = sqrt(eps_rel mu_rel).
    pub fn refractive_index(&self) -> f64 {
        (self.permittivity_rel() * self.permeability_rel()).sqrt()
    }

    /// Thermal energy k_B T, J.
    pub fn thermal_energy(&self) -> f64 {
        BOLTZMANN * self.temperature
    }
}

/// Drag coefficient convention for a sphere of radius R.
///
/// The default reproduces the gamma = 2 pi eta R convention used by the
/// reference landscape; Stokes' 6 pi eta R is available as a switch. Escape
/// and residency RATIOS are gamma-independent, absolute times are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DragModel {
    /// gamma = 2 pi eta R.
    TwoPi,
    /// gamma = 6 pi eta R (standard Stokes).
    StokesSixPi,
}

impl DragModel {
    /// Drag coefficient gamma, kg/s.
    pub fn coefficient(&self, fluid: &FluidMedium, radius: f64) -> f64 {
        let prefactor = match self {
            DragModel::TwoPi => 2.0,
            DragModel::StokesSixPi => 6.0,
        };
        prefactor * std::f64::consts::PI * fluid.viscosity * radius
    }
}

/// Chiral coupling regime selected by the beam helicities.
///
/// Selection rule (tolerance on the helicity sums/differences):
/// reactive  <=> h+ = -h- (chiral density only),
/// dissipative <=> h+ = h- != 0 (chiral flux only),
/// achiral   <=> h+ = h- = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Achiral,
    Reactive,
    Dissipative,
}

/// Enantiomer of the trapped dipole. `Left` is the form with Im[chi] > 0,
/// `Right` the mirror form; `Racemic` simulates an even mixture of both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Enantiomer {
    Left,
    Right,
    Racemic,
}
