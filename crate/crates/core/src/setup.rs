//! Ready-made experiment wiring: reference parameters, per-regime
//! polarization settings that share one optical landscape, calibrated force
//! models for both enantiomers, and ensemble presets.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::forcefield::{ForceModel, ForceOptions};
use crate::landscape::{
    calibrate_intensity, locate_extrema, locate_extrema_of, AxialPotential, BistableLandscape,
};
use crate::medium::{DragModel, Enantiomer, FluidMedium, Regime};
use crate::optics::{BeamGeometry, PolarizationSettings, TrapConfiguration};
use crate::particle::{clausius_mossotti, enantiomer_flip, solve_kappa, MaterialOptics, Polarizabilities};
use crate::simulator::sampler::Pdf2dGrid;
use crate::simulator::{
    run_ensemble, EnsembleResult, EnsembleSpec, EnantiomerLabel, Initializer, SimulationDomain,
    SimulationPlan, TrajectoryClass, TrajectoryData,
};

/// Relative permittivity of gold at 785 nm, interpolated from handbook
/// tabulations of the optical constants (n = 0.192, k = 4.911).
pub const GOLD_EPSILON_785NM: Complex64 = Complex64::new(-24.078, 1.8837);

/// Axis angle of the achiral reference configuration, rad.
pub fn reference_axis_angle() -> f64 {
    0.9989 * std::f64::consts::FRAC_PI_2
}

/// High-level experiment parameters.
#[derive(Debug, Clone, Copy)]
pub struct SetupParams {
    pub refractive_index: f64,
    /// Pa s.
    pub viscosity: f64,
    /// K.
    pub temperature: f64,
    /// m.
    pub vacuum_wavelength: f64,
    /// m.
    pub rayleigh_range: f64,
    /// Relative permittivity of the particle material at the wavelength.
    pub material_epsilon: Complex64,
    /// Relative permeability.
    pub material_mu: Complex64,
    /// Sphere radius, m.
    pub radius: f64,
    /// Chirality strength |chi / alpha|.
    pub chirality_ratio: f64,
    /// Reactive-regime beam helicity |h+| (h- = -h+).
    pub reactive_helicity: f64,
    /// Optical barrier height in units of kT.
    pub barrier_kt: f64,
    pub drag_model: DragModel,
    pub regime: Regime,
    pub force_options: ForceOptions,
}

impl Default for SetupParams {
    fn default() -> Self {
        Self {
            refractive_index: 1.33,
            viscosity: 0.88e-3,
            temperature: 295.0,
            vacuum_wavelength: 785e-9,
            rayleigh_range: 1.715e-6,
            material_epsilon: GOLD_EPSILON_785NM,
            material_mu: Complex64::new(1.0, 0.0),
            radius: 20e-9,
            chirality_ratio: 0.05,
            reactive_helicity: 0.05,
            barrier_kt: 1.0,
            drag_model: DragModel::TwoPi,
            regime: Regime::Achiral,
            force_options: ForceOptions::default(),
        }
    }
}

/// Polarization settings of the three coupling regimes, tuned so that all
/// share the achiral energy-density surface exactly: the effective axial
/// interference amplitude equals cos(reference axis angle) in every case.
pub fn regime_polarization(regime: Regime, reactive_helicity: f64) -> Result<PolarizationSettings> {
    let dtheta_ref = reference_axis_angle();
    let amplitude = dtheta_ref.cos();
    match regime {
        Regime::Achiral => {
            PolarizationSettings::new(0.0, 0.0, -std::f64::consts::PI, dtheta_ref)
        }
        Regime::Reactive => {
            // h1 = 0, so only the h2 cos(dtheta) channel interferes; widen the
            // axis angle to compensate h2 = sqrt(1 - h^2) < 1.
            let h = reactive_helicity;
            let h2 = (1.0 - h * h).sqrt();
            let dtheta = (amplitude / h2).acos();
            PolarizationSettings::new(h, -h, -std::f64::consts::PI, dtheta)
        }
        Regime::Dissipative => {
            // dtheta = pi/2 leaves only the h1 sin(dtheta) channel with
            // |h1| = h; delta = pi/2 keeps the interference maximal at z = 0.
            PolarizationSettings::new(
                amplitude,
                amplitude,
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::FRAC_PI_2,
            )
        }
    }
}

/// A calibrated trap with force models for both enantiomers.
#[derive(Debug, Clone)]
pub struct TrapSetup {
    pub regime: Regime,
    pub fluid: FluidMedium,
    /// Drag coefficient gamma, kg/s.
    pub drag: f64,
    pub config: TrapConfiguration,
    /// Force model of the Im[chi] > 0 enantiomer.
    pub left: ForceModel,
    /// Force model of the Im[chi] < 0 enantiomer.
    pub right: ForceModel,
    /// Achiral reference landscape of U_opt, barrier calibrated.
    pub landscape: BistableLandscape,
}

impl TrapSetup {
    pub fn model(&self, label: EnantiomerLabel) -> &ForceModel {
        match label {
            EnantiomerLabel::Left => &self.left,
            EnantiomerLabel::Right => &self.right,
        }
    }

    pub fn thermal_energy(&self) -> f64 {
        self.fluid.thermal_energy()
    }
}

/// Build the calibrated trap: solve the chirality quadratic, assign the
/// enantiomer labels by sign(Im[chi]), set the regime polarization and
/// calibrate the beam amplitude to the requested barrier.
pub fn build_setup(params: &SetupParams) -> Result<TrapSetup> {
    let fluid = FluidMedium::from_refractive_index(
        params.refractive_index,
        params.viscosity,
        params.temperature,
    )?;
    let drag = params.drag_model.coefficient(&fluid, params.radius);

    let mut material = MaterialOptics {
        permittivity_rel: params.material_epsilon,
        permeability_rel: params.material_mu,
        chiral_parameter: Complex64::new(0.0, 0.0),
    };
    material.validate()?;
    let particle = if params.chirality_ratio != 0.0 {
        let (kappa, _) = solve_kappa(
            Complex64::new(params.chirality_ratio, 0.0),
            &material,
            &fluid,
        )?;
        material.chiral_parameter = kappa;
        clausius_mossotti(params.radius, &material, &fluid)?
    } else {
        clausius_mossotti(params.radius, &material, &fluid)?
    };
    let (left_pol, right_pol) = assign_enantiomers(particle);

    let polarization = regime_polarization(params.regime, params.reactive_helicity)?;
    let beam = BeamGeometry::from_rayleigh_range(
        params.vacuum_wavelength,
        params.rayleigh_range,
        1.0e9,
        &fluid,
    )?;
    let config = TrapConfiguration {
        fluid,
        beam,
        polarization,
    };

    // Calibrate the optical barrier; all terms scale with E0^2.
    let provisional = ForceModel::new(config, left_pol, params.force_options);
    let target = params.barrier_kt * fluid.thermal_energy();
    let e0 = calibrate_intensity(&provisional, target)?;
    let config = TrapConfiguration {
        beam: beam.with_amplitude(e0),
        ..config
    };

    let left = ForceModel::new(config, left_pol, params.force_options);
    let right = ForceModel::new(config, right_pol, params.force_options);
    let landscape = locate_extrema_of(&AxialPotential::optical(&left))?;
    Ok(TrapSetup {
        regime: params.regime,
        fluid,
        drag,
        config,
        left,
        right,
        landscape,
    })
}

/// Split a chiral particle into its (left, right) enantiomers with
/// left = Im[chi] > 0. Achiral particles are returned unchanged for both.
fn assign_enantiomers(p: Polarizabilities) -> (Polarizabilities, Polarizabilities) {
    if p.chi.im >= 0.0 {
        (p, enantiomer_flip(&p))
    } else {
        (enantiomer_flip(&p), p)
    }
}

/// Owned bundle for running ensembles: plan, per-enantiomer models and
/// samplers, histogram domain.
pub struct EnsembleSetup {
    pub plan: SimulationPlan,
    pub left_model: ForceModel,
    pub right_model: ForceModel,
    pub left_sampler: Option<Pdf2dGrid>,
    pub right_sampler: Option<Pdf2dGrid>,
    pub drag: f64,
    pub domain: SimulationDomain,
}

impl EnsembleSetup {
    pub fn spec(&self) -> EnsembleSpec<'_> {
        let classes = match self.plan.enantiomer {
            Enantiomer::Left => vec![TrajectoryClass {
                label: EnantiomerLabel::Left,
                model: &self.left_model,
                sampler: self.left_sampler.as_ref(),
                count: self.plan.n_trajectories,
            }],
            Enantiomer::Right => vec![TrajectoryClass {
                label: EnantiomerLabel::Right,
                model: &self.right_model,
                sampler: self.right_sampler.as_ref(),
                count: self.plan.n_trajectories,
            }],
            Enantiomer::Racemic => vec![
                TrajectoryClass {
                    label: EnantiomerLabel::Left,
                    model: &self.left_model,
                    sampler: self.left_sampler.as_ref(),
                    count: self.plan.n_trajectories / 2,
                },
                TrajectoryClass {
                    label: EnantiomerLabel::Right,
                    model: &self.right_model,
                    sampler: self.right_sampler.as_ref(),
                    count: self.plan.n_trajectories / 2,
                },
            ],
        };
        EnsembleSpec {
            plan: &self.plan,
            classes,
            drag: self.drag,
            domain: self.domain,
        }
    }

    pub fn run(&self) -> Result<EnsembleResult> {
        run_ensemble(&self.spec())
    }

    pub fn map<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(TrajectoryData) -> T + Sync,
    {
        crate::simulator::map_trajectories(&self.spec(), f)
    }
}

/// Histogram/stability domain sized from the per-enantiomer effective
/// landscapes: generous enough that escapes are astronomically unlikely,
/// tight enough that the bins resolve the wells.
pub fn simulation_domain(setup: &TrapSetup, regime: Regime) -> Result<SimulationDomain> {
    let kt = setup.thermal_energy();
    let mut z_extent: f64 = 0.0;
    let mut sigma_z: f64 = 0.0;
    for model in [&setup.left, &setup.right] {
        let ls = locate_extrema(model, regime)?;
        let (sa, sc) = ls.well_sigmas(kt);
        z_extent = z_extent.max(ls.z_c.abs()).max(ls.z_a.abs());
        sigma_z = sigma_z.max(sa).max(sc);
    }
    let sigma_q = (kt / setup.left.radial_stiffness(0.0)).sqrt();
    Ok(SimulationDomain {
        z_half: z_extent + 10.0 * sigma_z,
        nz: 128,
        q_max: 12.0 * sigma_q,
        nq: 64,
        stability_z: z_extent + 6.0 * sigma_z,
        stability_q: 6.0 * sigma_q,
    })
}

/// Assemble an ensemble run for the given plan: stationary samplers are
/// tabulated per enantiomer when the plan initializes from the model PDF.
pub fn ensemble_setup(setup: &TrapSetup, plan: SimulationPlan) -> Result<EnsembleSetup> {
    let needs_sampler = matches!(plan.initializer, Initializer::ModelPdf);
    let wants_left = !matches!(plan.enantiomer, Enantiomer::Right);
    let wants_right = !matches!(plan.enantiomer, Enantiomer::Left);
    let left_sampler = (needs_sampler && wants_left)
        .then(|| Pdf2dGrid::from_model(&setup.left, plan.regime, 129, 513))
        .transpose()?;
    let right_sampler = (needs_sampler && wants_right)
        .then(|| Pdf2dGrid::from_model(&setup.right, plan.regime, 129, 513))
        .transpose()?;
    Ok(EnsembleSetup {
        domain: simulation_domain(setup, plan.regime)?,
        plan,
        left_model: setup.left.clone(),
        right_model: setup.right.clone(),
        left_sampler,
        right_sampler,
        drag: setup.drag,
    })
}

/// Ensemble scale presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Full-scale runs matching the reference figures (overnight class).
    Paper,
    /// 1/16-scale runs for development and CI.
    Desk,
}

/// Ensemble plan preset: short trajectories at fine time step, for
/// probability-density comparisons.
pub fn ensemble_plan(
    preset: Preset,
    regime: Regime,
    enantiomer: Enantiomer,
    master_seed: u64,
) -> SimulationPlan {
    let per_enantiomer = match preset {
        Preset::Paper => 10_000,
        Preset::Desk => 625,
    };
    let n = match enantiomer {
        Enantiomer::Racemic => 2 * per_enantiomer,
        _ => per_enantiomer,
    };
    SimulationPlan {
        time_step: 95.4e-12,
        n_steps: 50_000,
        n_trajectories: n,
        master_seed,
        record_stride: 100,
        initializer: Initializer::ModelPdf,
        regime,
        enantiomer,
        store_trajectories: false,
        allow_unstable_dt: false,
    }
}

/// Residency plan preset: long trajectories at coarser time step, for
/// jump statistics. The coarser dt slightly exceeds the conservative
/// drift criterion at the outermost accessible fringe, so the plan carries
/// the override flag; the margin is still evaluated and reported.
pub fn residency_plan(
    preset: Preset,
    regime: Regime,
    enantiomer: Enantiomer,
    master_seed: u64,
) -> SimulationPlan {
    let (per_enantiomer, n_steps) = match preset {
        Preset::Paper => (2048, 3_000_000),
        Preset::Desk => (256, 1_000_000),
    };
    let n = match enantiomer {
        Enantiomer::Racemic => 2 * per_enantiomer,
        _ => per_enantiomer,
    };
    SimulationPlan {
        time_step: 0.95e-9,
        n_steps,
        n_trajectories: n,
        master_seed,
        record_stride: 64,
        initializer: Initializer::ModelPdf,
        regime,
        enantiomer,
        store_trajectories: false,
        allow_unstable_dt: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn regimes_share_one_optical_landscape() {
        for regime in [Regime::Achiral, Regime::Reactive, Regime::Dissipative] {
            let setup = build_setup(&SetupParams {
                regime,
                ..Default::default()
            })
            .unwrap();
            let reference = build_setup(&SetupParams::default()).unwrap();
            assert_relative_eq!(
                setup.landscape.z_c,
                reference.landscape.z_c,
                max_relative = 1e-9
            );
            assert_relative_eq!(
                setup.landscape.barrier_ab,
                reference.landscape.barrier_ab,
                max_relative = 1e-9
            );
            assert_relative_eq!(
                setup.config.beam.field_amplitude,
                reference.config.beam.field_amplitude,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn barrier_calibrates_to_one_kt() {
        let setup = build_setup(&SetupParams::default()).unwrap();
        let kt = setup.thermal_energy();
        assert_relative_eq!(setup.landscape.barrier_ab, kt, max_relative = 1e-6);
        // k_B * 295 K.
        assert_relative_eq!(kt, 4.0729e-21, max_relative = 1e-3);
    }

    #[test]
    fn left_enantiomer_has_positive_im_chi() {
        let setup = build_setup(&SetupParams {
            regime: Regime::Dissipative,
            ..Default::default()
        })
        .unwrap();
        assert!(setup.left.polarizabilities.chi.im > 0.0);
        assert!(setup.right.polarizabilities.chi.im < 0.0);
        assert_eq!(
            setup.left.polarizabilities.alpha,
            setup.right.polarizabilities.alpha
        );
    }

    #[test]
    fn landscape_matches_reference_scales() {
        // Wells around +-20 nm, barrier sigma near 10 nm: the scales the
        // trap geometry was designed for.
        let setup = build_setup(&SetupParams::default()).unwrap();
        let ls = setup.landscape;
        assert!(ls.z_c > 15e-9 && ls.z_c < 26e-9, "z_c = {}", ls.z_c);
        assert_relative_eq!(ls.z_a, -ls.z_c, max_relative = 1e-12);
        let sigma_b = ls.barrier_sigma(setup.thermal_energy());
        assert!(
            sigma_b > 8e-9 && sigma_b < 12e-9,
            "barrier sigma = {sigma_b}"
        );
    }
}
