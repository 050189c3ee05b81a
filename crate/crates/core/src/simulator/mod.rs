//! Overdamped 3D Langevin ensemble engine.
//!
//! Cartesian Euler-Maruyama steps with the axisymmetric cylindrical force
//! projected through x/rho, y/rho. Each trajectory owns a counter-based
//! ChaCha stream keyed by (master seed, trajectory index), so any single
//! trajectory is bitwise reproducible in isolation and results are invariant
//! under the parallel schedule. Histograms accumulate integer counts through
//! atomics; integer addition is associative, so thread count cannot change
//! any output bit.

pub mod sampler;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcefield::ForceModel;
use crate::medium::{Enantiomer, Regime};
use sampler::Pdf2dGrid;

/// Which mirror form a trajectory carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnantiomerLabel {
    Left,
    Right,
}

/// Initial-position rule, resolved to concrete numbers by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Initializer {
    /// Inverse-transform sample of the stationary model density.
    ModelPdf,
    /// All trajectories start at one point, m.
    FixedPoint([f64; 3]),
    /// Uniform in a box around a well: |x|, |y| <= q_half, |z - z_center| <= z_half.
    UniformBox {
        z_center: f64,
        z_half: f64,
        q_half: f64,
    },
}

/// Ensemble execution parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimulationPlan {
    /// Integration time step, s.
    pub time_step: f64,
    /// Steps per trajectory.
    pub n_steps: u64,
    /// Total trajectory count (split evenly between enantiomers if racemic).
    pub n_trajectories: u32,
    /// Master seed; trajectory i uses ChaCha stream i of this seed.
    pub master_seed: u64,
    /// Record every k-th step into the decimated series.
    pub record_stride: u64,
    pub initializer: Initializer,
    pub regime: Regime,
    pub enantiomer: Enantiomer,
    /// Keep full (x, y, z) records per trajectory.
    pub store_trajectories: bool,
    /// Run even if the dt criterion fails (the margin is still reported).
    pub allow_unstable_dt: bool,
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.time_step <= 0.0 || self.n_steps == 0 || self.n_trajectories == 0 {
            return Err(Error::InvalidParameter(
                "time step, step count and trajectory count must be positive".into(),
            ));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record_stride must be >= 1".into()));
        }
        if matches!(self.enantiomer, Enantiomer::Racemic) && !self.n_trajectories.is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "racemic ensembles need an even trajectory count".into(),
            ));
        }
        Ok(())
    }

    /// Number of recorded samples per trajectory (step 0 plus every stride).
    pub fn recorded_len(&self) -> usize {
        (self.n_steps / self.record_stride) as usize + 1
    }
}

/// Histogram and escape-accounting domain.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimulationDomain {
    /// Axial histogram half-span: bins cover [-z_half, z_half], m.
    pub z_half: f64,
    /// Axial bin count (even, so z = 0 is a bin edge).
    pub nz: usize,
    /// Radial histogram span [0, q_max], m.
    pub q_max: f64,
    pub nq: usize,
    /// dt-criterion evaluation bounds (statistically accessible region).
    pub stability_z: f64,
    pub stability_q: f64,
}

/// Result of the drift-vs-diffusion time step criterion
/// Max over the accessible domain of |F_i| sqrt(dt) / sqrt(2 kT gamma) <= 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StabilityReport {
    pub dt: f64,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Evaluate the time-step criterion over a grid covering the accessible
/// domain, all cylindrical force components, all supplied models.
pub fn dt_stability_check(
    dt: f64,
    models: &[&ForceModel],
    drag: f64,
    domain: &SimulationDomain,
) -> StabilityReport {
    let mut max_ratio: f64 = 0.0;
    let (nq, nz) = (17, 129);
    for model in models {
        let denom = (2.0 * model.fluid().thermal_energy() * drag).sqrt();
        let scale = dt.sqrt() / denom;
        for iq in 0..=nq {
            let q = domain.stability_q * iq as f64 / nq as f64;
            for iz in 0..=nz {
                let z = -domain.stability_z + 2.0 * domain.stability_z * iz as f64 / nz as f64;
                let f = model.total_cyl(q, z);
                let local = f.f_rho.abs().max(f.f_theta.abs()).max(f.f_z.abs()) * scale;
                max_ratio = max_ratio.max(local);
            }
        }
    }
    StabilityReport {
        dt,
        max_ratio,
        pass: max_ratio <= 1.0,
    }
}

/// One standard-normal draw; the return type disambiguates the f64 impl.
#[inline]
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// The deterministic random stream of one trajectory.
pub fn trajectory_rng(master_seed: u64, trajectory_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trajectory_index);
    rng
}

/// One Euler-Maruyama step in Cartesian coordinates.
///
/// `noise` carries sqrt(dt)-scaled standard normals (eta = sqrt(dt) N(0,1));
/// the diffusion increment is sqrt(2 D) eta. On the axis (rho below 1e-15 m)
/// the radial and azimuthal projections vanish by symmetry.
pub fn euler_maruyama_step(
    model: &ForceModel,
    drag: f64,
    state: [f64; 3],
    dt: f64,
    noise: [f64; 3],
) -> [f64; 3] {
    let [x, y, z] = state;
    let rho = (x * x + y * y).sqrt();
    let f = model.total_cyl(rho, z);
    let (fx, fy) = if rho < 1e-15 {
        (0.0, 0.0)
    } else {
        (
            (x * f.f_rho - y * f.f_theta) / rho,
            (y * f.f_rho + x * f.f_theta) / rho,
        )
    };
    let mobility_dt = dt / drag;
    let diffusion = (2.0 * model.fluid().thermal_energy() / drag).sqrt();
    [
        x + mobility_dt * fx + diffusion * noise[0],
        y + mobility_dt * fy + diffusion * noise[1],
        z + mobility_dt * f.f_z + diffusion * noise[2],
    ]
}

/// One enantiomer class within an ensemble: its force model, its stationary
/// sampler (for `ModelPdf` initialization) and how many trajectories it owns.
pub struct TrajectoryClass<'a> {
    pub label: EnantiomerLabel,
    pub model: &'a ForceModel,
    pub sampler: Option<&'a Pdf2dGrid>,
    pub count: u32,
}

/// Everything needed to run one ensemble.
pub struct EnsembleSpec<'a> {
    pub plan: &'a SimulationPlan,
    pub classes: Vec<TrajectoryClass<'a>>,
    /// Drag coefficient gamma, kg/s.
    pub drag: f64,
    pub domain: SimulationDomain,
}

/// Position record of a single trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    /// Stream index within the master seed.
    pub seed: u64,
    pub master_seed: u64,
    pub label: EnantiomerLabel,
    /// Recording interval, s (time_step * record_stride).
    pub recorded_dt: f64,
    /// Positions (x, y, z) at the recorded steps, m; the first entry is the
    /// sampled initial position.
    pub positions: Vec<[f64; 3]>,
}

/// Fixed-width counting histogram.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram1d {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram1d {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin centers and normalized density (sums to 1 when multiplied by the
    /// bin width).
    pub fn normalized(&self) -> (Vec<f64>, Vec<f64>) {
        let w = self.bin_width();
        let n = self.total() as f64;
        let centers = (0..self.counts.len())
            .map(|i| self.lo + (i as f64 + 0.5) * w)
            .collect();
        let density = self.counts.iter().map(|&c| c as f64 / (n * w)).collect();
        (centers, density)
    }
}

/// 2D (q, z) counting histogram, row-major in q.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram2d {
    pub q_max: f64,
    pub nq: usize,
    pub z_half: f64,
    pub nz: usize,
    pub counts: Vec<u64>,
}

/// Per-enantiomer-class ensemble output.
#[derive(Debug, Clone, Serialize)]
pub struct ClassResult {
    pub label: EnantiomerLabel,
    pub axial: Histogram1d,
    pub density: Histogram2d,
    /// Final z of each trajectory in this class, in trajectory order.
    pub final_z: Vec<f64>,
    /// Recorded samples falling outside the simulation domain.
    pub escapes: u64,
    /// Samples with z < 0 (well A side) and z > 0 (well C side).
    pub count_well_a: u64,
    pub count_well_c: u64,
}

impl ClassResult {
    /// Empirical well population ratio n_C / n_A.
    pub fn population_ratio(&self) -> f64 {
        self.count_well_c as f64 / self.count_well_a as f64
    }
}

/// Output of one ensemble run.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleResult {
    pub classes: Vec<ClassResult>,
    #[serde(skip)]
    pub trajectories: Vec<TrajectoryRecord>,
    pub steps_total: u64,
    pub wall_seconds: f64,
    pub steps_per_second: f64,
    pub stability: StabilityReport,
}

impl EnsembleResult {
    pub fn class(&self, label: EnantiomerLabel) -> Option<&ClassResult> {
        self.classes.iter().find(|c| c.label == label)
    }
}

/// Radially-integrated axial density p_sim(z) of a class: for counting
/// histograms the 2 pi q dq integration is the plain z-marginal of counts.
pub fn empirical_axial_pdf(result: &ClassResult) -> (Vec<f64>, Vec<f64>) {
    result.axial.normalized()
}

struct ClassAccumulator {
    axial: Vec<AtomicU64>,
    density: Vec<AtomicU64>,
    escapes: AtomicU64,
    well_a: AtomicU64,
    well_c: AtomicU64,
}

impl ClassAccumulator {
    fn new(domain: &SimulationDomain) -> Self {
        Self {
            axial: (0..domain.nz).map(|_| AtomicU64::new(0)).collect(),
            density: (0..domain.nz * domain.nq).map(|_| AtomicU64::new(0)).collect(),
            escapes: AtomicU64::new(0),
            well_a: AtomicU64::new(0),
            well_c: AtomicU64::new(0),
        }
    }

    #[inline]
    fn record(&self, domain: &SimulationDomain, rho: f64, z: f64) {
        if z < 0.0 {
            self.well_a.fetch_add(1, Ordering::Relaxed);
        } else {
            self.well_c.fetch_add(1, Ordering::Relaxed);
        }
        let in_z = z >= -domain.z_half && z < domain.z_half;
        let in_q = rho < domain.q_max;
        if !(in_z && in_q) {
            self.escapes.fetch_add(1, Ordering::Relaxed);
            return;
        }
        let iz = (((z + domain.z_half) / (2.0 * domain.z_half)) * domain.nz as f64) as usize;
        let iz = iz.min(domain.nz - 1);
        let iq = ((rho / domain.q_max) * domain.nq as f64) as usize;
        let iq = iq.min(domain.nq - 1);
        self.axial[iz].fetch_add(1, Ordering::Relaxed);
        self.density[iq * domain.nz + iz].fetch_add(1, Ordering::Relaxed);
    }

    fn into_result(self, label: EnantiomerLabel, domain: &SimulationDomain) -> ClassResult {
        ClassResult {
            label,
            axial: Histogram1d {
                lo: -domain.z_half,
                hi: domain.z_half,
                counts: self.axial.into_iter().map(|a| a.into_inner()).collect(),
            },
            density: Histogram2d {
                q_max: domain.q_max,
                nq: domain.nq,
                z_half: domain.z_half,
                nz: domain.nz,
                counts: self.density.into_iter().map(|a| a.into_inner()).collect(),
            },
            final_z: Vec::new(),
            escapes: self.escapes.into_inner(),
            count_well_a: self.well_a.into_inner(),
            count_well_c: self.well_c.into_inner(),
        }
    }
}

fn class_of<'s, 'a>(spec: &'s EnsembleSpec<'a>, index: u32) -> (usize, &'s TrajectoryClass<'a>) {
    let mut offset = 0u32;
    for (ci, class) in spec.classes.iter().enumerate() {
        if index < offset + class.count {
            return (ci, class);
        }
        offset += class.count;
    }
    unreachable!("trajectory index outside class ranges")
}

fn initial_position(
    plan: &SimulationPlan,
    class: &TrajectoryClass<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<[f64; 3]> {
    match plan.initializer {
        Initializer::ModelPdf => {
            let sampler = class.sampler.ok_or_else(|| {
                Error::InvalidParameter(
                    "ModelPdf initializer requires a stationary sampler per class".into(),
                )
            })?;
            let (u_z, u_q, u_t): (f64, f64, f64) =
                (rng.random(), rng.random(), rng.random());
            sampler.sample(u_z, u_q, u_t)
        }
        Initializer::FixedPoint(p) => Ok(p),
        Initializer::UniformBox {
            z_center,
            z_half,
            q_half,
        } => {
            let ux: f64 = rng.random();
            let uy: f64 = rng.random();
            let uz: f64 = rng.random();
            Ok([
                q_half * (2.0 * ux - 1.0),
                q_half * (2.0 * uy - 1.0),
                z_center + z_half * (2.0 * uz - 1.0),
            ])
        }
    }
}

struct TrajectoryOutput {
    final_position: [f64; 3],
    record: Option<TrajectoryRecord>,
    z_series: Option<Vec<f64>>,
}

fn simulate_trajectory(
    spec: &EnsembleSpec<'_>,
    index: u32,
    keep_z_series: bool,
    bins: Option<&[ClassAccumulator]>,
) -> Result<TrajectoryOutput> {
    let plan = spec.plan;
    let (class_index, class) = class_of(spec, index);
    let mut rng = trajectory_rng(plan.master_seed, index as u64);
    let mut pos = initial_position(plan, class, &mut rng)?;

    let sqrt_dt = plan.time_step.sqrt();
    let mut z_series = keep_z_series.then(|| {
        let mut v = Vec::with_capacity(plan.recorded_len());
        v.push(pos[2]);
        v
    });
    let mut positions = plan.store_trajectories.then(|| {
        let mut v = Vec::with_capacity(plan.recorded_len());
        v.push(pos);
        v
    });
    if let Some(b) = bins {
        let rho = (pos[0] * pos[0] + pos[1] * pos[1]).sqrt();
        b[class_index].record(&spec.domain, rho, pos[2]);
    }

    for step in 1..=plan.n_steps {
        let noise = [
            sqrt_dt * standard_normal(&mut rng),
            sqrt_dt * standard_normal(&mut rng),
            sqrt_dt * standard_normal(&mut rng),
        ];
        pos = euler_maruyama_step(class.model, spec.drag, pos, plan.time_step, noise);
        if let Some(b) = bins {
            let rho = (pos[0] * pos[0] + pos[1] * pos[1]).sqrt();
            b[class_index].record(&spec.domain, rho, pos[2]);
        }
        if step % plan.record_stride == 0 {
            if let Some(zs) = z_series.as_mut() {
                zs.push(pos[2]);
            }
            if let Some(ps) = positions.as_mut() {
                ps.push(pos);
            }
        }
    }

    Ok(TrajectoryOutput {
        final_position: pos,
        record: positions.map(|positions| TrajectoryRecord {
            seed: index as u64,
            master_seed: plan.master_seed,
            label: class.label,
            recorded_dt: plan.time_step * plan.record_stride as f64,
            positions,
        }),
        z_series,
    })
}

fn validate_spec(spec: &EnsembleSpec<'_>) -> Result<StabilityReport> {
    spec.plan.validate()?;
    let total: u32 = spec.classes.iter().map(|c| c.count).sum();
    if total != spec.plan.n_trajectories {
        return Err(Error::InvalidParameter(format!(
            "class counts sum to {total}, plan expects {}",
            spec.plan.n_trajectories
        )));
    }
    if matches!(spec.plan.enantiomer, Enantiomer::Racemic)
        && (spec.classes.len() != 2 || spec.classes[0].count != spec.classes[1].count)
    {
        return Err(Error::InvalidParameter(
            "racemic ensembles need two equally sized classes".into(),
        ));
    }
    let models: Vec<&ForceModel> = spec.classes.iter().map(|c| c.model).collect();
    let report = dt_stability_check(spec.plan.time_step, &models, spec.drag, &spec.domain);
    if !report.pass && !spec.plan.allow_unstable_dt {
        return Err(Error::DtUnstable {
            ratio: report.max_ratio,
        });
    }
    Ok(report)
}

/// Run the full ensemble: histograms stream into per-class accumulators,
/// trajectories are optionally stored, the same master seed reproduces every
/// byte regardless of thread count.
pub fn run_ensemble(spec: &EnsembleSpec<'_>) -> Result<EnsembleResult> {
    let stability = validate_spec(spec)?;
    let bins: Vec<ClassAccumulator> = spec
        .classes
        .iter()
        .map(|_| ClassAccumulator::new(&spec.domain))
        .collect();

    let start = Instant::now();
    let outputs = map_indices(spec.plan.n_trajectories, |i| {
        simulate_trajectory(spec, i, false, Some(&bins))
    })?;
    let wall_seconds = start.elapsed().as_secs_f64();

    let mut classes: Vec<ClassResult> = bins
        .into_iter()
        .zip(spec.classes.iter())
        .map(|(acc, class)| acc.into_result(class.label, &spec.domain))
        .collect();
    let mut trajectories = Vec::new();
    let mut offset = 0u32;
    for (ci, class) in spec.classes.iter().enumerate() {
        let outs = &outputs[offset as usize..(offset + class.count) as usize];
        classes[ci].final_z = outs.iter().map(|o| o.final_position[2]).collect();
        offset += class.count;
    }
    for out in outputs {
        if let Some(rec) = out.record {
            trajectories.push(rec);
        }
    }

    let steps_total = spec.plan.n_steps * spec.plan.n_trajectories as u64;
    Ok(EnsembleResult {
        classes,
        trajectories,
        steps_total,
        wall_seconds,
        steps_per_second: steps_total as f64 / wall_seconds.max(1e-12),
        stability,
    })
}

/// Data handed to a per-trajectory analyzer.
pub struct TrajectoryData {
    pub index: u32,
    pub label: EnantiomerLabel,
    /// Sampling interval of `z_series`, s.
    pub recorded_dt: f64,
    pub z_series: Vec<f64>,
    pub final_position: [f64; 3],
}

/// Simulate and map each trajectory through `f` without building histograms.
/// Results come back in trajectory order whatever the schedule.
pub fn map_trajectories<T, F>(spec: &EnsembleSpec<'_>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(TrajectoryData) -> T + Sync,
{
    validate_spec(spec)?;
    map_indices(spec.plan.n_trajectories, |i| {
        let (_, class) = class_of(spec, i);
        let out = simulate_trajectory(spec, i, true, None)?;
        Ok(f(TrajectoryData {
            index: i,
            label: class.label,
            recorded_dt: spec.plan.time_step * spec.plan.record_stride as f64,
            z_series: out.z_series.unwrap_or_default(),
            final_position: out.final_position,
        }))
    })
}

#[cfg(feature = "parallel")]
fn map_indices<T, F>(n: u32, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u32) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indices<T, F>(n: u32, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u32) -> Result<T> + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::FluidMedium;
    use crate::optics::{BeamGeometry, PolarizationSettings, TrapConfiguration};
    use crate::particle::Polarizabilities;
    use num_complex::Complex64;

    fn free_model() -> ForceModel {
        let fluid = FluidMedium::from_refractive_index(1.33, 0.88e-3, 295.0).unwrap();
        let beam = BeamGeometry::from_rayleigh_range(785e-9, 1.715e-6, 0.0, &fluid).unwrap();
        let cfg = TrapConfiguration {
            fluid,
            beam,
            polarization: PolarizationSettings::new(0.0, 0.0, 0.0, 0.0).unwrap(),
        };
        let pol = Polarizabilities {
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
            chi: Complex64::new(0.0, 0.0),
            radius: 20e-9,
        };
        ForceModel::new(cfg, pol, Default::default())
    }

    #[test]
    fn zero_force_zero_noise_is_identity() {
        let model = free_model();
        let state = [1e-8, -2e-8, 3e-8];
        let next = euler_maruyama_step(&model, 1e-10, state, 1e-10, [0.0; 3]);
        assert_eq!(state, next);
    }

    #[test]
    fn free_diffusion_msd_matches_6d_dt() {
        let model = free_model();
        let drag = 1.1058e-10;
        let dt = 1e-9f64;
        let d = model.fluid().thermal_energy() / drag;
        let mut rng = trajectory_rng(7, 0);
        let n = 1_000_000usize;
        let sqrt_dt = dt.sqrt();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let noise = [
                sqrt_dt * standard_normal(&mut rng),
                sqrt_dt * standard_normal(&mut rng),
                sqrt_dt * standard_normal(&mut rng),
            ];
            let next = euler_maruyama_step(&model, drag, [0.0; 3], dt, noise);
            let dr2 = next.iter().map(|c| c * c).sum::<f64>();
            sum += dr2;
            sum_sq += dr2 * dr2;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let expected = 6.0 * d * dt;
        let stderr = (var / n as f64).sqrt();
        assert!(
            (mean - expected).abs() <= 3.0 * stderr,
            "MSD {mean} vs 6 D dt {expected} (3 SE = {})",
            3.0 * stderr
        );
    }

    #[test]
    fn constant_axial_force_drifts_deterministically() {
        // A fixed-amplitude trap exerts force; emulate a constant force by a
        // single step from the axis where F_rho = F_theta = 0.
        let model = free_model();
        let drag = 2e-10;
        let dt = 1e-9;
        let state = [0.0, 0.0, 0.0];
        let next = euler_maruyama_step(&model, drag, state, dt, [0.0; 3]);
        // Zero-amplitude beam: no force at all.
        assert_eq!(next, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn trajectory_streams_are_independent_and_reproducible() {
        let mut a0 = trajectory_rng(42, 0);
        let mut a0_again = trajectory_rng(42, 0);
        let mut a1 = trajectory_rng(42, 1);
        let x0: f64 = a0.random();
        let x0_again: f64 = a0_again.random();
        let x1: f64 = a1.random();
        assert_eq!(x0, x0_again);
        assert_ne!(x0, x1);
    }

    #[test]
    fn recorded_len_counts_initial_sample() {
        let plan = SimulationPlan {
            time_step: 1e-9,
            n_steps: 100,
            n_trajectories: 1,
            master_seed: 1,
            record_stride: 7,
            initializer: Initializer::FixedPoint([0.0; 3]),
            regime: Regime::Achiral,
            enantiomer: Enantiomer::Left,
            store_trajectories: false,
            allow_unstable_dt: true,
        };
        assert_eq!(plan.recorded_len(), 100 / 7 + 1);
    }

    #[test]
    fn racemic_odd_count_rejected() {
        let plan = SimulationPlan {
            time_step: 1e-9,
            n_steps: 10,
            n_trajectories: 3,
            master_seed: 1,
            record_stride: 1,
            initializer: Initializer::FixedPoint([0.0; 3]),
            regime: Regime::Achiral,
            enantiomer: Enantiomer::Racemic,
            store_trajectories: false,
            allow_unstable_dt: true,
        };
        assert!(plan.validate().is_err());
    }
}
