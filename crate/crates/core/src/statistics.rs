//! Residency-time statistics of bistable trajectories.
//!
//! Jumps between wells are detected with a hysteresis criterion: the state
//! flips only when the opposite threshold at +-sigma is reached, so barrier
//! recrossings produce no events. Residency times above the per-well
//! correlation time follow the exponential law P(tau) = exp(-tau/<tau>)/<tau>;
//! a count-weighted least-squares fit of ln P yields the mean residency and
//! its uncertainty. Comparing mean residencies across the achiral, reactive
//! and dissipative couplings turns time measurements into an absolute
//! determination of Re[chi] and Im[chi].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forcefield::ForceModel;
use crate::landscape::{locate_extrema_of, quadrature_rates, AxialPotential, BistableLandscape};
use crate::medium::Regime;
use num_complex::Complex64;

/// Wells of the bistable landscape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Well {
    A,
    C,
}

/// Hysteresis thresholds and correlation times for jump filtering.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HysteresisConfig {
    /// Exclusion half-width sigma, m: well A is left of -sigma, well C right
    /// of +sigma (thresholds are centered on the barrier position).
    pub exclusion_sigma: f64,
    /// Barrier position the thresholds straddle, m.
    pub barrier_z: f64,
    /// Position correlation time of well A, s: residencies shorter than this
    /// are excluded from the fits.
    pub correlation_time_a: f64,
    pub correlation_time_c: f64,
    /// Minimum uncensored events per well required for a fit.
    pub min_events: usize,
}

impl HysteresisConfig {
    /// Derive sigma and the correlation times from the curvatures of the
    /// effective potential phi_eff = U_opt + U_chi_reac + u_chi_diss:
    /// sigma = sqrt(kT / |phi_eff''(z_B)|), t_corr,i = 2 pi gamma / phi_eff''(z_i).
    pub fn from_model(model: &ForceModel, regime: Regime, drag: f64) -> Result<Self> {
        let potential = AxialPotential::effective(model, regime)?;
        let landscape = locate_extrema_of(&potential)?;
        let kt = model.fluid().thermal_energy();
        Ok(Self {
            exclusion_sigma: (kt / landscape.curvature_b).sqrt(),
            barrier_z: landscape.z_b,
            correlation_time_a: 2.0 * std::f64::consts::PI * drag / landscape.curvature_a,
            correlation_time_c: 2.0 * std::f64::consts::PI * drag / landscape.curvature_c,
            min_events: 10,
        })
    }

    /// Replace the derived sigma (e.g. with a fixed 10 nm hysteresis).
    pub fn with_sigma(self, sigma: f64) -> Self {
        Self {
            exclusion_sigma: sigma,
            ..self
        }
    }

    fn correlation_time(&self, well: Well) -> f64 {
        match well {
            Well::A => self.correlation_time_a,
            Well::C => self.correlation_time_c,
        }
    }
}

/// A completed well-to-well transition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JumpEvent {
    pub from_well: Well,
    pub to_well: Well,
    /// Time the trajectory entered `from_well`, s.
    pub entry_time: f64,
    /// Time it completed the jump into `to_well`, s.
    pub exit_time: f64,
}

impl JumpEvent {
    /// Residency duration in `from_well`, s.
    pub fn residency(&self) -> f64 {
        self.exit_time - self.entry_time
    }
}

/// Hysteresis state machine over a uniformly sampled z series.
///
/// The particle is in well A while below (barrier - sigma) and in well C
/// while above (barrier + sigma); excursions that fail to reach the opposite
/// threshold change nothing. An empty return is a valid outcome.
pub fn detect_jumps(z_series: &[f64], sample_dt: f64, hysteresis: &HysteresisConfig) -> Vec<JumpEvent> {
    let lo = hysteresis.barrier_z - hysteresis.exclusion_sigma;
    let hi = hysteresis.barrier_z + hysteresis.exclusion_sigma;
    let mut events = Vec::new();
    let mut state: Option<(Well, f64)> = None;
    for (i, &z) in z_series.iter().enumerate() {
        let t = i as f64 * sample_dt;
        match state {
            None => {
                if z <= lo {
                    state = Some((Well::A, t));
                } else if z >= hi {
                    state = Some((Well::C, t));
                }
            }
            Some((Well::A, entry)) => {
                if z >= hi {
                    events.push(JumpEvent {
                        from_well: Well::A,
                        to_well: Well::C,
                        entry_time: entry,
                        exit_time: t,
                    });
                    state = Some((Well::C, t));
                }
            }
            Some((Well::C, entry)) => {
                if z <= lo {
                    events.push(JumpEvent {
                        from_well: Well::C,
                        to_well: Well::A,
                        entry_time: entry,
                        exit_time: t,
                    });
                    state = Some((Well::A, t));
                }
            }
        }
    }
    events
}

/// Exponential fit of one well's residency distribution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WellFit {
    /// Mean residency from the fitted slope, s.
    pub mean_tau: f64,
    /// Fitted decay rate 1/<tau>, 1/s.
    pub slope: f64,
    /// Standard error of the slope, 1/s.
    pub slope_stderr: f64,
    /// Plain sample mean of the fitted (uncensored, above-t_corr) samples, s.
    pub sample_mean: f64,
    pub n_samples: usize,
    pub n_bins: usize,
}

impl WellFit {
    pub fn mean_tau_rel_err(&self) -> f64 {
        self.slope_stderr / self.slope
    }
}

/// Aggregated residency statistics of both wells.
#[derive(Debug, Clone, Serialize)]
pub struct ResidencyStatistics {
    pub well_a: WellFit,
    pub well_c: WellFit,
    /// Headline ratio <tau_C> / <tau_A> from the fitted slopes.
    pub ratio_c_over_a: f64,
    /// Propagated standard error of the ratio.
    pub ratio_stderr: f64,
    /// Same ratio from the raw sample means.
    pub ratio_of_means: f64,
    /// Censored residencies dropped (first event of each trajectory).
    pub censored: usize,
    /// Residencies dropped for being shorter than the correlation time.
    pub short_excluded: usize,
}

/// Collect residencies from per-trajectory event lists and fit both wells.
///
/// Each trajectory's first event is censored (its entry time is the trace
/// start, not a real well entry); the interval after the last event never
/// forms an event at all. Residencies below the destination-well correlation
/// time are excluded before binning.
pub fn residency_distribution(
    events_per_trajectory: &[Vec<JumpEvent>],
    hysteresis: &HysteresisConfig,
) -> Result<ResidencyStatistics> {
    let mut tau_a = Vec::new();
    let mut tau_c = Vec::new();
    let mut censored = 0usize;
    let mut short_excluded = 0usize;
    for events in events_per_trajectory {
        for (i, event) in events.iter().enumerate() {
            if i == 0 {
                censored += 1;
                continue;
            }
            let tau = event.residency();
            if tau < hysteresis.correlation_time(event.from_well) {
                short_excluded += 1;
                continue;
            }
            match event.from_well {
                Well::A => tau_a.push(tau),
                Well::C => tau_c.push(tau),
            }
        }
    }
    if tau_a.len() < hysteresis.min_events || tau_c.len() < hysteresis.min_events {
        return Err(Error::InsufficientEvents {
            well_a: tau_a.len(),
            well_c: tau_c.len(),
            required: hysteresis.min_events,
        });
    }
    let well_a = fit_exponential(&tau_a)?;
    let well_c = fit_exponential(&tau_c)?;
    let ratio = well_a.slope / well_c.slope; // <tau_C>/<tau_A> = slope_A/slope_C
    let rel = (well_a.mean_tau_rel_err().powi(2) + well_c.mean_tau_rel_err().powi(2)).sqrt();
    Ok(ResidencyStatistics {
        well_a,
        well_c,
        ratio_c_over_a: ratio,
        ratio_stderr: ratio * rel,
        ratio_of_means: well_c.sample_mean / well_a.sample_mean,
        censored,
        short_excluded,
    })
}

/// Count-weighted least squares of ln P(tau) over linear bins of width
/// <tau>_moment / 10 (narrowed until at least 8 bins are occupied).
pub fn fit_exponential(samples: &[f64]) -> Result<WellFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientEvents {
            well_a: samples.len(),
            well_c: samples.len(),
            required: 3,
        });
    }
    let n = samples.len() as f64;
    let sample_mean = samples.iter().sum::<f64>() / n;
    let t_lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_hi = samples.iter().cloned().fold(0.0f64, f64::max);

    let mut width = sample_mean / 10.0;
    let mut best: Option<(Vec<f64>, Vec<u64>)> = None;
    for _ in 0..6 {
        let n_bins = (((t_hi - t_lo) / width).ceil() as usize + 1).max(2);
        let mut counts = vec![0u64; n_bins];
        for &tau in samples {
            let idx = (((tau - t_lo) / width) as usize).min(n_bins - 1);
            counts[idx] += 1;
        }
        let centers: Vec<f64> = (0..n_bins)
            .map(|i| t_lo + (i as f64 + 0.5) * width)
            .collect();
        let occupied = counts.iter().filter(|&&c| c > 0).count();
        best = Some((centers, counts));
        if occupied >= 8 {
            break;
        }
        width *= 0.5;
    }
    let (centers, counts) = best.unwrap();

    // Weighted linear regression of ln(P) on tau; Poisson counts give
    // Var[ln n] ~ 1/n, so the weights are the counts themselves.
    let (mut s, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut n_bins_used = 0usize;
    let bin_width = centers[1] - centers[0];
    for (center, &count) in centers.iter().zip(counts.iter()) {
        if count == 0 {
            continue;
        }
        n_bins_used += 1;
        let w = count as f64;
        let y = (count as f64 / (n * bin_width)).ln();
        s += w;
        sx += w * center;
        sy += w * y;
        sxx += w * center * center;
        sxy += w * center * y;
    }
    if n_bins_used < 2 {
        return Err(Error::InsufficientEvents {
            well_a: n_bins_used,
            well_c: n_bins_used,
            required: 2,
        });
    }
    let delta = s * sxx - sx * sx;
    let slope = (s * sxy - sx * sy) / delta;
    let slope_var = s / delta;
    if !slope.is_finite() || slope >= 0.0 {
        return Err(Error::InvalidParameter(
            "residency distribution has non-decaying fit; more statistics needed".into(),
        ));
    }
    Ok(WellFit {
        mean_tau: -1.0 / slope,
        slope: -slope,
        slope_stderr: slope_var.sqrt(),
        sample_mean,
        n_samples: samples.len(),
        n_bins: n_bins_used,
    })
}

/// A measured mean residency with its relative uncertainty.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeasuredTau {
    pub value: f64,
    pub rel_err: f64,
}

impl MeasuredTau {
    pub fn from_fit(fit: &WellFit) -> Self {
        Self {
            value: fit.mean_tau,
            rel_err: fit.mean_tau_rel_err(),
        }
    }
}

/// Mean residencies measured in the three coupling regimes on one calibrated
/// landscape.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidencyMeasurements {
    /// Achiral reference (wells are degenerate).
    pub achiral: MeasuredTau,
    pub reactive_a: MeasuredTau,
    pub reactive_c: MeasuredTau,
    pub dissipative_a: MeasuredTau,
    pub dissipative_c: MeasuredTau,
}

/// One extracted quantity with per-well values and spread.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChiEstimate {
    /// Combined (mean of wells) estimate, m^3.
    pub value: f64,
    pub well_a: f64,
    pub well_c: f64,
    /// Combined 1-sigma uncertainty from the residency errors, m^3.
    pub sigma: f64,
}

/// Absolute chirality determination from residency times.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChiExtraction {
    /// First-order estimates: the measured ln-ratio divided by the per-unit
    /// chiral potential difference (Re) or force-displacement factor (Im).
    pub re_chi_linear: ChiEstimate,
    pub im_chi_linear: ChiEstimate,
    /// Full-model estimates: the chi value whose 1D flux-over-population
    /// quadrature rates reproduce the measured ratios. These carry the
    /// landscape anharmonicity and curvature shifts the first-order formula
    /// neglects.
    pub re_chi: ChiEstimate,
    pub im_chi: ChiEstimate,
}

/// Extract Re[chi] and Im[chi] from residency times measured in the achiral,
/// reactive and dissipative regimes on the same calibrated landscape.
///
/// `reactive_model` and `dissipative_model` carry the field settings of the
/// chiral runs (their chi values are irrelevant; only per-unit factors and
/// geometry enter). Both wells give independent estimates; they must agree
/// within 3x their combined uncertainty.
pub fn absolute_chi_extraction(
    measured: &ResidencyMeasurements,
    landscape: &BistableLandscape,
    reactive_model: &ForceModel,
    dissipative_model: &ForceModel,
    drag: f64,
) -> Result<ChiExtraction> {
    let kt = reactive_model.fluid().thermal_energy();

    // Per-unit-Re[chi] chiral potential difference U_chi(z_B) - U_chi(z_i).
    let per_re_chi = |z: f64| {
        reactive_model.config.polarization.helicity_difference()
            * w_trap_on_axis(reactive_model, z)
    };
    let g_a = per_re_chi(landscape.z_b) - per_re_chi(landscape.z_a);
    let g_c = per_re_chi(landscape.z_b) - per_re_chi(landscape.z_c);

    // Linear reactive estimates: kappa~ = kappa exp(-Re[chi] G_i / kT).
    let ln_ra = (measured.reactive_a.value / measured.achiral.value).ln();
    let ln_rc = (measured.reactive_c.value / measured.achiral.value).ln();
    let re_a = kt * ln_ra / g_a;
    let re_c = kt * ln_rc / g_c;
    let sig_re_a = kt
        * (measured.reactive_a.rel_err.powi(2) + measured.achiral.rel_err.powi(2)).sqrt()
        / g_a.abs();
    let sig_re_c = kt
        * (measured.reactive_c.rel_err.powi(2) + measured.achiral.rel_err.powi(2)).sqrt()
        / g_c.abs();
    let re_linear = combine_wells(re_a, re_c, sig_re_a, sig_re_c)?;

    // Linear dissipative estimates: kappa^ = kappa exp(+F0 (z_B - z_i) / kT),
    // F0 = Im[chi] * f_unit.
    let f_unit = dissipative_model.chiral_dissipative_per_im_chi(0.0, 0.0);
    let ln_da = (measured.dissipative_a.value / measured.achiral.value).ln();
    let ln_dc = (measured.dissipative_c.value / measured.achiral.value).ln();
    let im_a = -kt * ln_da / ((landscape.z_b - landscape.z_a) * f_unit);
    let im_c = -kt * ln_dc / ((landscape.z_b - landscape.z_c) * f_unit);
    let sig_im_a = kt
        * (measured.dissipative_a.rel_err.powi(2) + measured.achiral.rel_err.powi(2)).sqrt()
        / ((landscape.z_b - landscape.z_a) * f_unit).abs();
    let sig_im_c = kt
        * (measured.dissipative_c.rel_err.powi(2) + measured.achiral.rel_err.powi(2)).sqrt()
        / ((landscape.z_b - landscape.z_c) * f_unit).abs();
    let im_linear = combine_wells(im_a, im_c, sig_im_a, sig_im_c)?;

    // Full-model refinement: invert the quadrature rates of the effective 1D
    // potential. The achiral reference rate comes from the same oracle.
    let kappa_ach = {
        let pot = AxialPotential::optical(reactive_model);
        let ls = locate_extrema_of(&pot)?;
        quadrature_rates(&pot, &ls, kt, drag).rate_ac
    };
    let solve = |target_ln: f64, well_a_side: bool, model: &ForceModel, re_part: bool, start: f64| {
        invert_rate_model(
            model, re_part, well_a_side, kappa_ach, target_ln, kt, drag, start,
        )
    };
    let re_ra = solve(-ln_ra, true, reactive_model, true, re_a)?;
    let re_rc = solve(-ln_rc, false, reactive_model, true, re_c)?;
    let re_refined = combine_wells(
        re_ra,
        re_rc,
        sig_re_a * (re_ra / re_a).abs().max(1.0),
        sig_re_c * (re_rc / re_c).abs().max(1.0),
    )?;
    let im_da = solve(-ln_da, true, dissipative_model, false, im_a)?;
    let im_dc = solve(-ln_dc, false, dissipative_model, false, im_c)?;
    let im_refined = combine_wells(
        im_da,
        im_dc,
        sig_im_a * (im_da / im_a).abs().max(1.0),
        sig_im_c * (im_dc / im_c).abs().max(1.0),
    )?;

    Ok(ChiExtraction {
        re_chi_linear: re_linear,
        im_chi_linear: im_linear,
        re_chi: re_refined,
        im_chi: im_refined,
    })
}

fn w_trap_on_axis(model: &ForceModel, z: f64) -> f64 {
    let zr = model.config.beam.rayleigh_range();
    model.config.w_trap_peak() / (1.0 + (z / zr) * (z / zr))
}

fn combine_wells(a: f64, c: f64, sigma_a: f64, sigma_c: f64) -> Result<ChiEstimate> {
    let sigma = (sigma_a * sigma_a + sigma_c * sigma_c).sqrt();
    if (a - c).abs() > 3.0 * sigma {
        return Err(Error::InconsistentWells { a, c, sigma });
    }
    Ok(ChiEstimate {
        value: 0.5 * (a + c),
        well_a: a,
        well_c: c,
        sigma,
    })
}

/// Find chi (real or imaginary part) such that the quadrature escape rate of
/// the effective potential over the achiral reference rate matches
/// exp(target_ln). Secant iteration from the linearized starting value.
#[allow(clippy::too_many_arguments)]
fn invert_rate_model(
    model: &ForceModel,
    re_part: bool,
    well_a_side: bool,
    kappa_achiral: f64,
    target_ln: f64,
    kt: f64,
    drag: f64,
    start: f64,
) -> Result<f64> {
    let regime = if re_part {
        Regime::Reactive
    } else {
        Regime::Dissipative
    };
    let predict = |s: f64| -> Result<f64> {
        let chi = if re_part {
            Complex64::new(s, 0.0)
        } else {
            Complex64::new(0.0, s)
        };
        let pol = crate::particle::Polarizabilities {
            chi,
            ..model.polarizabilities
        };
        let scaled = ForceModel::new(model.config, pol, model.options);
        let potential = AxialPotential::effective(&scaled, regime)?;
        let ls = locate_extrema_of(&potential)?;
        let rates = quadrature_rates(&potential, &ls, kt, drag);
        let rate = if well_a_side {
            rates.rate_ac
        } else {
            rates.rate_ca
        };
        Ok((rate / kappa_achiral).ln())
    };

    let mut s0 = start;
    let mut s1 = if start == 0.0 { 1e-27 } else { start * 1.05 };
    let mut f0 = predict(s0)? - target_ln;
    for _ in 0..40 {
        let f1 = predict(s1)? - target_ln;
        if (f1 - f0).abs() < 1e-300 {
            break;
        }
        let s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
        s0 = s1;
        f0 = f1;
        s1 = s2;
        if (s1 - s0).abs() <= 1e-10 * s1.abs().max(1e-30) {
            break;
        }
    }
    Ok(s1)
}

// ---------------------------------------------------------------------------
// Goodness-of-fit helpers.
// ---------------------------------------------------------------------------

/// Kolmogorov-Smirnov statistic of samples against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x).clamp(0.0, 1.0);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i as f64 + 1.0) / n - f).abs());
    }
    d
}

/// Asymptotic Kolmogorov p-value: P(D > d) = 2 sum (-1)^{k-1} exp(-2 k^2 n d^2).
pub fn kolmogorov_pvalue(d: f64, n: usize) -> f64 {
    let lambda = (n as f64).sqrt() * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// Linear interpolation of a tabulated CDF (nodes ascending).
pub fn interp_cdf(nodes: &[f64], cdf: &[f64], x: f64) -> f64 {
    if x <= nodes[0] {
        return 0.0;
    }
    if x >= *nodes.last().unwrap() {
        return 1.0;
    }
    let mut lo = 0usize;
    let mut hi = nodes.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if nodes[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = (x - nodes[lo]) / (nodes[hi] - nodes[lo]);
    cdf[lo] + t * (cdf[hi] - cdf[lo])
}

/// Chi-square p-value of observed counts against a uniform expectation.
pub fn chi_square_uniform_pvalue(counts: &[u64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let diff = c as f64 - expected;
            diff * diff / expected
        })
        .sum();
    let dof = (counts.len() - 1) as f64;
    let dist = ChiSquared::new(dof).expect("valid dof");
    1.0 - dist.cdf(stat)
}
