//! Scratch probe of ensemble dynamics (development aid).

use chiraltrap::medium::{Enantiomer, Regime};
use chiraltrap::setup::{build_setup, ensemble_setup, residency_plan, Preset, SetupParams};
use chiraltrap::simulator::EnantiomerLabel;
use chiraltrap::statistics::{detect_jumps, residency_distribution, HysteresisConfig};

fn main() {
    let setup = build_setup(&SetupParams {
        regime: Regime::Dissipative,
        ..Default::default()
    })
    .unwrap();

    let mut plan = residency_plan(Preset::Desk, Regime::Dissipative, Enantiomer::Racemic, 12345);
    let ensemble = ensemble_setup(&setup, plan).unwrap();
    let result = ensemble.run().unwrap();
    println!(
        "steps/s = {:.3e}  wall = {:.2}s  stability ratio {:.3}",
        result.steps_per_second, result.wall_seconds, result.stability.max_ratio
    );
    for class in &result.classes {
        println!(
            "{:?}: n_C/n_A = {:.4}  escapes = {}",
            class.label,
            class.population_ratio(),
            class.escapes
        );
    }

    // Jump statistics on the same run.
    let hysteresis = HysteresisConfig::from_model(&setup.left, Regime::Dissipative, setup.drag)
        .unwrap();
    println!(
        "hysteresis sigma = {:.3} nm, t_corr = {:.3e}/{:.3e} s",
        hysteresis.exclusion_sigma * 1e9,
        hysteresis.correlation_time_a,
        hysteresis.correlation_time_c
    );
    let per_traj = ensemble
        .map(|data| {
            (
                data.label,
                detect_jumps(&data.z_series, data.recorded_dt, &hysteresis),
            )
        })
        .unwrap();
    let left: Vec<_> = per_traj
        .iter()
        .filter(|(l, _)| *l == EnantiomerLabel::Left)
        .map(|(_, e)| e.clone())
        .collect();
    let total_events: usize = left.iter().map(|e| e.len()).sum();
    println!("left events total = {total_events}");
    // State-time ratio (renewal identity check): sum of full residencies per
    // state, no correlation-time cut, censored included via events only.
    let (mut time_a, mut time_c) = (0.0f64, 0.0f64);
    let (mut full_a, mut full_c): (Vec<f64>, Vec<f64>) = (vec![], vec![]);
    for events in &left {
        for (i, e) in events.iter().enumerate() {
            let tau = e.residency();
            match e.from_well {
                chiraltrap::statistics::Well::A => {
                    time_a += tau;
                    if i > 0 { full_a.push(tau); }
                }
                chiraltrap::statistics::Well::C => {
                    time_c += tau;
                    if i > 0 { full_c.push(tau); }
                }
            }
        }
    }
    let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    println!(
        "state-time ratio C/A = {:.4}; uncut mean ratio = {:.4} (nA={} nC={})",
        time_c / time_a,
        mean(&full_c) / mean(&full_a),
        full_a.len(),
        full_c.len()
    );
    match residency_distribution(&left, &hysteresis) {
        Ok(stats) => println!(
            "left: tau_A = {:.3e} s, tau_C = {:.3e} s, ratio = {:.4} +- {:.4} (means {:.4})",
            stats.well_a.mean_tau,
            stats.well_c.mean_tau,
            stats.ratio_c_over_a,
            stats.ratio_stderr,
            stats.ratio_of_means
        ),
        Err(e) => println!("fit failed: {e}"),
    }
}
