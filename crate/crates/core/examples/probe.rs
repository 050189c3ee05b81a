//! Scratch probe of the landscape numbers (development aid).

use chiraltrap::landscape::{
    dissipative_rates, kramers_rates, locate_extrema_of, population_ratio_3d, quadrature_rates,
    AxialPotential,
};
use chiraltrap::medium::Regime;
use chiraltrap::setup::{build_setup, SetupParams};

fn main() {
    let params = SetupParams {
        regime: Regime::Dissipative,
        ..Default::default()
    };
    let setup = build_setup(&params).unwrap();
    let kt = setup.thermal_energy();
    let ls = setup.landscape;
    println!("alpha = {:?}", setup.left.polarizabilities.alpha);
    println!("chi   = {:?}", setup.left.polarizabilities.chi);
    println!(
        "Im(alpha)/Re(alpha) = {:.6}",
        setup.left.polarizabilities.alpha.im / setup.left.polarizabilities.alpha.re
    );
    println!(
        "z_c = {:.4} nm, dl = {:.4} nm, barrier = {:.6} kT, sigma_b = {:.4} nm",
        ls.z_c * 1e9,
        ls.well_separation * 1e9,
        ls.barrier_ab / kt,
        ls.barrier_sigma(kt) * 1e9
    );
    println!(
        "curv_a = {:.4e}, curv_b = {:.4e} J/m^2, E0 = {:.6e} V/m",
        ls.curvature_a, ls.curvature_b, setup.config.beam.field_amplitude
    );
    let (sa, _) = ls.well_sigmas(kt);
    println!("sigma_a = {:.4} nm", sa * 1e9);

    let f0 = setup.left.chiral_dissipative_z(0.0, 0.0);
    println!(
        "F0(left) = {:.4e} N, exponent F0*dl/kT = {:.5}",
        f0,
        f0 * ls.well_separation / kt
    );
    let (rates, thermo) = dissipative_rates(&ls, &setup.left, setup.drag).unwrap();
    println!(
        "model ratio = {:.5}  (exp = {:.5}), dQ = {:.5} kT",
        rates.ratio(),
        (f0 * ls.well_separation / kt).exp(),
        thermo.heat_transfer
    );
    let pop = population_ratio_3d(&setup.left, 2).unwrap();
    println!("3D population ratio = {:.5}", pop);
    println!("mutual (model/pop) = {:.5} vs 0.29/0.36 = {:.5}", rates.ratio() / pop, 0.29 / 0.36);

    // Kramers vs quadrature on the achiral landscape at 1, 2, 4 kT.
    let base = kramers_rates(&ls, kt, setup.drag);
    println!(
        "kappa_SD = {:.5e} /s  (mean residency {:.3e} s)",
        base.rate_ac,
        1.0 / base.rate_ac
    );
    let pot = AxialPotential::optical(&setup.left);
    let quad = quadrature_rates(&pot, &ls, kt, setup.drag);
    println!(
        "kappa_quad = {:.5e} /s, SD/quad = {:.4}",
        quad.rate_ac,
        base.rate_ac / quad.rate_ac
    );
    for barrier_kt in [2.0, 4.0] {
        let params2 = SetupParams {
            barrier_kt,
            regime: Regime::Achiral,
            ..Default::default()
        };
        let s2 = build_setup(&params2).unwrap();
        let pot2 = AxialPotential::optical(&s2.left);
        let ls2 = locate_extrema_of(&pot2).unwrap();
        let sd = kramers_rates(&ls2, kt, s2.drag);
        let qd = quadrature_rates(&pot2, &ls2, kt, s2.drag);
        println!(
            "barrier {} kT: SD/quad = {:.4}",
            barrier_kt,
            sd.rate_ac / qd.rate_ac
        );
    }

    // dt criterion margins.
    use chiraltrap::setup::simulation_domain;
    use chiraltrap::simulator::dt_stability_check;
    let dom = simulation_domain(&setup, Regime::Dissipative).unwrap();
    for dt in [95.4e-12, 0.95e-9] {
        let rep = dt_stability_check(dt, &[&setup.left, &setup.right], setup.drag, &dom);
        println!("dt = {:.3e}: max ratio = {:.3} pass = {}", dt, rep.max_ratio, rep.pass);
    }
    println!(
        "domain: z_half = {:.2} nm, q_max = {:.3} nm, stability_z = {:.2} nm",
        dom.z_half * 1e9,
        dom.q_max * 1e9,
        dom.stability_z * 1e9
    );
}
