//! Project a perturbation, evolve it with the exact exponential and RK4,
//! and watch the k = 0 conserved combinations.
//!
//! cargo run --example evolve_modes

use bgkmix::mixture::MixtureParams;
use bgkmix::spectral::{evolve, mode_moments, project, Integrator, ProjectOptions, TransportConvention};

fn main() {
    let p = MixtureParams { m2: 2.0, ..MixtureParams::symmetric() }.validate().unwrap();
    let wave = 2.0 * std::f64::consts::PI / p.l;
    // smooth bump in x times a tilted Maxwellian shape in v
    let h1 = |x: f64, v: f64| 0.1 * (wave * x).cos() * v * (-0.5 * v * v).exp();
    let h2 = |x: f64, v: f64| 0.05 * (2.0 * wave * x).sin() * (1.0 - 2.0 * v * v) * (-v * v).exp();
    let (f, warn) = project(&p, h1, h2, 12, 4, ProjectOptions::default()).unwrap();
    println!("aliasing warning: {warn:?}");

    let conv = TransportConvention::MassScaled;
    for t in [0.0, 1.0, 5.0] {
        let g = evolve(&f, &p, t, Integrator::ExactExponential, conv).unwrap();
        let (a, b) = mode_moments(g.mode(1), &p);
        let m0 = g.mode(0);
        let mom = m0.hhat1[1] * p.m1.sqrt() + m0.hhat2[1] * p.m2.sqrt();
        println!(
            "t = {t:>4}: |sigma1(k=1)| = {:.4e}, |sigma2(k=1)| = {:.4e}, k=0 momentum {:.3e}",
            a.sigma.norm(),
            b.sigma.norm(),
            mom.norm()
        );
    }
    let exact = evolve(&f, &p, 1.0, Integrator::ExactExponential, conv).unwrap();
    for dt in [0.02, 0.01] {
        let rk = evolve(&f, &p, 1.0, Integrator::Rk4 { dt }, conv).unwrap();
        let err: f64 = (0..=4).map(|k| (rk.mode(k).stacked() - exact.mode(k).stacked()).norm()).sum();
        println!("RK4 dt = {dt}: error vs exponential {err:.3e}");
    }
}
