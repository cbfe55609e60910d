//! Spectral solution against the velocity-grid reference for a few modes.
//!
//! cargo run --release --example oracle_compare

use bgkmix::config::{initial_field, InitialSpec, RunConfig, Truncation};
use bgkmix::mixture::MixtureParams;
use bgkmix::oracle::{compare, default_grid, trapezoid_grid};
use bgkmix::spectral::TransportConvention;

fn main() {
    let params = MixtureParams { m2: 2.0, l: 4.0 * std::f64::consts::PI, ..MixtureParams::symmetric() };
    let p = params.validate().unwrap();
    let cfg = RunConfig {
        params,
        truncation: Truncation { order: 24, k_max: 4 },
        initial: InitialSpec::RandomBandLimited { k_max: 4, order_max: 5, amplitude: 0.1 },
        ..RunConfig::default()
    };
    let f = initial_field(&cfg).unwrap();
    for (name, grid) in [("gauss-hermite", default_grid(&p, 160).unwrap()), ("trapezoid", trapezoid_grid(&p, 200).unwrap())] {
        for k in [0, 2, 4] {
            let r = compare(&f, &p, k, 1.0, &grid, TransportConvention::MassScaled).unwrap();
            println!(
                "{name:>13} k = {k}: moment error {:.2e}, profile error {:.2e}",
                r.moment_rel_error, r.profile_rel_error
            );
        }
    }
}
