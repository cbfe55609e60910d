//! Derivative tables of the mixture Maxwellians against central differences.
//!
//! cargo run --example linearization_fd

use bgkmix::linearization::{check_derivatives_fd, m12_derivative_table, m21_derivative_table, ARGUMENTS};
use bgkmix::mixture::MixtureParams;

fn main() {
    let p = MixtureParams {
        m1: 1.0,
        m2: 3.0,
        nu11: 0.8,
        nu12: 0.2,
        nu21: 0.6,
        nu22: 0.4,
        epsilon: 1.0 / 3.0,
        delta: 0.4,
        alpha: 0.6,
        gamma: 0.05,
        n_inf_1: 1.0,
        n_inf_2: 1.0,
        l: 3.0,
    }
    .validate()
    .unwrap();

    for (name, t) in [("M12", m12_derivative_table(&p)), ("M21", m21_derivative_table(&p))] {
        println!("{name}: d/d(arg) = (c0 + c1 v + c2 v^2) * equilibrium");
        for (arg, c) in ARGUMENTS.iter().zip(&t.entries) {
            println!("  {arg:>6}: {:+.6} {:+.6} v {:+.6} v^2", c.c0, c.c1, c.c2);
        }
    }
    for step in [1e-3, 1e-4, 1e-5] {
        println!("step {step:.0e}: max relative error {:.3e}", check_derivatives_fd(&p, step));
    }
}
