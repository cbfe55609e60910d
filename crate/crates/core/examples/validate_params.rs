//! Admissibility report for a few parameter sets.
//!
//! cargo run --example validate_params

use bgkmix::mixture::MixtureParams;

fn show(label: &str, p: MixtureParams) {
    println!("== {label}");
    let r = p.report();
    for c in r.constraints.iter().filter(|c| !c.satisfied) {
        println!("  {} {} {:.4} vs {:.4} ({})", c.name, c.relation, c.lhs, c.rhs, if c.hard { "hard" } else { "flag" });
    }
    match p.validate() {
        Ok(v) => println!("  admissible, theorem-eligible: {}", v.theorem_eligible()),
        Err(e) => println!("  rejected: {e}"),
    }
}

fn main() {
    show("symmetric", MixtureParams::symmetric());
    show("unnormalized frequencies", MixtureParams { nu11: 0.9, ..MixtureParams::symmetric() });
    let p = MixtureParams { m2: 4.0, epsilon: 0.5, nu11: 0.75, nu12: 0.25, ..MixtureParams::symmetric() };
    println!("lower bound on delta for m2 = 4, eps = 0.5: {:.4}", p.delta_lower_bound());
    show("at the bound", MixtureParams { delta: p.delta_lower_bound(), ..p });
    show("delta too small", MixtureParams { delta: -0.9, ..p });
    show("negative mass and gamma", MixtureParams { m1: -1.0, gamma: -0.1, ..MixtureParams::symmetric() });
}
