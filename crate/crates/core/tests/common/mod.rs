#![allow(dead_code)]

use std::f64::consts::PI;

use bgkmix::mixture::MixtureParams;
use bgkmix::ValidatedParams;
use rand::Rng;

/// Admissible but not necessarily normalized.
pub fn admissible<R: Rng>(rng: &mut R) -> MixtureParams {
    let m1 = rng.random_range(0.2..5.0);
    let m2 = rng.random_range(0.2..5.0);
    let epsilon = rng.random_range(0.05..=1.0);
    let nu21 = rng.random_range(0.0..3.0);
    let mut p = MixtureParams {
        m1,
        m2,
        nu11: rng.random_range(0.0..3.0),
        nu12: epsilon * nu21,
        nu21,
        nu22: rng.random_range(0.0..3.0),
        epsilon,
        delta: 0.0,
        alpha: rng.random_range(0.0..=1.0),
        gamma: 0.0,
        n_inf_1: rng.random_range(0.1..5.0),
        n_inf_2: rng.random_range(0.1..5.0),
        l: rng.random_range(0.5..20.0),
    };
    let lo = p.delta_lower_bound().max(-1.0);
    p.delta = lo + (1.0 - lo) * rng.random_range(0.0..=1.0);
    p.gamma = p.gamma_upper_bound().max(0.0) * rng.random_range(0.0..=1.0);
    p
}

/// Theorem-eligible: admissible with both row sums equal to one.
pub fn eligible<R: Rng>(rng: &mut R) -> ValidatedParams {
    let m1: f64 = rng.random_range(0.5..3.0);
    let m2 = rng.random_range(0.5..3.0);
    let n1: f64 = rng.random_range(0.5..2.0);
    let n2: f64 = rng.random_range(0.5..2.0);
    let epsilon: f64 = rng.random_range(0.2..=1.0);
    let s = rng.random_range(0.1..0.9) * (epsilon * n2 / n1).min(1.0);
    let nu12 = s / n2;
    let nu21 = nu12 / epsilon;
    let mut p = MixtureParams {
        m1,
        m2,
        nu11: (1.0 - s) / n1,
        nu12,
        nu21,
        nu22: (1.0 - nu21 * n1) / n2,
        epsilon,
        delta: 0.0,
        alpha: rng.random_range(0.0..0.9),
        gamma: 0.0,
        n_inf_1: n1,
        n_inf_2: n2,
        l: rng.random_range(1.0..10.0),
    };
    let lo = p.delta_lower_bound().max(0.0);
    p.delta = lo + (1.0 - lo) * rng.random_range(0.0..0.9);
    p.gamma = p.gamma_upper_bound().max(0.0) * rng.random_range(0.0..0.5);
    let v = p.validate().expect("recipe yields admissible parameters");
    assert!(v.theorem_eligible(), "recipe yields normalized parameters: {p:?}");
    v
}

/// Unequal masses and densities, normalized.
pub fn asymmetric() -> ValidatedParams {
    MixtureParams {
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
    .unwrap()
}

pub fn symmetric() -> ValidatedParams {
    MixtureParams::symmetric().validate().unwrap()
}

pub fn two_pi() -> f64 {
    2.0 * PI
}
