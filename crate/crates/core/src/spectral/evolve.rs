use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::ValidatedParams;
use crate::spectral::{coupling_matrices, generator::mode_generator_from, ModeState, SpectralField, TransportConvention};
use crate::C64;

/// RK4 is rejected when `dt * ||A||_inf` exceeds this.
pub const RK4_STABILITY_BOUND: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Integrator {
    ExactExponential,
    Rk4 { dt: f64 },
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator::ExactExponential
    }
}

fn inf_norm(a: &DMatrix<C64>) -> f64 {
    a.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn rk4(a: &DMatrix<C64>, x0: &DVector<C64>, t: f64, dt: f64) -> Result<DVector<C64>> {
    let product = dt * inf_norm(a);
    if product > RK4_STABILITY_BOUND {
        return Err(Error::StepSizeTooLarge { product, bound: RK4_STABILITY_BOUND });
    }
    let steps = ((t / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut x = x0.clone();
    if steps == 0 {
        return Ok(x);
    }
    let h = C64::new(t / steps as f64, 0.0);
    let half = h * 0.5;
    for _ in 0..steps {
        let k1 = a * &x;
        let k2 = a * (&x + &k1 * half);
        let k3 = a * (&x + &k2 * half);
        let k4 = a * (&x + &k3 * h);
        x += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * (h / 6.0);
    }
    Ok(x)
}

/// Advances every mode independently to time `t`.
pub fn evolve(
    field: &SpectralField,
    p: &ValidatedParams,
    t: f64,
    method: Integrator,
    convention: TransportConvention,
) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::NonPositive { name: "t", value: t });
    }
    let c = coupling_matrices(p, field.order, convention);
    let modes = field
        .modes
        .par_iter()
        .map(|m| evolve_mode_with(p, &c, m, t, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralField { modes, ..field.clone() })
}

pub fn evolve_mode(
    p: &ValidatedParams,
    mode: &ModeState,
    t: f64,
    method: Integrator,
    convention: TransportConvention,
) -> Result<ModeState> {
    let c = coupling_matrices(p, mode.hhat1.len() - 1, convention);
    evolve_mode_with(p, &c, mode, t, method)
}

fn evolve_mode_with(
    p: &ValidatedParams,
    c: &crate::spectral::CouplingMatrices,
    mode: &ModeState,
    t: f64,
    method: Integrator,
) -> Result<ModeState> {
    let x0 = mode.stacked();
    if x0.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(mode.clone());
    }
    let a = mode_generator_from(p, c, mode.k).a;
    let x = match method {
        Integrator::ExactExponential => (a * C64::new(t, 0.0)).exp() * x0,
        Integrator::Rk4 { dt } => rk4(&a, &x0, t, dt)?,
    };
    Ok(ModeState::from_stacked(mode.k, &x))
}

/// Per-mode propagators `exp(A_k dt)` for sampling a trajectory on a uniform time grid.
pub struct Propagator {
    steps: Vec<DMatrix<C64>>,
    pub dt: f64,
}

impl Propagator {
    pub fn new(p: &ValidatedParams, order: usize, k_max: usize, dt: f64, convention: TransportConvention) -> Self {
        let c = coupling_matrices(p, order, convention);
        let steps = (0..=k_max)
            .into_par_iter()
            .map(|k| (mode_generator_from(p, &c, k).a * C64::new(dt, 0.0)).exp())
            .collect();
        Self { steps, dt }
    }

    pub fn step(&self, field: &SpectralField) -> SpectralField {
        let modes = field
            .modes
            .iter()
            .map(|m| ModeState::from_stacked(m.k, &(&self.steps[m.k] * m.stacked())))
            .collect();
        SpectralField { modes, ..field.clone() }
    }

    /// `field` at `t_j = j dt` for `j = 0..=samples`.
    pub fn trajectory(&self, field: &SpectralField, samples: usize) -> Vec<SpectralField> {
        let mut out = Vec::with_capacity(samples + 1);
        out.push(field.clone());
        for _ in 0..samples {
            let next = self.step(out.last().expect("non-empty"));
            out.push(next);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::MixtureParams;

    fn params() -> ValidatedParams {
        MixtureParams {
            m1: 1.0,
            m2: 2.0,
            nu11: 0.6,
            nu12: 0.2,
            nu21: 0.4,
            nu22: 0.6,
            epsilon: 0.5,
            delta: 0.3,
            alpha: 0.2,
            gamma: 0.1,
            n_inf_1: 1.0,
            n_inf_2: 2.0,
            l: 4.0,
        }
        .validate()
        .unwrap()
    }

    fn sample_field(p: &ValidatedParams, order: usize) -> SpectralField {
        let mut f = SpectralField::zeros(p, order, 3);
        for mode in f.modes.iter_mut() {
            for m in 0..=order {
                let s = (mode.k * 7 + m * 3) as f64;
                let z = if mode.k == 0 { C64::new(0.1 * s.sin(), 0.0) } else { C64::new(0.1 * s.sin(), 0.1 * s.cos()) };
                mode.hhat1[m] = z / (1.0 + m as f64);
                mode.hhat2[m] = z.conj() / (2.0 + m as f64);
            }
        }
        f.modes[0].hhat1[0] = C64::new(0.0, 0.0);
        f.modes[0].hhat2[0] = C64::new(0.0, 0.0);
        f
    }

    #[test]
    fn zero_stays_zero() {
        let p = params();
        let f = SpectralField::zeros(&p, 6, 3);
        let g = evolve(&f, &p, 3.0, Integrator::ExactExponential, TransportConvention::MassScaled).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn k0_conservation() {
        let p = params();
        let f = sample_field(&p, 8);
        let g = evolve(&f, &p, 10.0, Integrator::ExactExponential, TransportConvention::MassScaled).unwrap();
        let (a, b) = (f.mode(0), g.mode(0));
        let mom = |m: &ModeState| m.hhat1[1] * p.m1.sqrt() + m.hhat2[1] * p.m2.sqrt();
        let en = |m: &ModeState| m.hhat1[2] + m.hhat2[2];
        assert!((mom(a) - mom(b)).norm() <= 1e-12 * mom(a).norm());
        assert!((en(a) - en(b)).norm() <= 1e-12 * en(a).norm());
        assert_eq!(b.hhat1[0], C64::new(0.0, 0.0));
        assert_eq!(b.hhat2[0], C64::new(0.0, 0.0));
    }

    #[test]
    fn modes_evolve_independently() {
        let p = params();
        let f = sample_field(&p, 6);
        let whole = evolve(&f, &p, 1.3, Integrator::ExactExponential, TransportConvention::MassScaled).unwrap();
        for m in &f.modes {
            let alone = evolve_mode(&p, m, 1.3, Integrator::ExactExponential, TransportConvention::MassScaled).unwrap();
            assert_eq!(alone, whole.modes[m.k]);
        }
    }

    #[test]
    fn rk4_is_fourth_order() {
        let p = params();
        let f = sample_field(&p, 6);
        let exact = evolve(&f, &p, 1.0, Integrator::ExactExponential, TransportConvention::MassScaled).unwrap();
        let err = |dt| {
            let g = evolve(&f, &p, 1.0, Integrator::Rk4 { dt }, TransportConvention::MassScaled).unwrap();
            g.modes.iter().zip(&exact.modes).map(|(a, b)| (a.stacked() - b.stacked()).norm()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.05), err(0.025));
        let ratio = e1 / e2;
        assert!(ratio > 14.0 && ratio < 18.0, "{e1} {e2} {ratio}");
    }

    #[test]
    fn rk4_rejects_large_steps() {
        let p = params();
        let f = sample_field(&p, 6);
        let r = evolve(&f, &p, 1.0, Integrator::Rk4 { dt: 5.0 }, TransportConvention::MassScaled);
        assert!(matches!(r, Err(Error::StepSizeTooLarge { .. })));
    }

    #[test]
    fn propagator_matches_direct_exponential() {
        let p = params();
        let f = sample_field(&p, 6);
        let prop = Propagator::new(&p, 6, 3, 0.25, TransportConvention::MassScaled);
        let traj = prop.trajectory(&f, 8);
        let direct = evolve(&f, &p, 2.0, Integrator::ExactExponential, TransportConvention::MassScaled).unwrap();
        for (a, b) in traj[8].modes.iter().zip(&direct.modes) {
            assert!((a.stacked() - b.stacked()).norm() < 1e-12);
        }
    }
}
