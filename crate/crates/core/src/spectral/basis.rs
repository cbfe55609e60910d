use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mixture::{MixtureParams, Species};

/// Weighted Hermite functions
/// `g_m(v) = He_m(sqrt(mass) v) / sqrt(m!) * f^inf(v) / n_inf`,
/// orthonormal for the weight `(f^inf / n_inf)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteBasis {
    pub mass: f64,
    pub n_inf: f64,
    pub max_order: usize,
}

impl HermiteBasis {
    pub fn new(mass: f64, n_inf: f64, max_order: usize) -> Self {
        Self { mass, n_inf, max_order }
    }

    pub fn for_species(p: &MixtureParams, s: Species, max_order: usize) -> Self {
        Self::new(p.mass(s), p.n_inf(s), max_order)
    }

    /// `f^inf(v) / n_inf`, the unit-density equilibrium.
    pub fn weight(&self, v: f64) -> f64 {
        (self.mass / (2.0 * PI)).sqrt() * (-0.5 * self.mass * v * v).exp()
    }

    pub fn eval(&self, m: usize, v: f64) -> Result<f64> {
        if m > self.max_order {
            return Err(Error::OrderOutOfRange { order: m, max: self.max_order });
        }
        Ok(normalized_hermite(m, self.mass.sqrt() * v)[m] * self.weight(v))
    }

    /// `g_0(v), ..., g_M(v)`.
    pub fn eval_all(&self, v: f64) -> Vec<f64> {
        let w = self.weight(v);
        let mut q = normalized_hermite(self.max_order, self.mass.sqrt() * v);
        q.iter_mut().for_each(|x| *x *= w);
        q
    }

    /// Dual functions `He_m(sqrt(mass) v) / sqrt(m!)`: the coefficient of
    /// `g_m` in `h` is `∫ h(v) dual_m(v) dv`.
    pub fn dual_all(&self, v: f64) -> Vec<f64> {
        normalized_hermite(self.max_order, self.mass.sqrt() * v)
    }
}

/// `He_m(x) / sqrt(m!)` for `m = 0..=order` by the normalized three-term recurrence.
pub(crate) fn normalized_hermite(order: usize, x: f64) -> Vec<f64> {
    let mut q = Vec::with_capacity(order + 1);
    q.push(1.0);
    if order >= 1 {
        q.push(x);
    }
    for m in 1..order {
        let next = (x * q[m] - (m as f64).sqrt() * q[m - 1]) / ((m + 1) as f64).sqrt();
        q.push(next);
    }
    q
}
