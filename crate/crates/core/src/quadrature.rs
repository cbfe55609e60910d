//! Velocity grids for integrals over the real line.
//!
//! Both rule families store weights that integrate `f(v)` directly, i.e.
//! `∫ f(v) dv ≈ Σ_j w_j f(v_j)`; the Gaussian weight of the Gauss–Hermite rule
//! is already folded into `w_j`.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Which rule produced the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum GridKind {
    /// Gauss–Hermite nodes for the weight `exp(-mass v²/2)`.
    GaussHermite { mass: f64 },
    /// Uniform trapezoid rule on `[-v_max, v_max]`.
    Trapezoid { v_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: GridKind,
}

impl VelocityGrid {
    /// Gauss–Hermite rule with `n` nodes, scaled to the Maxwellian of unit
    /// temperature and particle mass `mass`.
    ///
    /// Nodes come from the symmetric Jacobi matrix of the probabilists'
    /// Hermite recurrence and are polished by Newton steps. Weights use the
    /// Christoffel form `1 / Σ_k ψ_k(x)²` with normalized Hermite functions,
    /// which stays representable for several hundred nodes where the plain
    /// Gaussian weights underflow.
    pub fn gauss_hermite(n: usize, mass: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {n}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::NonPositive { name: "mass", value: mass });
        }

        let jacobi = DMatrix::<f64>::from_fn(n, n, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64).sqrt()
            } else {
                0.0
            }
        });
        let mut x: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        x.sort_by(|a, b| a.total_cmp(b));

        for xi in x.iter_mut() {
            for _ in 0..3 {
                let (pn, pn1) = hermite_function_pair(n, *xi);
                let step = pn / ((n as f64).sqrt() * pn1);
                if !step.is_finite() {
                    break;
                }
                *xi -= step;
                if step.abs() < 1e-15 * xi.abs().max(1.0) {
                    break;
                }
            }
        }

        let scale = mass.sqrt();
        let weights = x.iter().map(|&xi| 1.0 / christoffel_sum(n, xi) / scale).collect();
        let nodes = x.iter().map(|&xi| xi / scale).collect();
        let grid = Self { nodes, weights, kind: GridKind::GaussHermite { mass } };
        grid.check()?;
        Ok(grid)
    }

    /// Uniform trapezoid rule with `n` points on `[-v_max, v_max]`.
    pub fn trapezoid(n: usize, v_max: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n}")));
        }
        if !(v_max > 0.0 && v_max.is_finite()) {
            return Err(Error::NonPositive { name: "v_max", value: v_max });
        }
        let h = 2.0 * v_max / (n - 1) as f64;
        let nodes = (0..n).map(|j| -v_max + h * j as f64).collect();
        let weights = (0..n)
            .map(|j| if j == 0 || j == n - 1 { 0.5 * h } else { h })
            .collect();
        let grid = Self { nodes, weights, kind: GridKind::Trapezoid { v_max } };
        grid.check()?;
        Ok(grid)
    }

    fn check(&self) -> Result<()> {
        if self.nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("nodes not strictly increasing".into()));
        }
        if self.weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidGrid("non-positive quadrature weight".into()));
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&v| f(v)).collect()
    }

    /// `Σ w_j f_j` for values already sampled on the grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, f)| w * f).sum()
    }

    pub fn integrate_complex(&self, values: &[Complex<f64>]) -> Complex<f64> {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, f)| f * *w).sum()
    }

    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&v, w)| w * f(v)).sum()
    }

    /// Smallest node spacing relative to the thermal width `1/sqrt(mass)`,
    /// expressed as points per width.
    pub fn points_per_thermal_width(&self, mass: f64) -> f64 {
        let width = 1.0 / mass.sqrt();
        // Spacing near the center, where the Maxwellian carries its mass.
        let mid = self.nodes.len() / 2;
        let lo = mid.saturating_sub(1);
        let hi = (mid + 1).min(self.nodes.len() - 1);
        let spacing = (self.nodes[hi] - self.nodes[lo]) / (hi - lo) as f64;
        width / spacing
    }
}

/// Normalized Hermite functions `ψ_k(x) = He_k(x) e^{-x²/4} / sqrt(k! sqrt(2π))`;
/// returns `(ψ_n(x), ψ_{n-1}(x))`.
fn hermite_function_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = (-0.25 * x * x).exp() / (2.0 * std::f64::consts::PI).powf(0.25);
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn christoffel_sum(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = (-0.25 * x * x).exp() / (2.0 * std::f64::consts::PI).powf(0.25);
    let mut sum = cur * cur;
    for k in 0..n - 1 {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
        sum += cur * cur;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn standard_maxwellian(v: f64) -> f64 {
        (-0.5 * v * v).exp() / (2.0 * PI).sqrt()
    }

    #[test]
    fn gauss_hermite_integrates_standard_maxwellian() {
        for n in [8, 32, 128, 400] {
            let g = VelocityGrid::gauss_hermite(n, 1.0).unwrap();
            let total = g.integrate_fn(standard_maxwellian);
            assert!((total - 1.0).abs() < 1e-12, "n = {n}: {total}");
        }
    }

    #[test]
    fn gauss_hermite_even_moments() {
        // E[v^4] = 3 / m^2 for the unit-temperature Maxwellian of mass m.
        let m = 2.5;
        let g = VelocityGrid::gauss_hermite(64, m).unwrap();
        let f = |v: f64| (m / (2.0 * PI)).sqrt() * (-0.5 * m * v * v).exp();
        let m4 = g.integrate_fn(|v| v.powi(4) * f(v));
        assert!((m4 - 3.0 / (m * m)).abs() < 1e-12);
    }

    #[test]
    fn large_rules_have_positive_weights_and_sorted_nodes() {
        let g = VelocityGrid::gauss_hermite(600, 3.0).unwrap();
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        // symmetric rule
        let n = g.len();
        assert!((g.nodes()[0] + g.nodes()[n - 1]).abs() < 1e-10);
    }

    #[test]
    fn trapezoid_is_spectrally_accurate_for_gaussians() {
        let g = VelocityGrid::trapezoid(201, 10.0).unwrap();
        assert!((g.integrate_fn(standard_maxwellian) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(VelocityGrid::gauss_hermite(1, 1.0).is_err());
        assert!(VelocityGrid::gauss_hermite(10, 0.0).is_err());
        assert!(VelocityGrid::trapezoid(10, -1.0).is_err());
    }
}
