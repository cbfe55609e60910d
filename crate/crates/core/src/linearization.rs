//! Linearization of the mixture operator around the global equilibrium.
//!
//! Perturbations `h_k = f_k - f_k^inf` enter only through three moments per
//! species. The same code handles real samples and complex Fourier-mode
//! samples through the [`Scalar`] bound.

use nalgebra::ComplexField;
use serde::Serialize;

use crate::mixture::{equilibrium, mixture_temperatures, mixture_velocities, maxwellian_unchecked, Species, ValidatedParams};
use crate::quadrature::VelocityGrid;
use crate::spectral::HermiteBasis;

/// `f64` or `Complex<f64>`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {}
impl<T: ComplexField<RealField = f64> + Copy> Scalar for T {}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationMoments<T> {
    pub sigma: T,
    pub mu: T,
    pub tau: T,
}

/// `sigma = ∫h`, `mu = ∫v h`, `tau = m ∫v² h`.
pub fn perturbation_moments<T: Scalar>(grid: &VelocityGrid, h: &[T], m: f64) -> PerturbationMoments<T> {
    debug_assert_eq!(h.len(), grid.len());
    let mut sigma = T::zero();
    let mut mu = T::zero();
    let mut tau = T::zero();
    for ((&v, &w), &hj) in grid.nodes().iter().zip(grid.weights()).zip(h) {
        sigma += hj.scale(w);
        mu += hj.scale(w * v);
        tau += hj.scale(w * v * v);
    }
    PerturbationMoments { sigma, mu, tau: tau.scale(m) }
}

/// Linearized collision terms `(R1, R2)` on the grid.
pub fn linearized_rhs<T: Scalar>(p: &ValidatedParams, grid: &VelocityGrid, h1: &[T], h2: &[T]) -> (Vec<T>, Vec<T>) {
    let a = perturbation_moments(grid, h1, p.m1);
    let b = perturbation_moments(grid, h2, p.m2);
    let (n1, n2) = (p.n_inf_1, p.n_inf_2);
    let (m1, m2, eps, d, al) = (p.m1, p.m2, p.epsilon, p.delta, p.alpha);
    let r = |x: f64| T::from_real(x);
    let s2 = std::f64::consts::SQRT_2;

    let e1 = (a.tau - a.sigma) * r(1.0 / s2);
    let e2 = (b.tau - b.sigma) * r(1.0 / s2);
    let (c11, c12) = (p.nu11 * n1, p.nu12 * n2);
    let (c22, c21) = (p.nu22 * n2, p.nu21 * n1);
    let dt = m1 / m2 * eps * (1.0 - d);
    let at = eps * (1.0 - al);

    // Coefficients on g0, g1, g2 for each species.
    let s1_0 = a.sigma * r(c11 + c12);
    let s1_1 = a.mu * r(c11 * m1.sqrt() + c12 * d * m1.sqrt()) + b.mu * r(c12 * (1.0 - d) * n1 / n2 * m1.sqrt());
    let s1_2 = e1 * r(c11 + c12 * al) + e2 * r(c12 * (1.0 - al) * n1 / n2);
    let s2_0 = b.sigma * r(c22 + c21);
    let s2_1 = b.mu * r(c22 * m2.sqrt() + c21 * (1.0 - dt) * m2.sqrt()) + a.mu * r(c21 * n2 / n1 * dt * m2.sqrt());
    let s2_2 = e2 * r(c22 + c21 * (1.0 - at)) + e1 * r(c21 * n2 / n1 * at);

    let b1 = HermiteBasis::new(m1, n1, 2);
    let b2 = HermiteBasis::new(m2, n2, 2);
    let mut r1 = Vec::with_capacity(grid.len());
    let mut r2 = Vec::with_capacity(grid.len());
    for (j, &v) in grid.nodes().iter().enumerate() {
        let g = b1.eval_all(v);
        r1.push(s1_0.scale(g[0]) + s1_1.scale(g[1]) + s1_2.scale(g[2]) - h1[j] * r(c11 + c12));
        let g = b2.eval_all(v);
        r2.push(s2_0.scale(g[0]) + s2_1.scale(g[1]) + s2_2.scale(g[2]) - h2[j] * r(c22 + c21));
    }
    (r1, r2)
}

/// Moment arguments of the mixture Maxwellians, in table order.
pub const ARGUMENTS: [&str; 6] = ["sigma1", "sigma2", "mu1", "mu2", "tau1", "tau2"];

/// Quadratic `c0 + c1 v + c2 v²`; each table entry is this times `f^inf(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Poly2 {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Poly2 {
    fn eval(&self, v: f64) -> f64 {
        self.c0 + v * (self.c1 + v * self.c2)
    }
}

/// Partial derivatives of `M12` or `M21` at equilibrium with respect to
/// `(sigma1, sigma2, mu1, mu2, tau1, tau2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeTable {
    /// Species whose equilibrium multiplies every entry.
    pub species: Species,
    pub entries: [Poly2; 6],
    mass: f64,
    n_inf: f64,
}

impl DerivativeTable {
    pub fn eval(&self, which: usize, v: f64) -> f64 {
        self.entries[which].eval(v) * maxwellian_unchecked(self.n_inf, 0.0, 1.0, self.mass, v)
    }

    pub fn d_sigma1(&self, v: f64) -> f64 {
        self.eval(0, v)
    }
    pub fn d_sigma2(&self, v: f64) -> f64 {
        self.eval(1, v)
    }
    pub fn d_mu1(&self, v: f64) -> f64 {
        self.eval(2, v)
    }
    pub fn d_mu2(&self, v: f64) -> f64 {
        self.eval(3, v)
    }
    pub fn d_tau1(&self, v: f64) -> f64 {
        self.eval(4, v)
    }
    pub fn d_tau2(&self, v: f64) -> f64 {
        self.eval(5, v)
    }
}

fn poly(c0: f64, c1: f64, c2: f64) -> Poly2 {
    Poly2 { c0, c1, c2 }
}

pub fn m12_derivative_table(p: &ValidatedParams) -> DerivativeTable {
    let (n1, n2, m1, a, d) = (p.n_inf_1, p.n_inf_2, p.m1, p.alpha, p.delta);
    DerivativeTable {
        species: Species::One,
        entries: [
            poly((1.0 + 0.5 * a) / n1, 0.0, -0.5 * a * m1 / n1),
            poly(0.5 * (1.0 - a) / n2, 0.0, -0.5 * (1.0 - a) * m1 / n2),
            poly(0.0, d * m1 / n1, 0.0),
            poly(0.0, (1.0 - d) * m1 / n2, 0.0),
            poly(-0.5 * a / n1, 0.0, 0.5 * a * m1 / n1),
            poly(-0.5 * (1.0 - a) / n2, 0.0, 0.5 * (1.0 - a) * m1 / n2),
        ],
        mass: m1,
        n_inf: n1,
    }
}

pub fn m21_derivative_table(p: &ValidatedParams) -> DerivativeTable {
    let (n1, n2, m1, m2, eps) = (p.n_inf_1, p.n_inf_2, p.m1, p.m2, p.epsilon);
    let at = eps * (1.0 - p.alpha);
    let dt = m1 / m2 * eps * (1.0 - p.delta);
    DerivativeTable {
        species: Species::Two,
        entries: [
            poly(0.5 * at / n1, 0.0, -0.5 * at * m2 / n1),
            poly((1.0 + 0.5 * (1.0 - at)) / n2, 0.0, -0.5 * (1.0 - at) * m2 / n2),
            poly(0.0, eps * (1.0 - p.delta) * m1 / n1, 0.0),
            poly(0.0, (1.0 - dt) * m2 / n2, 0.0),
            poly(-0.5 * at / n1, 0.0, 0.5 * at * m2 / n1),
            poly(-0.5 * (1.0 - at) / n2, 0.0, 0.5 * (1.0 - at) * m2 / n2),
        ],
        mass: m2,
        n_inf: n2,
    }
}

/// `M12` and `M21` at `v` as exact functions of the six perturbation moments.
pub fn mixture_maxwellians_at(p: &ValidatedParams, args: &[f64; 6], v: f64) -> (f64, f64) {
    let [s1, s2, mu1, mu2, t1, t2] = *args;
    let n1 = p.n_inf_1 + s1;
    let n2 = p.n_inf_2 + s2;
    let u1 = mu1 / n1;
    let u2 = mu2 / n2;
    let temp1 = (p.n_inf_1 + t1 - p.m1 * mu1 * mu1 / n1) / n1;
    let temp2 = (p.n_inf_2 + t2 - p.m2 * mu2 * mu2 / n2) / n2;
    let (u12, u21) = mixture_velocities(p, u1, u2);
    let (t12, t21) = mixture_temperatures(p, u1, u2, temp1, temp2).expect("small perturbation keeps T > 0");
    (
        maxwellian_unchecked(n1, u12, t12, p.m1, v),
        maxwellian_unchecked(n2, u21, t21, p.m2, v),
    )
}

/// Worst relative discrepancy between the derivative tables and central
/// differences of [`mixture_maxwellians_at`].
///
/// The argument belonging to species `k` is stepped by `step * n_inf_k`.
/// Each entry's error is measured in the sup norm over a Gauss–Hermite grid,
/// relative to the largest entry of its table.
pub fn check_derivatives_fd(p: &ValidatedParams, step: f64) -> f64 {
    check_tables_fd(p, step, &m12_derivative_table(p), &m21_derivative_table(p))
}

/// As [`check_derivatives_fd`] against caller-supplied tables.
pub fn check_tables_fd(p: &ValidatedParams, step: f64, t12: &DerivativeTable, t21: &DerivativeTable) -> f64 {
    let mut worst: f64 = 0.0;
    for (table, which) in [(t12, 0usize), (t21, 1usize)] {
        let grid = VelocityGrid::gauss_hermite(64, table.mass).expect("valid grid");
        let analytic: Vec<Vec<f64>> = (0..6).map(|i| grid.sample(|v| table.eval(i, v))).collect();
        let scale = analytic.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
        for (i, an) in analytic.iter().enumerate() {
            let s = if i % 2 == 0 { Species::One } else { Species::Two };
            let h = step * p.n_inf(s);
            let mut plus = [0.0; 6];
            let mut minus = [0.0; 6];
            plus[i] = h;
            minus[i] = -h;
            for (j, &v) in grid.nodes().iter().enumerate() {
                let fp = mixture_maxwellians_at(p, &plus, v);
                let fm = mixture_maxwellians_at(p, &minus, v);
                let (a, b) = if which == 0 { (fp.0, fm.0) } else { (fp.1, fm.1) };
                let fd = (a - b) / (2.0 * h);
                worst = worst.max((fd - an[j]).abs() / scale);
            }
        }
    }
    worst
}

/// Equilibrium of species `s` sampled on `grid`, handy for building perturbations.
pub fn sample_equilibrium(p: &ValidatedParams, s: Species, grid: &VelocityGrid) -> Vec<f64> {
    grid.sample(|v| equilibrium(p, s, v))
}
