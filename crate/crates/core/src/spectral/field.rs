use std::f64::consts::PI;

use nalgebra::DVector;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linearization::PerturbationMoments;
use crate::mixture::{MixtureParams, Species};
use crate::quadrature::VelocityGrid;
use crate::spectral::HermiteBasis;
use crate::C64;

/// Hermite coefficients of both species for one Fourier index `k ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub k: usize,
    pub hhat1: DVector<C64>,
    pub hhat2: DVector<C64>,
}

impl ModeState {
    pub fn zeros(k: usize, order: usize) -> Self {
        Self { k, hhat1: DVector::zeros(order + 1), hhat2: DVector::zeros(order + 1) }
    }

    /// `(hhat1; hhat2)` as one vector.
    pub fn stacked(&self) -> DVector<C64> {
        let n = self.hhat1.len();
        DVector::from_fn(2 * n, |i, _| if i < n { self.hhat1[i] } else { self.hhat2[i - n] })
    }

    pub fn from_stacked(k: usize, x: &DVector<C64>) -> Self {
        let n = x.len() / 2;
        Self { k, hhat1: x.rows(0, n).into_owned(), hhat2: x.rows(n, n).into_owned() }
    }
}

/// Modes `k = 0..=K` of a real field; negative modes are the conjugates.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub params: MixtureParams,
    pub order: usize,
    pub k_max: usize,
    pub modes: Vec<ModeState>,
}

impl SpectralField {
    pub fn zeros(params: &MixtureParams, order: usize, k_max: usize) -> Self {
        Self { params: *params, order, k_max, modes: (0..=k_max).map(|k| ModeState::zeros(k, order)).collect() }
    }

    pub fn mode(&self, k: usize) -> &ModeState {
        &self.modes[k]
    }

    pub fn mode_mut(&mut self, k: usize) -> &mut ModeState {
        &mut self.modes[k]
    }

    /// Unweighted energy `Σ_{k∈Z} |hhat1_k|² + |hhat2_k|²` split as (total, top shell).
    fn shell_energies(&self) -> (f64, f64) {
        let e = |m: &ModeState| m.hhat1.norm_squared() + m.hhat2.norm_squared();
        let total: f64 = self.modes.iter().map(|m| if m.k == 0 { e(m) } else { 2.0 * e(m) }).sum();
        let top = if self.k_max == 0 { 0.0 } else { 2.0 * e(&self.modes[self.k_max]) };
        (total, top)
    }

    /// Fraction of the energy carried by the highest retained Fourier shell.
    pub fn top_shell_fraction(&self) -> f64 {
        let (total, top) = self.shell_energies();
        if total == 0.0 {
            0.0
        } else {
            top / total
        }
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().all(|m| m.hhat1.iter().chain(m.hhat2.iter()).all(|z| z.re == 0.0 && z.im == 0.0))
    }
}

/// Top-shell energy above 1% of the total: the data is likely under-resolved in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AliasingWarning {
    pub top_shell_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectOptions {
    /// Gauss–Hermite nodes per species.
    pub velocity_nodes: usize,
    /// Uniform `x` samples; `None` picks `4 (K + 1)`.
    pub x_samples: Option<usize>,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        Self { velocity_nodes: 128, x_samples: None }
    }
}

/// Fourier–Hermite coefficients of real perturbations `h1(x, v)`, `h2(x, v)`.
pub fn project(
    params: &MixtureParams,
    h1: impl Fn(f64, f64) -> f64,
    h2: impl Fn(f64, f64) -> f64,
    order: usize,
    k_max: usize,
    opts: ProjectOptions,
) -> Result<(SpectralField, Option<AliasingWarning>)> {
    let nx = opts.x_samples.unwrap_or(4 * (k_max + 1));
    if nx < 2 * k_max + 1 {
        return Err(Error::InvalidGrid(format!("{nx} x samples cannot resolve K = {k_max}")));
    }
    let mut field = SpectralField::zeros(params, order, k_max);
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(nx);
    let xs: Vec<f64> = (0..nx).map(|j| j as f64 * params.l / nx as f64).collect();

    for (s, h) in [(Species::One, &h1 as &dyn Fn(f64, f64) -> f64), (Species::Two, &h2)] {
        let basis = HermiteBasis::for_species(params, s, order);
        let grid = VelocityGrid::gauss_hermite(opts.velocity_nodes, basis.mass)?;
        let duals: Vec<Vec<f64>> = grid.nodes().iter().map(|&v| basis.dual_all(v)).collect();
        // coeffs[m][j] = hermite coefficient m at x_j
        let mut coeffs = vec![vec![C64::new(0.0, 0.0); nx]; order + 1];
        for (j, &x) in xs.iter().enumerate() {
            for ((&v, &w), d) in grid.nodes().iter().zip(grid.weights()).zip(&duals) {
                let hv = h(x, v) * w;
                if hv == 0.0 {
                    continue;
                }
                for m in 0..=order {
                    coeffs[m][j].re += hv * d[m];
                }
            }
        }
        for (m, row) in coeffs.iter_mut().enumerate() {
            fft.process(row);
            for k in 0..=k_max {
                let c = row[k] / nx as f64;
                let mode = field.mode_mut(k);
                match s {
                    Species::One => mode.hhat1[m] = c,
                    Species::Two => mode.hhat2[m] = c,
                }
            }
        }
    }
    let frac = field.top_shell_fraction();
    let warning = (frac > 0.01).then_some(AliasingWarning { top_shell_fraction: frac });
    Ok((field, warning))
}

/// `Σ_{|k|≤K} Σ_m hhat_{k,m} g_m(v) e^{i k 2π x / L}` for both species, complex.
pub fn reconstruct_complex(field: &SpectralField, x: f64, v: f64) -> (C64, C64) {
    let p = &field.params;
    let g1 = HermiteBasis::for_species(p, Species::One, field.order).eval_all(v);
    let g2 = HermiteBasis::for_species(p, Species::Two, field.order).eval_all(v);
    let mut out = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for mode in &field.modes {
        let a: C64 = mode.hhat1.iter().zip(&g1).map(|(c, g)| c * *g).sum();
        let b: C64 = mode.hhat2.iter().zip(&g2).map(|(c, g)| c * *g).sum();
        let phase = C64::from_polar(1.0, mode.k as f64 * 2.0 * PI * x / p.l);
        out.0 += a * phase;
        out.1 += b * phase;
        if mode.k > 0 {
            out.0 += (a * phase).conj();
            out.1 += (b * phase).conj();
        }
    }
    out
}

/// Real perturbations `(h1, h2)` at `(x, v)`.
pub fn reconstruct(field: &SpectralField, x: f64, v: f64) -> (f64, f64) {
    let (a, b) = reconstruct_complex(field, x, v);
    (a.re, b.re)
}

/// Samples of one mode's velocity profile on `grid`: `Σ_m hhat_m g_m(v_j)`.
pub fn mode_profile(params: &MixtureParams, s: Species, coeffs: &DVector<C64>, grid: &VelocityGrid) -> Vec<C64> {
    let basis = HermiteBasis::for_species(params, s, coeffs.len() - 1);
    grid.nodes()
        .iter()
        .map(|&v| basis.eval_all(v).iter().zip(coeffs.iter()).map(|(g, c)| c * *g).sum())
        .collect()
}

/// `(sigma, mu, tau)` of both species read off the first three coefficients.
pub fn mode_moments(ms: &ModeState, params: &MixtureParams) -> (PerturbationMoments<C64>, PerturbationMoments<C64>) {
    let f = |h: &DVector<C64>, m: f64| {
        let get = |i: usize| h.get(i).copied().unwrap_or_default();
        PerturbationMoments {
            sigma: get(0),
            mu: get(1) / m.sqrt(),
            tau: get(2) * std::f64::consts::SQRT_2 + get(0),
        }
    };
    (f(&ms.hhat1, params.m1), f(&ms.hhat2, params.m2))
}
