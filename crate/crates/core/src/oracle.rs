//! Velocity-grid discretization of one Fourier mode of the linearized system.
//!
//! The state is the pair of sampled perturbations `(h1(v_j); h2(v_j))` on a
//! shared grid. Collisions act through six quadrature moments feeding six
//! velocity profiles, plus the relaxation diagonal. Nothing here uses the
//! Hermite coefficient machinery, so agreement with the spectral solver is a
//! genuine cross-check.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::{Species, ValidatedParams};
use crate::quadrature::VelocityGrid;
use crate::spectral::{evolve_mode, mode_moments, mode_profile, Integrator, SpectralField, TransportConvention};
use crate::C64;

/// Minimum grid points across `[-2, 2] / sqrt(m)` for each equilibrium.
pub const MIN_POINTS_PER_WIDTH: f64 = 8.0;

/// Relative equilibrium level below which profile samples are ignored.
pub const PROFILE_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq)]
pub struct GridGenerator {
    pub k: usize,
    pub grid: VelocityGrid,
    /// Acts on `(h1(v_0..v_{N-1}); h2(v_0..v_{N-1}))`.
    pub b: DMatrix<C64>,
    /// Moment rows `(sigma1, mu1, tau1, sigma2, mu2, tau2)`, `6 × 2N`.
    pub moments: DMatrix<f64>,
    /// Profiles fed by each moment, `2N × 6`.
    pub profiles: DMatrix<f64>,
}

/// Grid points across `[-2, 2] / sqrt(m)`, from the spacing at the center.
pub fn points_per_width(grid: &VelocityGrid, m: f64) -> f64 {
    4.0 * grid.points_per_thermal_width(m)
}

fn check_resolution(p: &ValidatedParams, grid: &VelocityGrid) -> Result<()> {
    for m in [p.m1, p.m2] {
        let ppw = points_per_width(grid, m);
        if ppw < MIN_POINTS_PER_WIDTH {
            return Err(Error::GridTooCoarse { points_per_width: ppw });
        }
    }
    Ok(())
}

/// Gauss–Hermite grid scaled to the lighter species, the default oracle grid.
pub fn default_grid(p: &ValidatedParams, nodes: usize) -> Result<VelocityGrid> {
    VelocityGrid::gauss_hermite(nodes, p.m1.min(p.m2))
}

/// Uniform trapezoid grid on `[-v_max, v_max]`, `v_max = 10 / sqrt(min mass)`.
pub fn trapezoid_grid(p: &ValidatedParams, nodes: usize) -> Result<VelocityGrid> {
    VelocityGrid::trapezoid(nodes, 10.0 / p.m1.min(p.m2).sqrt())
}

pub fn oracle_generator(p: &ValidatedParams, k: usize, grid: &VelocityGrid) -> Result<GridGenerator> {
    check_resolution(p, grid)?;
    let n = grid.len();
    let nodes = grid.nodes();
    let w = grid.weights();
    let (n1, n2, m1, m2) = (p.n_inf_1, p.n_inf_2, p.m1, p.m2);

    let mut mom = DMatrix::<f64>::zeros(6, 2 * n);
    for j in 0..n {
        let v = nodes[j];
        mom[(0, j)] = w[j];
        mom[(1, j)] = w[j] * v;
        mom[(2, j)] = w[j] * m1 * v * v;
        mom[(3, n + j)] = w[j];
        mom[(4, n + j)] = w[j] * v;
        mom[(5, n + j)] = w[j] * m2 * v * v;
    }

    // Equilibrium-shaped profiles f/n, v f/n and (m v² - 1) f/n per species.
    let shape = |m: f64, v: f64| (m / (2.0 * PI)).sqrt() * (-0.5 * m * v * v).exp();
    let (c11, c12, c22, c21) = (p.nu11 * n1, p.nu12 * n2, p.nu22 * n2, p.nu21 * n1);
    let (d, a, eps) = (p.delta, p.alpha, p.epsilon);
    let dt = m1 / m2 * eps * (1.0 - d);
    let at = eps * (1.0 - a);
    let mut prof = DMatrix::<f64>::zeros(2 * n, 6);
    for j in 0..n {
        let v = nodes[j];
        // species 1
        let f = shape(m1, v);
        let (p0, p1, p2) = (f, m1 * v * f, 0.5 * (m1 * v * v - 1.0) * f);
        prof[(j, 0)] = (c11 + c12) * p0 - (c11 + c12 * a) * p2;
        prof[(j, 1)] = (c11 + c12 * d) * p1;
        prof[(j, 2)] = (c11 + c12 * a) * p2;
        prof[(j, 3)] = -c12 * (1.0 - a) * n1 / n2 * p2;
        prof[(j, 4)] = c12 * (1.0 - d) * n1 / n2 * p1;
        prof[(j, 5)] = c12 * (1.0 - a) * n1 / n2 * p2;
        // species 2
        let f = shape(m2, v);
        let (p0, p1, p2) = (f, m2 * v * f, 0.5 * (m2 * v * v - 1.0) * f);
        let r = n + j;
        prof[(r, 0)] = -c21 * n2 / n1 * at * p2;
        prof[(r, 1)] = c21 * n2 / n1 * dt * p1;
        prof[(r, 2)] = c21 * n2 / n1 * at * p2;
        prof[(r, 3)] = (c22 + c21) * p0 - (c22 + c21 * (1.0 - at)) * p2;
        prof[(r, 4)] = (c22 + c21 * (1.0 - dt)) * p1;
        prof[(r, 5)] = (c22 + c21 * (1.0 - at)) * p2;
    }

    let coll = &prof * &mom;
    let wave = k as f64 * 2.0 * PI / p.l;
    let mut b = DMatrix::<C64>::from_fn(2 * n, 2 * n, |i, j| C64::new(coll[(i, j)], 0.0));
    for j in 0..n {
        b[(j, j)] += C64::new(-(c11 + c12), -wave * nodes[j]);
        b[(n + j, n + j)] += C64::new(-(c22 + c21), -wave * nodes[j]);
    }
    Ok(GridGenerator { k, grid: grid.clone(), b, moments: mom, profiles: prof })
}

/// `exp(B t) h0` by dense matrix exponential.
pub fn oracle_evolve(g: &GridGenerator, h0: &DVector<C64>, t: f64) -> Result<DVector<C64>> {
    if h0.len() != g.b.nrows() {
        return Err(Error::DimensionMismatch { expected: g.b.nrows(), got: h0.len() });
    }
    if !(t >= 0.0) {
        return Err(Error::NonPositive { name: "t", value: t });
    }
    if h0.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(h0.clone());
    }
    Ok((&g.b * C64::new(t, 0.0)).exp() * h0)
}

/// `(sigma, mu, tau)` of both species for stacked samples.
pub fn oracle_moments(g: &GridGenerator, h: &DVector<C64>) -> [C64; 6] {
    std::array::from_fn(|r| g.moments.row(r).iter().zip(h.iter()).map(|(w, z)| z * *w).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridChoice {
    GaussHermite,
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub k: usize,
    pub t: f64,
    pub grid: crate::quadrature::GridKind,
    pub grid_nodes: usize,
    /// `|m_spectral - m_oracle| / |m_oracle|` over the six moments.
    pub moment_rel_error: f64,
    /// Relative discrepancy of the sampled profiles in the weighted `L²` norm,
    /// over nodes where the equilibrium exceeds `PROFILE_CUTOFF` of its peak.
    pub profile_rel_error: f64,
    pub spectral_moments: [[f64; 2]; 6],
    pub oracle_moments: [[f64; 2]; 6],
}

fn rel(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Evolves mode `k` of `field` to time `t` both spectrally and on `grid`, then
/// compares moments and profiles.
pub fn compare(
    field: &SpectralField,
    p: &ValidatedParams,
    k: usize,
    t: f64,
    grid: &VelocityGrid,
    convention: TransportConvention,
) -> Result<CompareReport> {
    let mode = field.modes.get(k).ok_or(Error::DimensionMismatch { expected: field.k_max, got: k })?;
    let gen = oracle_generator(p, k, grid)?;
    let n = grid.len();
    let h1 = mode_profile(p, Species::One, &mode.hhat1, grid);
    let h2 = mode_profile(p, Species::Two, &mode.hhat2, grid);
    let h0 = DVector::from_iterator(2 * n, h1.into_iter().chain(h2));
    let ho = oracle_evolve(&gen, &h0, t)?;

    let ms = evolve_mode(p, mode, t, Integrator::ExactExponential, convention)?;
    let (sa, sb) = mode_moments(&ms, p);
    let spec = [sa.sigma, sa.mu, sa.tau, sb.sigma, sb.mu, sb.tau];
    let orac = oracle_moments(&gen, &ho);
    let diff: f64 = spec.iter().zip(&orac).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let size: f64 = orac.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let s1 = mode_profile(p, Species::One, &ms.hhat1, grid);
    let s2 = mode_profile(p, Species::Two, &ms.hhat2, grid);
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, (&v, &w)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
        for (s, hs, m) in [(&s1, 0, p.m1), (&s2, n, p.m2)] {
            let f = (-0.5 * m * v * v).exp();
            // tail samples carry rounding noise that 1/f would blow up
            if f < PROFILE_CUTOFF {
                continue;
            }
            num += w * (s[j] - ho[hs + j]).norm_sqr() / f;
            den += w * ho[hs + j].norm_sqr() / f;
        }
    }
    let pair = |z: &C64| [z.re, z.im];
    Ok(CompareReport {
        k,
        t,
        grid: grid.kind(),
        grid_nodes: n,
        moment_rel_error: rel(diff, size),
        profile_rel_error: rel(num.sqrt(), den.sqrt()),
        spectral_moments: spec.each_ref().map(pair),
        oracle_moments: orac.each_ref().map(pair),
    })
}
