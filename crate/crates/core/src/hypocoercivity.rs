//! Twisted quadratic entropy and certified exponential decay rates.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::{MixtureParams, ValidatedParams, EQUALITY_TOL};
use crate::spectral::{coupling_matrices, mode_generator, ModeState, Propagator, SpectralField, TransportConvention};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    /// `(1/n1, 1/n2)`.
    #[default]
    InverseDensity,
    /// `(n2/(n1+n2), n1/(n1+n2))`.
    DensityRatio,
}

impl WeightScheme {
    pub fn weights(&self, p: &MixtureParams) -> (f64, f64) {
        match self {
            WeightScheme::InverseDensity => (1.0 / p.n_inf_1, 1.0 / p.n_inf_2),
            WeightScheme::DensityRatio => {
                let s = p.n_inf_1 + p.n_inf_2;
                (p.n_inf_2 / s, p.n_inf_1 / s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyParams {
    pub alpha_tilde: f64,
    pub beta: f64,
    pub gamma_tilde: f64,
    #[serde(default)]
    pub weight_scheme: WeightScheme,
}

impl EntropyParams {
    pub fn new(alpha_tilde: f64, beta: f64, gamma_tilde: f64) -> Self {
        Self { alpha_tilde, beta, gamma_tilde, weight_scheme: WeightScheme::InverseDensity }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn with_scheme(self, weight_scheme: WeightScheme) -> Self {
        Self { weight_scheme, ..self }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.alpha_tilde, self.beta, self.gamma_tilde]
    }
}

/// `P_k` without the definiteness check.
pub fn pk_matrix(ep: &EntropyParams, k: usize, order: usize) -> DMatrix<C64> {
    let n = order + 1;
    let mut p = DMatrix::<C64>::identity(n, n);
    if k == 0 {
        return p;
    }
    for (i, e) in ep.as_array().into_iter().enumerate() {
        if i + 1 < n {
            let z = e / k as f64;
            p[(i, i + 1)] = C64::new(0.0, -z);
            p[(i + 1, i)] = C64::new(0.0, z);
        }
    }
    p
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(sym).eigenvalues.iter().copied().collect()
}

/// Hermitian `P_k`: identity plus `∓ i e/k` off-diagonals in the top 4×4
/// corner, `e = (alpha_tilde, beta, gamma_tilde)`. `P_0 = I`.
pub fn build_pk(ep: &EntropyParams, k: usize, order: usize) -> Result<DMatrix<C64>> {
    let p = pk_matrix(ep, k, order);
    let min = hermitian_eigenvalues(&p).into_iter().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite { k, min_eigenvalue: min });
    }
    Ok(p)
}

fn quad_form(p: &DMatrix<C64>, x: &nalgebra::DVector<C64>) -> f64 {
    x.dotc(&(p * x)).re
}

/// Contribution of one stored mode; `k > 0` counts for `±k`.
pub fn mode_entropy(mode: &ModeState, ep: &EntropyParams, params: &MixtureParams) -> Result<f64> {
    let pk = build_pk(ep, mode.k, mode.hhat1.len() - 1)?;
    let (w1, w2) = ep.weight_scheme.weights(params);
    let e = w1 * quad_form(&pk, &mode.hhat1) + w2 * quad_form(&pk, &mode.hhat2);
    Ok(if mode.k == 0 { e } else { 2.0 * e })
}

/// `e = Σ_{k∈Z} w1 <h1_k, P_k h1_k> + w2 <h2_k, P_k h2_k>`.
pub fn entropy(field: &SpectralField, ep: &EntropyParams) -> Result<f64> {
    field.modes.iter().map(|m| mode_entropy(m, ep, &field.params)).sum()
}

/// `Σ_{k∈Z} w1 |h1_k|² + w2 |h2_k|²`, the entropy with `P = I`.
pub fn weighted_norm_sq(field: &SpectralField, scheme: WeightScheme) -> f64 {
    let (w1, w2) = scheme.weights(&field.params);
    field
        .modes
        .iter()
        .map(|m| {
            let e = w1 * m.hhat1.norm_squared() + w2 * m.hhat2.norm_squared();
            if m.k == 0 {
                e
            } else {
                2.0 * e
            }
        })
        .sum()
}

fn require_normalized(p: &ValidatedParams) -> Result<()> {
    let (r1, r2) = p.row_sums();
    if (r1 - 1.0).abs() > EQUALITY_TOL || (r2 - 1.0).abs() > EQUALITY_TOL {
        return Err(Error::NotTheoremEligible { row1: r1, row2: r2 });
    }
    Ok(())
}

/// The six collision combinations whose minimum (times two) is the rate `C`.
pub fn rate_c_terms(p: &MixtureParams) -> [f64; 6] {
    let (n1, n2) = (p.n_inf_1, p.n_inf_2);
    [
        p.nu12 * n2 * (1.0 - p.delta),
        p.nu12 * n2 * (1.0 - p.alpha),
        p.nu11 * n1 + p.nu12 * n2,
        p.nu12 * n1 * p.m1 / p.m2 * (1.0 - p.delta),
        p.nu12 * n1 * (1.0 - p.alpha),
        p.nu22 * n2 + p.nu12 * n1,
    ]
}

/// Decay rate of the `k = 0` mode for normalized data.
pub fn rate_c(p: &ValidatedParams) -> Result<f64> {
    require_normalized(p)?;
    Ok(2.0 * rate_c_terms(p).into_iter().fold(f64::INFINITY, f64::min))
}

/// `min(C, 2 mu)`.
pub fn c_tilde(p: &ValidatedParams, mu: f64) -> Result<f64> {
    Ok(rate_c(p)?.min(2.0 * mu))
}

/// Smallest `λ` with `-(P A + A^H P) x = λ 2P x` for each `k = 1..=K`.
///
/// Values below `1e-12` in magnitude are reported as zero.
pub fn lyapunov_rates(
    p: &ValidatedParams,
    ep: &EntropyParams,
    order: usize,
    k_max: usize,
    convention: TransportConvention,
) -> Result<Vec<f64>> {
    let c = coupling_matrices(p, order, convention);
    let (w1, w2) = ep.weight_scheme.weights(p);
    let n = order + 1;
    (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let pk = build_pk(ep, k, order)?;
            let a = crate::spectral::generator_for(p, &c, k);
            let mut big = DMatrix::<C64>::zeros(2 * n, 2 * n);
            big.view_mut((0, 0), (n, n)).copy_from(&(&pk * C64::new(w1, 0.0)));
            big.view_mut((n, n), (n, n)).copy_from(&(&pk * C64::new(w2, 0.0)));
            let pa = &big * &a;
            let q = -(&pa + pa.adjoint());
            let two_p = &big * C64::new(2.0, 0.0);
            let chol = Cholesky::new(two_p).ok_or(Error::NotPositiveDefinite { k, min_eigenvalue: f64::NAN })?;
            let l = chol.l();
            let x = l
                .solve_lower_triangular(&q)
                .ok_or_else(|| Error::NonConvergence(format!("triangular solve at k = {k}")))?;
            let s = l
                .solve_lower_triangular(&x.adjoint())
                .ok_or_else(|| Error::NonConvergence(format!("triangular solve at k = {k}")))?;
            let lam = hermitian_eigenvalues(&s).into_iter().fold(f64::INFINITY, f64::min);
            if !lam.is_finite() {
                return Err(Error::NonConvergence(format!("eigenvalues at k = {k}")));
            }
            Ok(if lam.abs() < 1e-12 { 0.0 } else { lam })
        })
        .collect()
}

fn raw_mu(p: &ValidatedParams, ep: &EntropyParams, order: usize, k_max: usize, conv: TransportConvention) -> Result<f64> {
    Ok(lyapunov_rates(p, ep, order, k_max, conv)?.into_iter().fold(f64::INFINITY, f64::min))
}

/// Largest `mu ≥ 0` for which the Lyapunov inequality holds for `k = 1..=K`.
pub fn find_mu(
    p: &ValidatedParams,
    ep: &EntropyParams,
    order: usize,
    k_max: usize,
    convention: TransportConvention,
) -> Result<f64> {
    Ok(raw_mu(p, ep, order, k_max, convention)?.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub start: [f64; 3],
    pub seed: u64,
    pub weight_scheme: WeightScheme,
    pub convention: TransportConvention,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            start: [0.3, 0.3, 0.3],
            seed: 0,
            weight_scheme: WeightScheme::InverseDensity,
            convention: TransportConvention::MassScaled,
        }
    }
}

struct Search<'a> {
    p: &'a ValidatedParams,
    order: usize,
    k_max: usize,
    opts: SearchOptions,
    budget: usize,
    used: usize,
    best: ([f64; 3], f64),
}

impl Search<'_> {
    fn ep(&self, x: [f64; 3]) -> EntropyParams {
        EntropyParams::new(x[0], x[1], x[2]).with_scheme(self.opts.weight_scheme)
    }

    fn value(&self, x: [f64; 3]) -> f64 {
        match raw_mu(self.p, &self.ep(x), self.order, self.k_max, self.opts.convention) {
            Ok(v) => v,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// Evaluates unless the budget is spent.
    fn eval(&mut self, x: [f64; 3]) -> Option<f64> {
        if self.used >= self.budget {
            return None;
        }
        self.used += 1;
        let v = self.value(x);
        if v > self.best.1 {
            self.best = (x, v);
        }
        Some(v)
    }
}

fn exp3(y: &[f64; 3]) -> [f64; 3] {
    [y[0].exp(), y[1].exp(), y[2].exp()]
}

/// Derivative-free maximization of `mu` over `(alpha_tilde, beta, gamma_tilde)`.
///
/// The start point is always evaluated; `budget` further evaluations follow
/// in a fixed order (a scale ladder, seeded random starts, then Nelder–Mead
/// in log coordinates), so a larger budget only extends the sequence.
pub fn optimize_eparams(
    p: &ValidatedParams,
    order: usize,
    k_max: usize,
    budget: usize,
    opts: SearchOptions,
) -> Result<(EntropyParams, f64)> {
    require_normalized(p)?;
    let mut s = Search { p, order, k_max, opts, budget, used: 0, best: (opts.start, f64::NEG_INFINITY) };
    s.best.1 = s.value(opts.start);
    run_search(&mut s);
    let (x, v) = s.best;
    let ep = s.ep(x);
    if v > 0.0 {
        Ok((ep, v))
    } else {
        Err(Error::SearchFailed { best: ep, mu: v.max(0.0) })
    }
}

fn run_search(s: &mut Search<'_>) {
    let start = s.opts.start;
    for f in [0.3, 0.1, 0.03, 0.01] {
        if s.eval(start.map(|x| x * f)).is_none() {
            return;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.opts.seed);
    for _ in 0..4 {
        let x = [0; 3].map(|_| 10f64.powf(rng.random_range(-3.0..0.0)));
        if s.eval(x).is_none() {
            return;
        }
    }
    let mut step = 0.7;
    while s.used < s.budget {
        let before = s.used;
        let x0 = s.best.0.map(|x| x.max(1e-12).ln());
        nelder_mead(s, x0, step);
        step *= 0.5;
        if s.used == before || step < 1e-6 {
            break;
        }
    }
}

fn nelder_mead(s: &mut Search<'_>, x0: [f64; 3], step: f64) {
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((x0, s.best.1));
    for i in 0..3 {
        let mut y = x0;
        y[i] += step;
        let Some(v) = s.eval(exp3(&y)) else { return };
        simplex.push((y, v));
    }
    let lerp = |a: &[f64; 3], b: &[f64; 3], t: f64| [0, 1, 2].map(|i| a[i] + t * (b[i] - a[i]));
    for _ in 0..200 {
        // maximize: best first
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let spread = simplex[0].1 - simplex[3].1;
        let size = simplex[1..].iter().map(|(y, _)| (0..3).map(|i| (y[i] - simplex[0].0[i]).abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
        if (spread.is_finite() && spread.abs() < 1e-10) || size < 1e-8 {
            return;
        }
        let c = [0, 1, 2].map(|i| (simplex[0].0[i] + simplex[1].0[i] + simplex[2].0[i]) / 3.0);
        let worst = simplex[3];
        let xr = lerp(&c, &worst.0, -1.0);
        let Some(fr) = s.eval(exp3(&xr)) else { return };
        if fr > simplex[0].1 {
            let xe = lerp(&c, &worst.0, -2.0);
            let Some(fe) = s.eval(exp3(&xe)) else { return };
            simplex[3] = if fe > fr { (xe, fe) } else { (xr, fr) };
        } else if fr > simplex[2].1 {
            simplex[3] = (xr, fr);
        } else {
            let outside = fr > worst.1;
            let xc = if outside { lerp(&c, &xr, 0.5) } else { lerp(&c, &worst.0, 0.5) };
            let Some(fc) = s.eval(exp3(&xc)) else { return };
            if (outside && fc >= fr) || (!outside && fc > worst.1) {
                simplex[3] = (xc, fc);
            } else {
                let b = simplex[0].0;
                for j in 1..4 {
                    let y = lerp(&b, &simplex[j].0, 0.5);
                    let Some(v) = s.eval(exp3(&y)) else { return };
                    simplex[j] = (y, v);
                }
            }
        }
    }
}

/// `(c_d, C_d) = (1/λ_max, 1/λ_min)` over `P_1..P_K` and the identity.
pub fn norm_equivalence(ep: &EntropyParams, order: usize, k_max: usize) -> Result<(f64, f64)> {
    let mut lo: f64 = 1.0;
    let mut hi: f64 = 1.0;
    for k in 1..=k_max {
        let ev = hermitian_eigenvalues(&build_pk(ep, k, order)?);
        lo = ev.iter().copied().fold(lo, f64::min);
        hi = ev.iter().copied().fold(hi, f64::max);
    }
    Ok((1.0 / hi, 1.0 / lo))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyCertificate {
    pub eparams: EntropyParams,
    pub mu: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C_tilde")]
    pub c_tilde: f64,
    pub c_d: f64,
    #[serde(rename = "C_d")]
    pub cap_d: f64,
    #[serde(rename = "M")]
    pub order: usize,
    #[serde(rename = "K")]
    pub k_max: usize,
    pub convention: TransportConvention,
    /// `C_tilde == 0`: no decay is certified.
    pub degenerate: bool,
    pub params_hash: String,
}

/// Builds a certificate for fixed entropy parameters.
pub fn certificate_for(
    p: &ValidatedParams,
    ep: EntropyParams,
    order: usize,
    k_max: usize,
    convention: TransportConvention,
) -> Result<EntropyCertificate> {
    let mu = find_mu(p, &ep, order, k_max, convention)?;
    let c = rate_c(p)?;
    let c_tilde = c.min(2.0 * mu);
    let (c_d, cap_d) = norm_equivalence(&ep, order, k_max)?;
    Ok(EntropyCertificate {
        eparams: ep,
        mu,
        c,
        c_tilde,
        c_d,
        cap_d,
        order,
        k_max,
        convention,
        degenerate: !(c_tilde > 0.0),
        params_hash: p.content_hash(),
    })
}

/// Optimizes the entropy parameters and builds the certificate.
pub fn certify(p: &ValidatedParams, order: usize, k_max: usize, budget: usize, opts: SearchOptions) -> Result<EntropyCertificate> {
    let (ep, _) = optimize_eparams(p, order, k_max, budget, opts)?;
    certificate_for(p, ep, order, k_max, opts.convention)
}

/// Largest real part of the spectrum of each `A_k`, `k = 0..=K`.
pub fn spectral_abscissas(p: &ValidatedParams, order: usize, k_max: usize, convention: TransportConvention) -> Result<Vec<f64>> {
    (0..=k_max)
        .into_par_iter()
        .map(|k| mode_generator(p, order, k, convention).spectral_abscissa())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub times: Vec<f64>,
    pub entropy: Vec<f64>,
    /// Least-squares slope of `-ln e(t)`; absent when `e(0) = 0`.
    pub fitted_rate: Option<f64>,
    #[serde(rename = "C_tilde")]
    pub c_tilde: f64,
    pub tol: f64,
    pub bound_satisfied: bool,
    pub spectral_abscissas: Vec<f64>,
}

impl DecayReport {
    pub fn with_abscissas(self, spectral_abscissas: Vec<f64>) -> Self {
        Self { spectral_abscissas, ..self }
    }

    /// `(1+tol) e(0) exp(-C_tilde t)` at every sample.
    pub fn bound(&self) -> Vec<f64> {
        let e0 = self.entropy.first().copied().unwrap_or(0.0);
        self.times.iter().map(|t| (1.0 + self.tol) * e0 * (-self.c_tilde * t).exp()).collect()
    }
}

pub const DEFAULT_DECAY_TOL: f64 = 0.01;

pub fn verify_decay(times: &[f64], entropy: &[f64], c_tilde: f64, tol: f64) -> DecayReport {
    let e0 = entropy.first().copied().unwrap_or(0.0);
    let bound_satisfied = times
        .iter()
        .zip(entropy)
        .all(|(t, e)| *e <= (1.0 + tol) * e0 * (-c_tilde * t).exp());
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(entropy)
        .filter(|(_, e)| **e > 0.0 && **e > e0 * 1e-280)
        .map(|(t, e)| (*t, e.ln()))
        .collect();
    let fitted_rate = if e0 > 0.0 && pts.len() >= 2 {
        let n = pts.len() as f64;
        let (mt, my) = pts.iter().fold((0.0, 0.0), |a, (t, y)| (a.0 + t / n, a.1 + y / n));
        let sxx: f64 = pts.iter().map(|(t, _)| (t - mt) * (t - mt)).sum();
        let sxy: f64 = pts.iter().map(|(t, y)| (t - mt) * (y - my)).sum();
        (sxx > 0.0).then(|| -sxy / sxx)
    } else {
        None
    };
    DecayReport {
        times: times.to_vec(),
        entropy: entropy.to_vec(),
        fitted_rate,
        c_tilde,
        tol,
        bound_satisfied,
        spectral_abscissas: Vec::new(),
    }
}

/// Entropy at `t_j = j t_end / samples`, `j = 0..=samples`, along the exact flow.
pub fn entropy_trace(
    p: &ValidatedParams,
    field: &SpectralField,
    ep: &EntropyParams,
    t_end: f64,
    samples: usize,
    convention: TransportConvention,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let samples = samples.max(1);
    let dt = t_end / samples as f64;
    let prop = Propagator::new(p, field.order, field.k_max, dt, convention);
    let traj = prop.trajectory(field, samples);
    let times = (0..=samples).map(|j| j as f64 * dt).collect();
    let e = traj.iter().map(|f| entropy(f, ep)).collect::<Result<_>>()?;
    Ok((times, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym() -> ValidatedParams {
        MixtureParams::symmetric().validate().unwrap()
    }

    #[test]
    fn pk_examples() {
        let ep = EntropyParams::new(0.3, 0.3, 0.3);
        assert_eq!(build_pk(&ep, 0, 5).unwrap(), DMatrix::identity(6, 6));
        let ev = hermitian_eigenvalues(&build_pk(&ep, 1, 5).unwrap());
        assert!(ev.iter().all(|&l| l > 0.4 && l < 1.6));
        let d = |k| (build_pk(&ep, k, 5).unwrap() - DMatrix::<C64>::identity(6, 6)).norm();
        assert!(d(1) > d(2) && d(2) > d(4) && (d(1) / d(4) - 4.0).abs() < 1e-12);
        let p = build_pk(&ep, 3, 5).unwrap();
        assert_eq!(p, p.adjoint());
        assert!(matches!(build_pk(&EntropyParams::new(1.0, 1.0, 1.0), 1, 5), Err(Error::NotPositiveDefinite { k: 1, .. })));
    }

    #[test]
    fn entropy_examples() {
        let p = MixtureParams { n_inf_1: 2.0, n_inf_2: 0.5, ..MixtureParams::symmetric() };
        let mut f = SpectralField::zeros(&p, 4, 2);
        assert_eq!(entropy(&f, &EntropyParams::new(0.1, 0.2, 0.1)).unwrap(), 0.0);
        f.modes[1].hhat1[0] = C64::new(1.0, 0.0);
        let e = entropy(&f, &EntropyParams::new(0.4, 0.0, 0.0)).unwrap();
        assert!((e - 2.0 * 0.5).abs() < 1e-15);
        f.modes[0].hhat2[3] = C64::new(0.0, 2.0);
        let e = entropy(&f, &EntropyParams::identity()).unwrap();
        assert!((e - (2.0 * 0.5 + 4.0 * 2.0)).abs() < 1e-15);
        assert_eq!(e, weighted_norm_sq(&f, WeightScheme::InverseDensity));
    }

    #[test]
    fn rate_c_examples() {
        assert_eq!(rate_c(&sym()).unwrap(), 0.5);
        let p = MixtureParams { delta: 1.0, alpha: 1.0, ..MixtureParams::symmetric() }.validate().unwrap();
        assert_eq!(rate_c(&p).unwrap(), 0.0);
        let p = MixtureParams { nu11: 0.9, ..MixtureParams::symmetric() }.validate().unwrap();
        assert!(matches!(rate_c(&p), Err(Error::NotTheoremEligible { .. })));
    }

    #[test]
    fn c_tilde_examples() {
        let p = sym();
        assert_eq!(c_tilde(&p, 1e6).unwrap(), 0.5);
        assert_eq!(c_tilde(&p, 0.0).unwrap(), 0.0);
        assert_eq!(c_tilde(&p, 0.4).unwrap(), 0.5);
    }

    #[test]
    fn identity_p_gives_zero_mu() {
        let mu = find_mu(&sym(), &EntropyParams::identity(), 8, 16, TransportConvention::MassScaled).unwrap();
        assert_eq!(mu, 0.0);
    }

    #[test]
    fn mu_bounded_by_spectral_abscissa() {
        let p = sym();
        let ep = EntropyParams::new(0.1, 0.17, 0.28);
        let mu = find_mu(&p, &ep, 8, 12, TransportConvention::MassScaled).unwrap();
        assert!(mu > 0.0);
        let worst = spectral_abscissas(&p, 8, 12, TransportConvention::MassScaled).unwrap()[1..]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(mu <= -worst + 1e-10);
    }

    #[test]
    fn optimizer_improves_and_is_monotone() {
        let p = sym();
        let opts = SearchOptions::default();
        let start_mu = find_mu(&p, &EntropyParams::new(0.3, 0.3, 0.3), 6, 16, opts.convention).unwrap();
        let mut last = 0.0;
        for budget in [10, 40, 120] {
            let (_, mu) = optimize_eparams(&p, 6, 16, budget, opts).unwrap();
            assert!(mu >= last);
            last = mu;
        }
        assert!(last > start_mu);
        let again = optimize_eparams(&p, 6, 16, 120, opts).unwrap();
        assert_eq!(again.1, last);
    }

    #[test]
    fn zero_budget_returns_start() {
        let p = sym();
        let opts = SearchOptions { start: [0.1, 0.17, 0.28], ..SearchOptions::default() };
        let (ep, mu) = optimize_eparams(&p, 6, 16, 0, opts).unwrap();
        assert_eq!([ep.alpha_tilde, ep.beta, ep.gamma_tilde], opts.start);
        let direct = find_mu(&p, &ep, 6, 16, opts.convention).unwrap();
        assert_eq!(mu, direct);
    }

    #[test]
    fn norm_equivalence_examples() {
        assert_eq!(norm_equivalence(&EntropyParams::identity(), 5, 8).unwrap(), (1.0, 1.0));
        let ep = EntropyParams::new(0.3, 0.3, 0.3);
        let ev = hermitian_eigenvalues(&build_pk(&ep, 1, 5).unwrap());
        let (lo, hi) = ev.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &l| (a.0.min(l), a.1.max(l)));
        let (c, cap) = norm_equivalence(&ep, 5, 8).unwrap();
        assert!((c - 1.0 / hi).abs() < 1e-14 && (cap - 1.0 / lo).abs() < 1e-14);
    }

    #[test]
    fn verify_decay_flags() {
        let r = verify_decay(&[0.0, 1.0], &[0.0, 0.0], 0.5, 0.01);
        assert!(r.bound_satisfied && r.fitted_rate.is_none());
        let t: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let e: Vec<f64> = t.iter().map(|t| 2.0 * (-0.7 * t).exp()).collect();
        let r = verify_decay(&t, &e, 0.5, 0.01);
        assert!(r.bound_satisfied && (r.fitted_rate.unwrap() - 0.7).abs() < 1e-12);
        assert!(!verify_decay(&t, &e, 0.9, 0.01).bound_satisfied);
    }

    #[test]
    fn k0_momentum_block_decays_at_least_at_rate_c() {
        let p = MixtureParams {
            m2: 2.0,
            n_inf_2: 1.5,
            nu11: 0.5,
            nu12: 1.0 / 3.0,
            nu21: 1.0 / 3.0,
            nu22: 4.0 / 9.0,
            ..MixtureParams::symmetric()
        };
        let p = p.validate().unwrap();
        assert!(p.theorem_eligible());
        let mut f = SpectralField::zeros(&p, 4, 0);
        f.modes[0].hhat1[1] = C64::new(0.7, 0.0);
        f.modes[0].hhat2[1] = C64::new(-0.7 * (p.m1 / p.m2).sqrt(), 0.0);
        let (t, e) = entropy_trace(&p, &f, &EntropyParams::identity(), 5.0, 50, TransportConvention::MassScaled).unwrap();
        let r = verify_decay(&t, &e, rate_c(&p).unwrap(), 0.01);
        assert!(r.fitted_rate.unwrap() >= rate_c(&p).unwrap());
        assert!(r.bound_satisfied);
    }
}
