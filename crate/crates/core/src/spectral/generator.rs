use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::ValidatedParams;
use crate::C64;

/// Scaling of the tridiagonal transport matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransportConvention {
    /// Entries `sqrt(m+1) / sqrt(mass)`, the exact projection of `v g_m`.
    #[default]
    MassScaled,
    /// Entries `sqrt(m+1)`, exact only for unit masses.
    PaperLiteral,
}

/// Transport (`l11`, `l21`) and relaxation/coupling matrices, each `(M+1)×(M+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrices {
    pub l11: DMatrix<f64>,
    pub l12: DMatrix<f64>,
    pub l13: DMatrix<f64>,
    pub l14: DMatrix<f64>,
    pub l21: DMatrix<f64>,
    pub l22: DMatrix<f64>,
    pub l23: DMatrix<f64>,
    pub l24: DMatrix<f64>,
}

fn transport(order: usize, scale: f64) -> DMatrix<f64> {
    let n = order + 1;
    DMatrix::from_fn(n, n, |i, j| if i + 1 == j || j + 1 == i { (i.max(j) as f64).sqrt() * scale } else { 0.0 })
}

/// `diag(d0, d1, d2, tail, tail, ...)`.
fn diag(order: usize, head: [f64; 3], tail: f64) -> DMatrix<f64> {
    let n = order + 1;
    DMatrix::from_fn(n, n, |i, j| if i != j { 0.0 } else if i < 3 { head[i] } else { tail })
}

pub fn coupling_matrices(p: &ValidatedParams, order: usize, convention: TransportConvention) -> CouplingMatrices {
    let (s1, s2) = match convention {
        TransportConvention::MassScaled => (1.0 / p.m1.sqrt(), 1.0 / p.m2.sqrt()),
        TransportConvention::PaperLiteral => (1.0, 1.0),
    };
    let (n1, n2, d, a, eps) = (p.n_inf_1, p.n_inf_2, p.delta, p.alpha, p.epsilon);
    let rm = p.m1 / p.m2;
    CouplingMatrices {
        l11: transport(order, s1),
        l12: diag(order, [0.0, 0.0, 0.0], 1.0),
        l13: diag(order, [0.0, 1.0 - d, 1.0 - a], 1.0),
        l14: diag(order, [0.0, (1.0 - d) * n1 / n2 * rm.sqrt(), (1.0 - a) * n1 / n2], 0.0),
        l21: transport(order, s2),
        l22: diag(order, [0.0, 0.0, 0.0], 1.0),
        l23: diag(order, [0.0, rm * eps * (1.0 - d), eps * (1.0 - a)], 1.0),
        l24: diag(order, [0.0, n2 / n1 * rm.sqrt() * eps * (1.0 - d), n2 / n1 * eps * (1.0 - a)], 0.0),
    }
}

/// Generator of the mode-`k` system acting on `(hhat1; hhat2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGenerator {
    pub k: usize,
    pub a: DMatrix<C64>,
}

pub fn mode_generator(p: &ValidatedParams, order: usize, k: usize, convention: TransportConvention) -> ModeGenerator {
    let c = coupling_matrices(p, order, convention);
    mode_generator_from(p, &c, k)
}

pub(crate) fn mode_generator_from(p: &ValidatedParams, c: &CouplingMatrices, k: usize) -> ModeGenerator {
    let n = c.l11.nrows();
    let wave = k as f64 * 2.0 * PI / p.l;
    let (n1, n2) = (p.n_inf_1, p.n_inf_2);
    let ul = -(&c.l12 * (p.nu11 * n1)) - &c.l13 * (p.nu12 * n2);
    let ur = &c.l14 * (p.nu12 * n2);
    let lr = -(&c.l22 * (p.nu22 * n2)) - &c.l23 * (p.nu21 * n1);
    let ll = &c.l24 * (p.nu21 * n1);
    let mut a = DMatrix::<C64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = C64::new(ul[(i, j)], -wave * c.l11[(i, j)]);
            a[(i, j + n)] = C64::new(ur[(i, j)], 0.0);
            a[(i + n, j)] = C64::new(ll[(i, j)], 0.0);
            a[(i + n, j + n)] = C64::new(lr[(i, j)], -wave * c.l21[(i, j)]);
        }
    }
    ModeGenerator { k, a }
}

impl ModeGenerator {
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        let schur = Schur::try_new(self.a.clone(), 1e-14, 10_000)
            .ok_or_else(|| Error::NonConvergence(format!("Schur decomposition at k = {}", self.k)))?;
        Ok(schur.eigenvalues().expect("complex Schur form is triangular").iter().copied().collect())
    }

    /// Largest real part of the spectrum.
    pub fn spectral_abscissa(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn order(&self) -> usize {
        self.a.nrows() / 2 - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::MixtureParams;

    fn asym() -> ValidatedParams {
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

    #[test]
    fn endpoint_coupling_vanishes() {
        let p = MixtureParams { delta: 1.0, alpha: 1.0, ..MixtureParams::symmetric() }.validate().unwrap();
        let c = coupling_matrices(&p, 6, TransportConvention::MassScaled);
        assert!(c.l14.iter().all(|&x| x == 0.0) && c.l24.iter().all(|&x| x == 0.0));
        assert_eq!(c.l13, c.l12);
    }

    #[test]
    fn displayed_entries() {
        let p = asym();
        let c = coupling_matrices(&p, 5, TransportConvention::PaperLiteral);
        assert_eq!(c.l13[(1, 1)], 1.0 - p.delta);
        assert_eq!(c.l23[(1, 1)], p.m1 / p.m2 * p.epsilon * (1.0 - p.delta));
        for m in 0..5 {
            assert_eq!(c.l11[(m, m + 1)], ((m + 1) as f64).sqrt());
            assert_eq!(c.l21[(m + 1, m)], ((m + 1) as f64).sqrt());
        }
        let c = coupling_matrices(&p, 5, TransportConvention::MassScaled);
        assert!((c.l21[(0, 1)] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.l11, c.l11.transpose());
    }

    #[test]
    fn k0_sigma_rows_vanish() {
        let g = mode_generator(&asym(), 6, 0, TransportConvention::MassScaled);
        let n = 7;
        for j in 0..2 * n {
            assert_eq!(g.a[(0, j)], C64::new(0.0, 0.0));
            assert_eq!(g.a[(n, j)], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn opposite_momenta_decay_at_interspecies_rate() {
        let p = MixtureParams::symmetric().validate().unwrap();
        let g = mode_generator(&p, 5, 0, TransportConvention::MassScaled);
        let mut x = nalgebra::DVector::<C64>::zeros(12);
        x[1] = C64::new(1.0, 0.0);
        x[7] = C64::new(-1.0, 0.0);
        let ax = &g.a * &x;
        let lam = -2.0 * p.nu12 * p.n_inf_2 * (1.0 - p.delta);
        assert!((ax - x * C64::new(lam, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn conserved_combinations_span_kernel() {
        let p = asym();
        let g = mode_generator(&p, 8, 0, TransportConvention::MassScaled);
        let n = 9;
        // Left null vectors: the conserved linear functionals.
        let mut mom = nalgebra::DVector::<C64>::zeros(2 * n);
        mom[1] = C64::new(p.m1.sqrt(), 0.0);
        mom[n + 1] = C64::new(p.m2.sqrt(), 0.0);
        let mut en = nalgebra::DVector::<C64>::zeros(2 * n);
        en[2] = C64::new(1.0, 0.0);
        en[n + 2] = C64::new(1.0, 0.0);
        let scale = g.a.norm();
        assert!((g.a.transpose() * mom).norm() < 1e-12 * scale);
        assert!((g.a.transpose() * en).norm() < 1e-12 * scale);
    }

    #[test]
    fn abscissa_nonpositive_for_normalized_params() {
        let p = asym();
        assert!(p.theorem_eligible());
        for k in 0..6 {
            let s = mode_generator(&p, 10, k, TransportConvention::MassScaled).spectral_abscissa().unwrap();
            assert!(s <= 1e-12, "k = {k}: {s}");
        }
    }
}
