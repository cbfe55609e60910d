//! Model parameters, Maxwellians and the nonlinear two-species BGK operator.

use std::f64::consts::PI;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, ParamIssue, Result};
use crate::quadrature::VelocityGrid;

/// Tolerance for the equality-type constraints (`nu12 = eps nu21`, the
/// theorem normalization).
pub const EQUALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureParams {
    pub m1: f64,
    pub m2: f64,
    pub nu11: f64,
    pub nu12: f64,
    pub nu21: f64,
    pub nu22: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub n_inf_1: f64,
    pub n_inf_2: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Species {
    One,
    Two,
}

/// One admissibility check and its outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintRecord {
    pub name: &'static str,
    pub relation: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// Hard constraints fail validation; soft ones only set flags.
    pub hard: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub constraints: Vec<ConstraintRecord>,
    pub theorem_eligible: bool,
    /// `nu11 n1 + nu12 n2` and `nu22 n2 + nu21 n1`.
    pub row_sums: (f64, f64),
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.constraints.iter().all(|c| c.satisfied || !c.hard)
    }

    pub fn issues(&self) -> Vec<ParamIssue> {
        self.constraints
            .iter()
            .filter(|c| c.hard && !c.satisfied)
            .map(|c| {
                if c.relation == ">" && c.rhs == 0.0 {
                    ParamIssue::NonPositive { name: c.name.to_string(), value: c.lhs }
                } else if !c.lhs.is_finite() {
                    ParamIssue::NonFinite { name: c.name.to_string() }
                } else {
                    ParamIssue::ConstraintViolation { name: c.name.to_string(), lhs: c.lhs, rhs: c.rhs }
                }
            })
            .collect()
    }
}

impl MixtureParams {
    /// Equal masses and densities, all frequencies 1/2, `delta = alpha = 1/2`.
    pub fn symmetric() -> Self {
        Self {
            m1: 1.0,
            m2: 1.0,
            nu11: 0.5,
            nu12: 0.5,
            nu21: 0.5,
            nu22: 0.5,
            epsilon: 1.0,
            delta: 0.5,
            alpha: 0.5,
            gamma: 0.0,
            n_inf_1: 1.0,
            n_inf_2: 1.0,
            l: 2.0 * PI,
        }
    }

    /// Lower bound on `delta` that keeps every mixture temperature positive.
    pub fn delta_lower_bound(&self) -> f64 {
        let r = self.epsilon * self.m1 / self.m2;
        (r - 1.0) / (1.0 + r)
    }

    /// Upper bound on `gamma`.
    pub fn gamma_upper_bound(&self) -> f64 {
        let r = self.m1 / self.m2 * self.epsilon;
        self.m1 * (1.0 - self.delta) * ((1.0 + r) * self.delta + 1.0 - r)
    }

    pub fn row_sums(&self) -> (f64, f64) {
        (
            self.nu11 * self.n_inf_1 + self.nu12 * self.n_inf_2,
            self.nu22 * self.n_inf_2 + self.nu21 * self.n_inf_1,
        )
    }

    pub fn report(&self) -> ValidationReport {
        let mut c = Vec::new();
        let mut push = |name, relation, lhs: f64, rhs: f64, ok: bool, hard| {
            c.push(ConstraintRecord { name, relation, lhs, rhs, satisfied: ok && lhs.is_finite(), hard });
        };
        for (name, v) in [
            ("m1", self.m1),
            ("m2", self.m2),
            ("n_inf_1", self.n_inf_1),
            ("n_inf_2", self.n_inf_2),
            ("L", self.l),
            ("epsilon", self.epsilon),
        ] {
            push(name, ">", v, 0.0, v > 0.0, true);
        }
        for (name, v) in [("nu11", self.nu11), ("nu12", self.nu12), ("nu21", self.nu21), ("nu22", self.nu22)] {
            push(name, ">=", v, 0.0, v >= 0.0, true);
        }
        push("epsilon", "<=", self.epsilon, 1.0, self.epsilon <= 1.0, true);
        let rhs = self.epsilon * self.nu21;
        push(
            "nu12 = epsilon*nu21",
            "=",
            self.nu12,
            rhs,
            (self.nu12 - rhs).abs() <= EQUALITY_TOL * self.nu12.abs().max(rhs.abs()).max(1.0),
            true,
        );
        push("alpha", ">=", self.alpha, 0.0, self.alpha >= 0.0, true);
        push("alpha", "<=", self.alpha, 1.0, self.alpha <= 1.0, true);
        push("gamma", ">=", self.gamma, 0.0, self.gamma >= 0.0, true);
        let lo = self.delta_lower_bound();
        push("delta lower bound", ">=", self.delta, lo, self.delta >= lo, true);
        push("delta", "<=", self.delta, 1.0, self.delta <= 1.0, true);
        let hi = self.gamma_upper_bound();
        push("gamma upper bound", "<=", self.gamma, hi, self.gamma <= hi, true);

        let (r1, r2) = self.row_sums();
        push("nu11*n1 + nu12*n2", "=", r1, 1.0, (r1 - 1.0).abs() <= EQUALITY_TOL, false);
        push("nu22*n2 + nu21*n1", "=", r2, 1.0, (r2 - 1.0).abs() <= EQUALITY_TOL, false);
        let theorem_eligible = c.iter().all(|r| r.satisfied);
        ValidationReport { constraints: c, theorem_eligible, row_sums: (r1, r2) }
    }

    /// Checks every admissibility condition, collecting all failures.
    pub fn validate(&self) -> Result<ValidatedParams> {
        let fields = [
            ("m1", self.m1),
            ("m2", self.m2),
            ("nu11", self.nu11),
            ("nu12", self.nu12),
            ("nu21", self.nu21),
            ("nu22", self.nu22),
            ("epsilon", self.epsilon),
            ("delta", self.delta),
            ("alpha", self.alpha),
            ("gamma", self.gamma),
            ("n_inf_1", self.n_inf_1),
            ("n_inf_2", self.n_inf_2),
            ("L", self.l),
        ];
        let non_finite: Vec<_> = fields
            .iter()
            .filter(|(_, v)| !v.is_finite())
            .map(|(n, _)| ParamIssue::NonFinite { name: n.to_string() })
            .collect();
        if !non_finite.is_empty() {
            return Err(Error::InvalidParams(non_finite));
        }
        let report = self.report();
        if !report.passed() {
            return Err(Error::InvalidParams(report.issues()));
        }
        Ok(ValidatedParams { raw: *self, theorem_eligible: report.theorem_eligible })
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("params serialize");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn mass(&self, s: Species) -> f64 {
        match s {
            Species::One => self.m1,
            Species::Two => self.m2,
        }
    }

    pub fn n_inf(&self, s: Species) -> f64 {
        match s {
            Species::One => self.n_inf_1,
            Species::Two => self.n_inf_2,
        }
    }
}

/// Parameters that passed [`MixtureParams::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidatedParams {
    raw: MixtureParams,
    theorem_eligible: bool,
}

impl ValidatedParams {
    pub fn theorem_eligible(&self) -> bool {
        self.theorem_eligible
    }

    pub fn raw(&self) -> &MixtureParams {
        &self.raw
    }
}

impl Deref for ValidatedParams {
    type Target = MixtureParams;
    fn deref(&self) -> &MixtureParams {
        &self.raw
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MacroState {
    pub n: f64,
    pub u: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

/// `n (2 pi T / m)^{-1/2} exp(-m (v-u)^2 / (2T))`.
pub fn maxwellian(n: f64, u: f64, t: f64, m: f64, v: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::NonPositive { name: "n", value: n });
    }
    if !(t > 0.0) {
        return Err(Error::NonPositive { name: "T", value: t });
    }
    if !(m > 0.0) {
        return Err(Error::NonPositive { name: "m", value: m });
    }
    Ok(maxwellian_unchecked(n, u, t, m, v))
}

#[inline]
pub(crate) fn maxwellian_unchecked(n: f64, u: f64, t: f64, m: f64, v: f64) -> f64 {
    let d = v - u;
    n * (m / (2.0 * PI * t)).sqrt() * (-0.5 * m * d * d / t).exp()
}

/// Mean velocities `(u12, u21)` of the mixture Maxwellians.
pub fn mixture_velocities(p: &ValidatedParams, u1: f64, u2: f64) -> (f64, f64) {
    let u12 = p.delta * u1 + (1.0 - p.delta) * u2;
    let u21 = u2 - p.m1 / p.m2 * p.epsilon * (1.0 - p.delta) * (u2 - u1);
    (u12, u21)
}

/// Temperatures `(T12, T21)` of the mixture Maxwellians.
pub fn mixture_temperatures(p: &ValidatedParams, u1: f64, u2: f64, t1: f64, t2: f64) -> Result<(f64, f64)> {
    if !(t1 > 0.0) {
        return Err(Error::NonPositiveTemperature { name: "T1", value: t1 });
    }
    if !(t2 > 0.0) {
        return Err(Error::NonPositiveTemperature { name: "T2", value: t2 });
    }
    let du2 = (u1 - u2) * (u1 - u2);
    let (m1, m2, eps, d, a) = (p.m1, p.m2, p.epsilon, p.delta, p.alpha);
    let t12 = a * t1 + (1.0 - a) * t2 + p.gamma * du2;
    let coeff = eps * m1 * (1.0 - d) * (m1 / m2 * eps * (d - 1.0) + d + 1.0) - eps * p.gamma;
    let t21 = coeff * du2 + eps * (1.0 - a) * t1 + (1.0 - eps * (1.0 - a)) * t2;
    Ok((t12, t21))
}

/// Density, mean velocity and temperature of `f` sampled on `grid`.
pub fn moments(grid: &VelocityGrid, f: &[f64], m: f64) -> Result<MacroState> {
    if f.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: f.len() });
    }
    let n = grid.integrate(f);
    if !(n > 1e-14) {
        return Err(Error::DegenerateDensity { n });
    }
    let nodes = grid.nodes();
    let u = grid.integrate(&f.iter().zip(nodes).map(|(fi, v)| v * fi).collect::<Vec<_>>()) / n;
    let t = m / n
        * grid.integrate(&f.iter().zip(nodes).map(|(fi, v)| (v - u) * (v - u) * fi).collect::<Vec<_>>());
    if !(t > 0.0) {
        return Err(Error::NonPositiveTemperature { name: "T", value: t });
    }
    Ok(MacroState { n, u, t })
}

/// Global equilibrium `f_k^inf(v)`: density `n_inf_k`, zero velocity, unit temperature.
pub fn equilibrium(p: &MixtureParams, s: Species, v: f64) -> f64 {
    maxwellian_unchecked(p.n_inf(s), 0.0, 1.0, p.mass(s), v)
}

/// Pointwise BGK collision terms `(Q1, Q2)` for sampled distributions.
pub fn nonlinear_rhs(p: &ValidatedParams, grid: &VelocityGrid, f1: &[f64], f2: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let s1 = moments(grid, f1, p.m1)?;
    let s2 = moments(grid, f2, p.m2)?;
    let (u12, u21) = mixture_velocities(p, s1.u, s2.u);
    let (t12, t21) = mixture_temperatures(p, s1.u, s2.u, s1.t, s2.t)?;
    let a1 = p.nu11 * s1.n;
    let b1 = p.nu12 * s2.n;
    let a2 = p.nu22 * s2.n;
    let b2 = p.nu21 * s1.n;
    let mut q1 = Vec::with_capacity(grid.len());
    let mut q2 = Vec::with_capacity(grid.len());
    for (j, &v) in grid.nodes().iter().enumerate() {
        let m1 = maxwellian_unchecked(s1.n, s1.u, s1.t, p.m1, v);
        let m12 = maxwellian_unchecked(s1.n, u12, t12, p.m1, v);
        let m2 = maxwellian_unchecked(s2.n, s2.u, s2.t, p.m2, v);
        let m21 = maxwellian_unchecked(s2.n, u21, t21, p.m2, v);
        q1.push(a1 * (m1 - f1[j]) + b1 * (m12 - f1[j]));
        q2.push(a2 * (m2 - f2[j]) + b2 * (m21 - f2[j]));
    }
    Ok((q1, q2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> VelocityGrid {
        VelocityGrid::gauss_hermite(128, 1.0).unwrap()
    }

    #[test]
    fn symmetric_preset_is_theorem_eligible() {
        let p = MixtureParams::symmetric();
        let v = p.validate().unwrap();
        assert!(v.theorem_eligible());
    }

    #[test]
    fn boundary_example_is_valid() {
        let p = MixtureParams { delta: 1.0, gamma: 0.0, ..MixtureParams::symmetric() };
        assert!(p.validate().unwrap().theorem_eligible());
    }

    #[test]
    fn delta_below_bound_reports_bound() {
        let p = MixtureParams { delta: -0.5, ..MixtureParams::symmetric() };
        match p.validate() {
            Err(Error::InvalidParams(issues)) => {
                assert!(issues.iter().any(|i| matches!(i,
                    ParamIssue::ConstraintViolation { name, lhs, rhs }
                        if name == "delta lower bound" && *lhs == -0.5 && *rhs == 0.0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_gamma_and_mass_are_collected_together() {
        let p = MixtureParams { gamma: -0.1, m1: -1.0, ..MixtureParams::symmetric() };
        let Err(Error::InvalidParams(issues)) = p.validate() else { panic!() };
        assert!(issues.iter().any(|i| matches!(i, ParamIssue::NonPositive { name, .. } if name == "m1")));
        assert!(issues.iter().any(|i| matches!(i, ParamIssue::ConstraintViolation { name, .. } if name == "gamma")));
    }

    #[test]
    fn normalization_is_a_flag() {
        let p = MixtureParams { nu11: 0.7, ..MixtureParams::symmetric() };
        let v = p.validate().unwrap();
        assert!(!v.theorem_eligible());
    }

    #[test]
    fn frequency_relation_is_enforced() {
        let p = MixtureParams { nu21: 0.6, ..MixtureParams::symmetric() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let p = MixtureParams { alpha: f64::NAN, ..MixtureParams::symmetric() };
        assert!(matches!(p.validate(), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn maxwellian_values() {
        let v0 = maxwellian(1.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert!((v0 - 0.398_942_280_401_432_7).abs() < 1e-15);
        let a = maxwellian(2.0, 0.3, 0.7, 1.4, 0.9).unwrap();
        let b = maxwellian(1.0, 0.3, 0.7, 1.4, 0.9).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-15);
        assert!(maxwellian(1.0, 0.0, 0.0, 1.0, 0.0).is_err());
        let g = VelocityGrid::gauss_hermite(128, 2.0).unwrap();
        let total = g.integrate_fn(|v| maxwellian(1.3, 0.2, 0.7, 2.0, v).unwrap());
        assert!((total - 1.3).abs() < 1e-10);
    }

    #[test]
    fn mixture_velocity_examples() {
        let p = MixtureParams { delta: 1.0, ..MixtureParams::symmetric() }.validate().unwrap();
        assert_eq!(mixture_velocities(&p, 0.3, -0.7), (0.3, -0.7));
        let p = MixtureParams { delta: 0.0, ..MixtureParams::symmetric() }.validate().unwrap();
        let (a, b) = mixture_velocities(&p, 0.3, -0.7);
        approx::assert_abs_diff_eq!(a, -0.7, epsilon = 1e-15);
        approx::assert_abs_diff_eq!(b, 0.3, epsilon = 1e-15);
        let p = MixtureParams::symmetric().validate().unwrap();
        assert_eq!(mixture_velocities(&p, 0.4, 0.4), (0.4, 0.4));
    }

    #[test]
    fn mixture_temperature_examples() {
        let p = MixtureParams { alpha: 1.0, ..MixtureParams::symmetric() }.validate().unwrap();
        assert_eq!(mixture_temperatures(&p, 0.1, 0.5, 1.3, 0.4).unwrap().0, 1.3);
        let p = MixtureParams { epsilon: 0.5, nu12: 0.25, delta: 0.2, alpha: 0.3, ..MixtureParams::symmetric() }
            .validate()
            .unwrap();
        let (t12, t21) = mixture_temperatures(&p, 0.2, 0.2, 1.5, 0.5).unwrap();
        assert!((t12 - (0.3 * 1.5 + 0.7 * 0.5)).abs() < 1e-15);
        assert!((t21 - (0.5 * 0.7 * 1.5 + (1.0 - 0.35) * 0.5)).abs() < 1e-15);
        let (a, b) = mixture_temperatures(&p, -0.4, -0.4, 0.8, 0.8).unwrap();
        assert!((a - 0.8).abs() < 1e-15 && (b - 0.8).abs() < 1e-15);
        assert!(mixture_temperatures(&p, 0.0, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn moments_of_maxwellians() {
        let g = grid();
        let f = g.sample(|v| maxwellian(1.0, 0.0, 1.0, 1.0, v).unwrap());
        let s = moments(&g, &f, 1.0).unwrap();
        assert!((s.n - 1.0).abs() < 1e-10 && s.u.abs() < 1e-10 && (s.t - 1.0).abs() < 1e-10);
        let f2: Vec<f64> = f.iter().map(|x| 2.0 * x).collect();
        let s2 = moments(&g, &f2, 1.0).unwrap();
        assert!((s2.n - 2.0).abs() < 1e-10 && (s2.t - s.t).abs() < 1e-12);
        let f = g.sample(|v| maxwellian(1.0, 0.3, 0.5, 2.0, v).unwrap());
        let s = moments(&g, &f, 2.0).unwrap();
        assert!((s.n - 1.0).abs() < 1e-10 && (s.u - 0.3).abs() < 1e-10 && (s.t - 0.5).abs() < 1e-10);
        assert!(matches!(moments(&g, &vec![0.0; g.len()], 1.0), Err(Error::DegenerateDensity { .. })));
    }

    #[test]
    fn equilibrium_examples() {
        let p = MixtureParams::symmetric();
        assert!((equilibrium(&p, Species::One, 0.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let q = MixtureParams { m2: 4.0, ..p };
        assert!((equilibrium(&q, Species::Two, 0.0) - 2.0 * equilibrium(&p, Species::Two, 0.0)).abs() < 1e-15);
        let q = MixtureParams { m1: 1.7, n_inf_1: 0.6, ..p };
        let g = VelocityGrid::gauss_hermite(128, 1.7).unwrap();
        let s = moments(&g, &g.sample(|v| equilibrium(&q, Species::One, v)), 1.7).unwrap();
        assert!((s.n - 0.6).abs() < 1e-10 && s.u.abs() < 1e-10 && (s.t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn nonlinear_rhs_vanishes_on_common_maxwellians() {
        let p = MixtureParams { m2: 2.0, epsilon: 0.5, nu12: 0.25, ..MixtureParams::symmetric() }
            .validate()
            .unwrap();
        let g = grid();
        let f1 = g.sample(|v| maxwellian(0.8, 0.2, 1.3, p.m1, v).unwrap());
        let f2 = g.sample(|v| maxwellian(1.1, 0.2, 1.3, p.m2, v).unwrap());
        let (q1, q2) = nonlinear_rhs(&p, &g, &f1, &f2).unwrap();
        assert!(q1.iter().chain(&q2).all(|q| q.abs() < 1e-12));
    }

    #[test]
    fn nonlinear_rhs_conserves() {
        let p = MixtureParams {
            m1: 1.0,
            m2: 3.0,
            epsilon: 1.0 / 3.0,
            nu11: 0.4,
            nu12: 0.2,
            nu21: 0.6,
            nu22: 0.3,
            delta: 0.4,
            alpha: 0.6,
            gamma: 0.05,
            n_inf_1: 1.0,
            n_inf_2: 1.0,
            l: 1.0,
        }
        .validate()
        .unwrap();
        let g = VelocityGrid::gauss_hermite(160, 1.0).unwrap();
        let f1 = g.sample(|v| {
            maxwellian(0.7, 0.3, 1.2, 1.0, v).unwrap() + maxwellian(0.2, -0.5, 0.6, 1.0, v).unwrap()
        });
        let f2 = g.sample(|v| maxwellian(1.2, -0.2, 0.8, 3.0, v).unwrap());
        let (q1, q2) = nonlinear_rhs(&p, &g, &f1, &f2).unwrap();
        assert!(g.integrate(&q1).abs() < 1e-10);
        assert!(g.integrate(&q2).abs() < 1e-10);
        let mom: f64 = g
            .nodes()
            .iter()
            .zip(g.weights())
            .zip(q1.iter().zip(&q2))
            .map(|((v, w), (a, b))| w * v * (p.m1 * a + p.m2 * b))
            .sum();
        assert!(mom.abs() < 1e-10, "{mom}");
        let en: f64 = g
            .nodes()
            .iter()
            .zip(g.weights())
            .zip(q1.iter().zip(&q2))
            .map(|((v, w), (a, b))| w * v * v * (p.m1 * a + p.m2 * b))
            .sum();
        assert!(en.abs() < 1e-10, "{en}");
    }

    #[test]
    fn content_hash_is_stable_and_sensitive() {
        let a = MixtureParams::symmetric();
        assert_eq!(a.content_hash(), a.content_hash());
        assert_ne!(a.content_hash(), MixtureParams { gamma: 1e-9, ..a }.content_hash());
    }

    #[test]
    fn params_round_trip_with_config_keys() {
        let s = serde_json::to_string(&MixtureParams::symmetric()).unwrap();
        assert!(s.contains("\"L\"") && s.contains("n_inf_1"));
        let back: MixtureParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, MixtureParams::symmetric());
    }
}
