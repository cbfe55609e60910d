//! Run configuration: TOML file, named presets, command-line overrides.
//!
//! ```toml
//! preset = "symmetric"      # optional base, other keys overlay it
//! seed = 7
//!
//! [params]
//! m1 = 1.0
//! delta = 0.25
//!
//! [truncation]
//! M = 8
//! K = 32
//!
//! [initial]
//! kind = "random-band-limited"
//! k_max = 4
//! order_max = 4
//! ```

use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypocoercivity::WeightScheme;
use crate::mixture::MixtureParams;
use crate::oracle::GridChoice;
use crate::spectral::{io::read_field, Integrator, ModeState, SpectralField, TransportConvention};
use crate::C64;

pub const PRESETS: [&str; 7] = ["symmetric", "asymmetric", "zero", "single-mode", "k0-momentum", "random", "degenerate"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub seed: u64,
    pub params: MixtureParams,
    pub truncation: Truncation,
    pub time: TimeConfig,
    pub entropy: EntropyConfig,
    pub initial: InitialSpec,
    pub oracle: OracleConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    #[serde(rename = "M")]
    pub order: usize,
    #[serde(rename = "K")]
    pub k_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_end: f64,
    pub samples: usize,
    pub integrator: Integrator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConfig {
    pub weight_scheme: WeightScheme,
    /// Fixed `(alpha_tilde, beta, gamma_tilde)`; skips the search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<[f64; 3]>,
    pub start: [f64; 3],
    pub budget: usize,
    /// Hermite truncation used for the certificate.
    #[serde(rename = "M")]
    pub order: usize,
    /// Fourier range `1..=K` checked by the certificate.
    #[serde(rename = "K")]
    pub k_max: usize,
    pub decay_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    Zero,
    /// `amplitude * g_{species, order}(v) * cos(k 2π x / L)`.
    SingleMode { k: usize, species: u8, order: usize, amplitude: f64 },
    /// Opposite momenta at `k = 0` with zero total momentum.
    K0Momentum { amplitude: f64 },
    /// Random coefficients for `k ≤ k_max`, Hermite order `≤ order_max`,
    /// with the `k = 0` conserved quantities removed.
    RandomBandLimited { k_max: usize, order_max: usize, amplitude: f64 },
    /// A field file written by `simulate`.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub velocity_nodes: usize,
    pub grid: GridChoice,
    pub modes: Vec<usize>,
    pub t: f64,
    /// Hermite truncation of the spectral side of the comparison.
    #[serde(rename = "M")]
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub transport: TransportConvention,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: None,
            seed: 0,
            params: MixtureParams::symmetric(),
            truncation: Truncation { order: 8, k_max: 32 },
            time: TimeConfig { t_end: 10.0, samples: 200, integrator: Integrator::ExactExponential },
            entropy: EntropyConfig {
                weight_scheme: WeightScheme::InverseDensity,
                fixed: None,
                start: [0.3, 0.3, 0.3],
                budget: 150,
                order: 8,
                k_max: 32,
                decay_tol: crate::hypocoercivity::DEFAULT_DECAY_TOL,
            },
            initial: InitialSpec::RandomBandLimited { k_max: 4, order_max: 4, amplitude: 0.1 },
            oracle: OracleConfig {
                velocity_nodes: 400,
                grid: GridChoice::GaussHermite,
                modes: vec![0, 1, 4, 8],
                t: 1.0,
                order: 40,
            },
            output: OutputConfig { dir: PathBuf::from("out"), transport: TransportConvention::MassScaled },
        }
    }
}

impl RunConfig {
    pub fn preset(name: &str) -> Result<Self> {
        let base = RunConfig { preset: Some(name.to_string()), ..RunConfig::default() };
        let cfg = match name {
            "symmetric" => base,
            "asymmetric" => RunConfig {
                params: MixtureParams {
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
                    l: 4.0 * std::f64::consts::PI,
                },
                ..base
            },
            "zero" => RunConfig { initial: InitialSpec::Zero, ..base },
            "single-mode" => RunConfig {
                initial: InitialSpec::SingleMode { k: 1, species: 1, order: 1, amplitude: 0.1 },
                ..base
            },
            "k0-momentum" => RunConfig { initial: InitialSpec::K0Momentum { amplitude: 0.1 }, ..base },
            "random" => RunConfig {
                initial: InitialSpec::RandomBandLimited { k_max: 8, order_max: 6, amplitude: 0.1 },
                ..base
            },
            "degenerate" => RunConfig {
                params: MixtureParams { delta: 1.0, alpha: 1.0, ..MixtureParams::symmetric() },
                ..base
            },
            other => return Err(Error::Config(format!("unknown preset `{other}` (known: {})", PRESETS.join(", ")))),
        };
        Ok(cfg)
    }

    /// Overlays the keys of `doc` on this configuration.
    pub fn overlay(&self, doc: &str) -> Result<Self> {
        let patch: toml::Table = toml::from_str(doc).map_err(|e| Error::Config(e.to_string()))?;
        let mut base = toml::Table::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        merge(&mut base, patch);
        toml::Value::Table(base).try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
    }

    /// Parses a config document; a top-level `preset` key picks the base.
    pub fn from_toml(doc: &str) -> Result<Self> {
        let patch: toml::Table = toml::from_str(doc).map_err(|e| Error::Config(e.to_string()))?;
        let base = match patch.get("preset").and_then(|v| v.as_str()) {
            Some(name) => RunConfig::preset(name)?,
            None => RunConfig::default(),
        };
        base.overlay(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let doc = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&doc)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn merge(base: &mut toml::Table, patch: toml::Table) {
    for (k, v) in patch {
        match (base.get_mut(&k), v) {
            // Tagged enums are replaced whole so stale variant fields do not linger.
            (Some(toml::Value::Table(b)), toml::Value::Table(p)) if !p.contains_key("kind") && !p.contains_key("method") => {
                merge(b, p)
            }
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Builds the initial spectral field described by `cfg.initial`.
pub fn initial_field(cfg: &RunConfig) -> Result<SpectralField> {
    let (order, k_max) = (cfg.truncation.order, cfg.truncation.k_max);
    let p = &cfg.params;
    let mut f = SpectralField::zeros(p, order, k_max);
    match &cfg.initial {
        InitialSpec::Zero => {}
        InitialSpec::SingleMode { k, species, order: m, amplitude } => {
            if *k > k_max || *m > order || !(1..=2).contains(species) {
                return Err(Error::Config(format!("single-mode (k={k}, species={species}, order={m}) outside truncation")));
            }
            // cos splits evenly over ±k
            let c = if *k == 0 { *amplitude } else { 0.5 * amplitude };
            let mode = f.mode_mut(*k);
            let target = if *species == 1 { &mut mode.hhat1 } else { &mut mode.hhat2 };
            target[*m] = C64::new(c, 0.0);
        }
        InitialSpec::K0Momentum { amplitude } => {
            if order < 1 {
                return Err(Error::Config("k0-momentum needs M >= 1".into()));
            }
            let mode = f.mode_mut(0);
            mode.hhat1[1] = C64::new(*amplitude, 0.0);
            mode.hhat2[1] = C64::new(-amplitude * (p.m1 / p.m2).sqrt(), 0.0);
        }
        InitialSpec::RandomBandLimited { k_max: kk, order_max, amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let kk = (*kk).min(k_max);
            let mm = (*order_max).min(order);
            for k in 0..=kk {
                let mode = f.mode_mut(k);
                for h in [&mut mode.hhat1, &mut mode.hhat2] {
                    for m in 0..=mm {
                        let re = rng.random_range(-1.0..1.0);
                        let im = if k == 0 { 0.0 } else { rng.random_range(-1.0..1.0) };
                        h[m] = C64::new(re, im) * *amplitude;
                    }
                }
            }
            normalize_conserved(&mut f);
        }
        InitialSpec::File { path } => {
            let file = std::fs::File::open(path)
                .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
            f = read_field(p, std::io::BufReader::new(file))?;
            if f.order != order || f.k_max != k_max {
                return Err(Error::Config(format!(
                    "field file has M = {}, K = {}; config asks for M = {order}, K = {k_max}",
                    f.order, f.k_max
                )));
            }
        }
    }
    Ok(f)
}

/// Removes the `k = 0` densities and the conserved momentum and energy
/// combinations, keeping each species' momentum and energy coefficient for
/// species 1 and adjusting species 2.
pub fn normalize_conserved(f: &mut SpectralField) {
    let r = (f.params.m1 / f.params.m2).sqrt();
    let mode: &mut ModeState = f.mode_mut(0);
    mode.hhat1[0] = C64::new(0.0, 0.0);
    mode.hhat2[0] = C64::new(0.0, 0.0);
    for h in [&mut mode.hhat1, &mut mode.hhat2] {
        for z in h.iter_mut() {
            z.im = 0.0;
        }
    }
    if mode.hhat1.len() > 1 {
        mode.hhat2[1] = -mode.hhat1[1] * r;
    }
    if mode.hhat1.len() > 2 {
        mode.hhat2[2] = -mode.hhat1[2];
    }
}

/// Stacked `(hhat1; hhat2)` of every mode, for hashing or comparison.
pub fn flatten(f: &SpectralField) -> DVector<C64> {
    let parts: Vec<C64> = f.modes.iter().flat_map(|m| m.stacked().iter().copied().collect::<Vec<_>>()).collect();
    DVector::from_vec(parts)
}
