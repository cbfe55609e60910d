//! Command orchestration behind the `bgkmix` binary.
//!
//! Every command writes a JSON document into the output directory. The
//! document embeds the resolved configuration, the parameter hash and a
//! SHA-256 `content_hash` over the rest of the document, so reruns with the
//! same configuration are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{initial_field, RunConfig};
use crate::error::{Error, Result};
use crate::hypocoercivity::{
    certificate_for, entropy, optimize_eparams, spectral_abscissas, verify_decay, DecayReport, EntropyCertificate,
    EntropyParams, SearchOptions,
};
use crate::linearization::check_derivatives_fd;
use crate::mixture::ValidatedParams;
use crate::oracle::{compare, default_grid, trapezoid_grid, CompareReport, GridChoice};
use crate::spectral::{evolve, io::write_field, mode_moments, Integrator, Propagator, SpectralField};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "BGKMIX_THREADS";

/// Soft threshold for the derivative-table check in `validate`.
pub const FD_WARN: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    ValidationFailure = 1,
    RuntimeError = 2,
    CertificationFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn for_error(e: &Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::NotTheoremEligible { .. } => ExitStatus::ValidationFailure,
            Error::SearchFailed { .. } => ExitStatus::CertificationFailure,
            _ => ExitStatus::RuntimeError,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Simulate,
    Certify,
    Compare,
    DecayCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Simulate => "simulate",
            Command::Certify => "certify",
            Command::Compare => "compare",
            Command::DecayCheck => "decay-check",
        }
    }
}

/// Command-line overrides applied on top of the file or preset.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub paper_literal_transport: bool,
}

/// Preset first, then the file, then individual flags.
pub fn resolve_config(o: &Overrides) -> Result<RunConfig> {
    let mut cfg = match (&o.preset, &o.config) {
        (Some(name), Some(path)) => {
            let doc = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::preset(name)?.overlay(&doc)?
        }
        (Some(name), None) => RunConfig::preset(name)?,
        (None, Some(path)) => RunConfig::load(path)?,
        (None, None) => RunConfig::default(),
    };
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &o.out {
        cfg.output.dir = out.clone();
    }
    if o.paper_literal_transport {
        cfg.output.transport = crate::spectral::TransportConvention::PaperLiteral;
    }
    Ok(cfg)
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Wraps `result` with the config and hashes; returns pretty JSON text.
pub fn document(command: Command, cfg: &RunConfig, result: Value) -> String {
    let mut doc = json!({
        "command": command.name(),
        "seed": cfg.seed,
        "params_hash": cfg.params.content_hash(),
        "config": cfg,
        "result": result,
    });
    let body = serde_json::to_vec(&doc).expect("document serializes");
    doc["content_hash"] = Value::String(sha256_hex(&body));
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    files.push(path);
    Ok(())
}

fn validated(cfg: &RunConfig) -> Result<ValidatedParams> {
    cfg.params.validate()
}

/// Runs one command; errors map to exit codes through [`ExitStatus::for_error`].
pub fn run(command: Command, cfg: &RunConfig) -> Outcome {
    let res = match command {
        Command::Validate => cmd_validate(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::Certify => cmd_certify(cfg),
        Command::Compare => cmd_compare(cfg),
        Command::DecayCheck => cmd_decay_check(cfg),
    };
    res.unwrap_or_else(|e| Outcome { status: ExitStatus::for_error(&e), summary: format!("error: {e}"), files: Vec::new() })
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<Outcome> {
    let report = cfg.params.report();
    let mut files = Vec::new();
    let mut summary = String::new();
    for c in &report.constraints {
        let mark = if c.satisfied { "ok  " } else if c.hard { "FAIL" } else { "flag" };
        let _ = writeln!(summary, "{mark} {} {} {:.6e} vs {:.6e}", c.name, c.relation, c.lhs, c.rhs);
    }
    let _ = writeln!(summary, "theorem-eligible: {}", if report.theorem_eligible { "yes" } else { "no" });
    let (status, fd) = match cfg.params.validate() {
        Ok(p) => {
            let fd = check_derivatives_fd(&p, 1e-5);
            let _ = writeln!(summary, "derivative check max relative error: {fd:.3e}");
            if fd > FD_WARN {
                let _ = writeln!(summary, "warning: derivative check above {FD_WARN:.0e}");
            }
            (ExitStatus::Ok, Some(fd))
        }
        Err(e) => {
            let _ = writeln!(summary, "{e}");
            (ExitStatus::ValidationFailure, None)
        }
    };
    let result = json!({
        "passed": status == ExitStatus::Ok,
        "report": report,
        "derivative_check_max_error": fd,
        "derivative_check_warning": fd.map(|x| x > FD_WARN),
    });
    write(&cfg.output.dir, "validate.json", &document(Command::Validate, cfg, result), &mut files)?;
    Ok(Outcome { status, summary, files })
}

/// Certificate from fixed entropy parameters, or from a search.
pub fn obtain_certificate(p: &ValidatedParams, cfg: &RunConfig) -> Result<EntropyCertificate> {
    let e = &cfg.entropy;
    let conv = cfg.output.transport;
    let ep = match e.fixed {
        Some([a, b, c]) => EntropyParams::new(a, b, c).with_scheme(e.weight_scheme),
        None => {
            let opts = SearchOptions { start: e.start, seed: cfg.seed, weight_scheme: e.weight_scheme, convention: conv };
            optimize_eparams(p, e.order, e.k_max, e.budget, opts)?.0
        }
    };
    certificate_for(p, ep, e.order, e.k_max, conv)
}

pub fn cmd_certify(cfg: &RunConfig) -> Result<Outcome> {
    let p = validated(cfg)?;
    let mut files = Vec::new();
    let (status, result, summary) = match obtain_certificate(&p, cfg) {
        Ok(cert) => {
            let status = if cert.degenerate { ExitStatus::CertificationFailure } else { ExitStatus::Ok };
            let s = format!(
                "mu = {:.6e}, C = {:.6e}, C_tilde = {:.6e}, c_d = {:.6e}, C_d = {:.6e}{}\n",
                cert.mu,
                cert.c,
                cert.c_tilde,
                cert.c_d,
                cert.cap_d,
                if cert.degenerate { " (degenerate)" } else { "" }
            );
            (status, json!({ "certificate": cert }), s)
        }
        Err(Error::SearchFailed { best, mu }) => (
            ExitStatus::CertificationFailure,
            json!({ "search_failed": { "best": best, "mu": mu } }),
            format!("search failed: best mu = {mu:.3e}\n"),
        ),
        Err(e) => return Err(e),
    };
    write(&cfg.output.dir, "certificate.json", &document(Command::Certify, cfg, result), &mut files)?;
    Ok(Outcome { status, summary, files })
}

/// Trajectory at `t_j = j t_end / samples`.
fn trajectory(p: &ValidatedParams, cfg: &RunConfig, f0: &SpectralField) -> Result<(Vec<f64>, Vec<SpectralField>)> {
    let n = cfg.time.samples.max(1);
    let dt = cfg.time.t_end / n as f64;
    let times: Vec<f64> = (0..=n).map(|j| j as f64 * dt).collect();
    let conv = cfg.output.transport;
    let traj = match cfg.time.integrator {
        Integrator::ExactExponential => Propagator::new(p, f0.order, f0.k_max, dt, conv).trajectory(f0, n),
        method => {
            let mut out = vec![f0.clone()];
            for _ in 0..n {
                let next = evolve(out.last().expect("non-empty"), p, dt, method, conv)?;
                out.push(next);
            }
            out
        }
    };
    Ok((times, traj))
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

struct SimulationRun {
    times: Vec<f64>,
    entropy: Vec<f64>,
    certificate: Option<EntropyCertificate>,
    report: Option<DecayReport>,
    csv: String,
    final_field: SpectralField,
}

fn simulate_inner(p: &ValidatedParams, cfg: &RunConfig) -> Result<SimulationRun> {
    let f0 = initial_field(cfg)?;
    let certificate = if p.theorem_eligible() { Some(obtain_certificate(p, cfg)?) } else { None };
    let ep = certificate
        .as_ref()
        .map(|c| c.eparams)
        .unwrap_or_else(|| EntropyParams::identity().with_scheme(cfg.entropy.weight_scheme));
    let (times, traj) = trajectory(p, cfg, &f0)?;
    let e: Vec<f64> = traj.iter().map(|f| entropy(f, &ep)).collect::<Result<_>>()?;
    let report = certificate.as_ref().map(|c| verify_decay(&times, &e, c.c_tilde, cfg.entropy.decay_tol));
    let bound = report.as_ref().map(|r| r.bound());

    let mut csv = String::from("t,e,e_bound,sigma1,mu1,tau1,sigma2,mu2,tau2\n");
    for (j, (t, f)) in times.iter().zip(&traj).enumerate() {
        let (a, b) = mode_moments(f.mode(0), &cfg.params);
        let eb = bound.as_ref().map(|b| fmt17(b[j])).unwrap_or_else(|| "nan".into());
        let cols = [a.sigma.re, a.mu.re, a.tau.re, b.sigma.re, b.mu.re, b.tau.re].map(fmt17).join(",");
        let _ = writeln!(csv, "{},{},{},{}", fmt17(*t), fmt17(e[j]), eb, cols);
    }
    let final_field = traj.last().expect("non-empty").clone();
    Ok(SimulationRun { times, entropy: e, certificate, report, csv, final_field })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Outcome> {
    let p = validated(cfg)?;
    let run = simulate_inner(&p, cfg)?;
    let mut files = Vec::new();
    write(&cfg.output.dir, "trace.csv", &run.csv, &mut files)?;
    let mut field_text = Vec::new();
    write_field(&run.final_field, &mut field_text)?;
    write(&cfg.output.dir, "field_final.txt", &String::from_utf8(field_text).expect("ascii"), &mut files)?;
    let result = json!({
        "samples": run.times.len(),
        "t_end": cfg.time.t_end,
        "entropy_initial": run.entropy.first(),
        "entropy_final": run.entropy.last(),
        "certificate": run.certificate,
        "bound_satisfied": run.report.as_ref().map(|r| r.bound_satisfied),
        "fitted_rate": run.report.as_ref().and_then(|r| r.fitted_rate),
        "trace_sha256": sha256_hex(run.csv.as_bytes()),
    });
    write(&cfg.output.dir, "simulate.json", &document(Command::Simulate, cfg, result), &mut files)?;
    let summary = format!(
        "{} samples to t = {}, e(0) = {:.6e}, e(end) = {:.6e}\n",
        run.times.len(),
        cfg.time.t_end,
        run.entropy[0],
        run.entropy[run.entropy.len() - 1]
    );
    Ok(Outcome { status: ExitStatus::Ok, summary, files })
}

pub fn cmd_decay_check(cfg: &RunConfig) -> Result<Outcome> {
    let p = validated(cfg)?;
    if !p.theorem_eligible() {
        let (row1, row2) = p.row_sums();
        return Err(Error::NotTheoremEligible { row1, row2 });
    }
    let run = match simulate_inner(&p, cfg) {
        Err(Error::SearchFailed { best, mu }) => {
            let mut files = Vec::new();
            let result = json!({ "search_failed": { "best": best, "mu": mu } });
            write(&cfg.output.dir, "decay_report.json", &document(Command::DecayCheck, cfg, result), &mut files)?;
            return Ok(Outcome { status: ExitStatus::CertificationFailure, summary: format!("search failed: best mu = {mu:.3e}\n"), files });
        }
        other => other?,
    };
    let cert = run.certificate.expect("eligible params carry a certificate");
    let abscissas = spectral_abscissas(&p, cfg.truncation.order, cfg.truncation.k_max, cfg.output.transport)?;
    let report = run.report.expect("eligible params carry a report").with_abscissas(abscissas);
    let mut files = Vec::new();
    write(&cfg.output.dir, "trace.csv", &run.csv, &mut files)?;
    let ok = report.bound_satisfied && !cert.degenerate;
    let summary = format!(
        "C_tilde = {:.6e}, fitted rate = {}, bound {}\n",
        report.c_tilde,
        report.fitted_rate.map(|r| format!("{r:.6e}")).unwrap_or_else(|| "undefined".into()),
        if report.bound_satisfied { "holds" } else { "VIOLATED" }
    );
    let result = json!({ "certificate": cert, "report": report });
    write(&cfg.output.dir, "decay_report.json", &document(Command::DecayCheck, cfg, result), &mut files)?;
    Ok(Outcome { status: if ok { ExitStatus::Ok } else { ExitStatus::CertificationFailure }, summary, files })
}

#[derive(Serialize)]
struct CompareSummary<'a> {
    reports: &'a [CompareReport],
    max_moment_rel_error: f64,
    max_profile_rel_error: f64,
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<Outcome> {
    let p = validated(cfg)?;
    let oc = &cfg.oracle;
    let k_max = oc.modes.iter().copied().max().unwrap_or(0).max(cfg.truncation.k_max);
    let scfg = RunConfig { truncation: crate::config::Truncation { order: oc.order, k_max }, ..cfg.clone() };
    let field = initial_field(&scfg)?;
    let grid = match oc.grid {
        GridChoice::GaussHermite => default_grid(&p, oc.velocity_nodes)?,
        GridChoice::Trapezoid => trapezoid_grid(&p, oc.velocity_nodes)?,
    };
    let reports = oc
        .modes
        .iter()
        .map(|&k| compare(&field, &p, k, oc.t, &grid, cfg.output.transport))
        .collect::<Result<Vec<_>>>()?;
    let max_m = reports.iter().map(|r| r.moment_rel_error).fold(0.0, f64::max);
    let max_p = reports.iter().map(|r| r.profile_rel_error).fold(0.0, f64::max);
    let mut summary = String::new();
    for r in &reports {
        let _ = writeln!(summary, "k = {}: moment error {:.3e}, profile error {:.3e}", r.k, r.moment_rel_error, r.profile_rel_error);
    }
    let result = serde_json::to_value(CompareSummary { reports: &reports, max_moment_rel_error: max_m, max_profile_rel_error: max_p })?;
    let mut files = Vec::new();
    write(&cfg.output.dir, "compare.json", &document(Command::Compare, cfg, result), &mut files)?;
    Ok(Outcome { status: ExitStatus::Ok, summary, files })
}

/// Configures the global rayon pool from [`THREADS_ENV`]; ignored when unset or invalid.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(ExitStatus::for_error(&Error::InvalidParams(vec![])).code(), 1);
        assert_eq!(ExitStatus::for_error(&Error::Config("x".into())).code(), 2);
        let best = EntropyParams::identity();
        assert_eq!(ExitStatus::for_error(&Error::SearchFailed { best, mu: 0.0 }).code(), 3);
    }

    #[test]
    fn document_hash_covers_body() {
        let cfg = RunConfig::default();
        let a = document(Command::Validate, &cfg, json!({"x": 1}));
        let b = document(Command::Validate, &cfg, json!({"x": 2}));
        let ha: Value = serde_json::from_str(&a).unwrap();
        let hb: Value = serde_json::from_str(&b).unwrap();
        assert_ne!(ha["content_hash"], hb["content_hash"]);
        assert_eq!(a, document(Command::Validate, &cfg, json!({"x": 1})));
    }
}
