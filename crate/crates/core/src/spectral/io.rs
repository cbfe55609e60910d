//! Columnar text format for [`SpectralField`].
//!
//! ```text
//! # bgkmix spectral field v1
//! M 8
//! K 4
//! L 6.2831853071795862e0
//! params_hash 3f1c...
//! k re(h1_0) im(h1_0) ... re(h1_M) im(h1_M) re(h2_0) im(h2_0) ... re(h2_M) im(h2_M)
//! 0 0.0000000000000000e0 ...
//! ```
//!
//! One row per mode `k = 0..=K`, numbers in 17-significant-digit scientific
//! notation, single spaces, `\n` line endings.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::mixture::MixtureParams;
use crate::spectral::{ModeState, SpectralField};
use crate::C64;

const MAGIC: &str = "# bgkmix spectral field v1";

pub fn write_field<W: Write>(field: &SpectralField, mut w: W) -> Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "M {}", field.order)?;
    writeln!(w, "K {}", field.k_max)?;
    writeln!(w, "L {:.16e}", field.params.l)?;
    writeln!(w, "params_hash {}", field.params.content_hash())?;
    let mut head = String::from("k");
    for s in 1..=2 {
        for m in 0..=field.order {
            head.push_str(&format!(" re(h{s}_{m}) im(h{s}_{m})"));
        }
    }
    writeln!(w, "{head}")?;
    for mode in &field.modes {
        let mut line = mode.k.to_string();
        for z in mode.hhat1.iter().chain(mode.hhat2.iter()) {
            line.push_str(&format!(" {:.16e} {:.16e}", z.re, z.im));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

fn header_value<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    line.and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.strip_prefix(' '))
        .ok_or_else(|| Error::FieldFormat(format!("expected `{key} <value>` header line")))
}

/// Reads a field written by [`write_field`]; the stored parameter hash must
/// match `params`.
pub fn read_field<R: BufRead>(params: &MixtureParams, r: R) -> Result<SpectralField> {
    let lines: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    let mut it = lines.iter().map(String::as_str);
    if it.next() != Some(MAGIC) {
        return Err(Error::FieldFormat("missing magic line".into()));
    }
    let parse_usize = |s: &str| s.parse::<usize>().map_err(|e| Error::FieldFormat(e.to_string()));
    let order = parse_usize(header_value(it.next(), "M")?)?;
    let k_max = parse_usize(header_value(it.next(), "K")?)?;
    let l: f64 = header_value(it.next(), "L")?.parse().map_err(|e: std::num::ParseFloatError| Error::FieldFormat(e.to_string()))?;
    let hash = header_value(it.next(), "params_hash")?;
    if hash != params.content_hash() {
        return Err(Error::FieldFormat("params_hash does not match the supplied parameters".into()));
    }
    if l != params.l {
        return Err(Error::FieldFormat(format!("L = {l} differs from params L = {}", params.l)));
    }
    it.next().ok_or_else(|| Error::FieldFormat("missing column header".into()))?;
    let mut field = SpectralField::zeros(params, order, k_max);
    let width = 2 * (order + 1);
    for k in 0..=k_max {
        let line = it.next().ok_or_else(|| Error::FieldFormat(format!("missing row for k = {k}")))?;
        let mut tok = line.split(' ');
        let kk = parse_usize(tok.next().unwrap_or(""))?;
        if kk != k {
            return Err(Error::FieldFormat(format!("row {k} labelled k = {kk}")));
        }
        let vals: Vec<f64> = tok
            .map(|t| t.parse::<f64>().map_err(|e| Error::FieldFormat(format!("k = {k}: {e}"))))
            .collect::<Result<_>>()?;
        if vals.len() != 2 * width {
            return Err(Error::DimensionMismatch { expected: 2 * width, got: vals.len() });
        }
        let z: Vec<C64> = vals.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        let n = order + 1;
        let mode: &mut ModeState = field.mode_mut(k);
        for m in 0..n {
            mode.hhat1[m] = z[m];
            mode.hhat2[m] = z[n + m];
        }
    }
    if it.any(|l| !l.trim().is_empty()) {
        return Err(Error::FieldFormat("trailing rows".into()));
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let p = MixtureParams { m2: 2.0, ..MixtureParams::symmetric() };
        let mut f = SpectralField::zeros(&p, 3, 2);
        f.modes[1].hhat1[2] = C64::new(0.1, -1.0 / 3.0);
        f.modes[2].hhat2[3] = C64::new(std::f64::consts::PI, 1e-300);
        let mut buf = Vec::new();
        write_field(&f, &mut buf).unwrap();
        let back = read_field(&p, buf.as_slice()).unwrap();
        assert_eq!(back, f);
        let other = MixtureParams { m2: 2.5, ..p };
        assert!(matches!(read_field(&other, buf.as_slice()), Err(Error::FieldFormat(_))));
    }
}
