//! Text and image formats: matrices, states, circuit configs, grids and
//! report tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex;

use crate::chm::builtin;
use crate::entanglement::EntropyProfile;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::statevector::{Boundary, CircuitSpec, StateVector};

fn fmt_real<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn fmt_complex<T: Real>(z: Complex<T>) -> String {
    let im = z.im.as_f64();
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{:.16e}i", fmt_real(z.re), sign, im.abs())
}

fn parse_real<T: Real>(s: &str) -> Result<T> {
    let x: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
    T::from_f64(x).ok_or_else(|| Error::Parse(format!("number {s:?} out of range")))
}

/// Parses `re+imi`, `re-imi`, a bare real, or a bare imaginary `imi`.
pub fn parse_complex<T: Real>(s: &str) -> Result<Complex<T>> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(parse_real(s)?, T::zero()));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex::new(parse_real(&body[..k])?, parse_real(&body[k..])?)),
        None => Ok(Complex::new(T::zero(), parse_real(body)?)),
    }
}

/// `dim q` header, then `q` rows of `re+imi` entries.
pub fn format_matrix<T: Real>(m: &ComplexMatrix<T>) -> String {
    let mut out = format!("dim {}\n", m.dim());
    for r in 0..m.dim() {
        let row: Vec<String> = m.row(r).iter().map(|&z| fmt_complex(z)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

pub fn parse_matrix<T: Real>(text: &str) -> Result<ComplexMatrix<T>> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let q: usize = header
        .strip_prefix("dim")
        .unwrap_or(header)
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad matrix header {header:?}")))?;
    let mut data = Vec::with_capacity(q * q);
    for (r, line) in lines.enumerate() {
        let row = line.split_whitespace().map(parse_complex).collect::<Result<Vec<_>>>()?;
        if row.len() != q {
            return Err(Error::Parse(format!("row {} has {} entries, expected {q}", r + 1, row.len())));
        }
        data.extend(row);
    }
    if data.len() != q * q {
        return Err(Error::Parse(format!("expected {q} rows, found {}", data.len() / q.max(1))));
    }
    ComplexMatrix::new(q, data)
}

/// `q N` header, then one `re im` line per amplitude.
pub fn format_state<T: Real>(s: &StateVector<T>) -> String {
    let mut out = format!("{} {}\n", s.q(), s.n());
    for z in s.amplitudes() {
        let _ = writeln!(out, "{} {}", fmt_real(z.re), fmt_real(z.im));
    }
    out
}

pub fn parse_state<T: Real>(text: &str) -> Result<StateVector<T>> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty state file".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad state header {header:?}"))))
        .collect::<Result<_>>()?;
    let [q, n] = nums[..] else {
        return Err(Error::Parse(format!("state header needs \"q N\", got {header:?}")));
    };
    let amps = lines
        .map(|l| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts[..] {
                [re, im] => Ok(Complex::new(parse_real(re)?, parse_real(im)?)),
                _ => Err(Error::Parse(format!("amplitude line {l:?} needs \"re im\""))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    StateVector::new(q, n, amps)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_matrix<T: Real>(path: &Path) -> Result<ComplexMatrix<T>> {
    parse_matrix(&read_text(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_matrix<T: Real>(path: &Path, m: &ComplexMatrix<T>) -> Result<()> {
    write_bytes(path, format_matrix(m).as_bytes())
}

/// `builtin:<name>` or a matrix file path, relative paths resolved against `base`.
pub fn resolve_matrix<T: Real>(value: &str, base: &Path) -> Result<ComplexMatrix<T>> {
    match value.trim().strip_prefix("builtin:") {
        Some(name) => builtin(name),
        None => {
            let p = PathBuf::from(value.trim());
            read_matrix(&if p.is_absolute() { p } else { base.join(p) })
        }
    }
}

/// One `key=value` per line with `#` comments; keys outside `allowed` and
/// repeated keys are rejected.
pub fn parse_key_values(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for line in content_lines(text) {
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {line:?}")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(Error::Parse(format!("unknown key {k:?} (allowed: {})", allowed.join(", "))));
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("key {k:?} given twice")));
        }
    }
    Ok(out)
}

pub fn parse_boundary(s: &str) -> Result<Boundary> {
    let s = s.trim();
    match s {
        "periodic" => Ok(Boundary::Periodic),
        "open" => Ok(Boundary::Open),
        _ => {
            let site = s
                .strip_prefix("bond_removed:")
                .or_else(|| s.strip_prefix("bond_removed(").and_then(|r| r.strip_suffix(')')))
                .ok_or_else(|| Error::Parse(format!("unknown boundary {s:?}")))?;
            Ok(Boundary::BondRemoved(site.trim().parse().map_err(|_| Error::Parse(format!("bad bond index in {s:?}")))?))
        }
    }
}

/// Circuit plus step count read from a config file.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitConfig<T> {
    pub spec: CircuitSpec<T>,
    pub steps: usize,
}

pub const CIRCUIT_KEYS: [&str; 6] = ["q", "N", "T", "boundary", "u_H", "u_V"];

pub fn parse_circuit_config<T: Real>(text: &str, base: &Path) -> Result<CircuitConfig<T>> {
    let kv = parse_key_values(text, &CIRCUIT_KEYS)?;
    let get = |k: &str| kv.get(k).ok_or_else(|| Error::Parse(format!("missing key {k:?}")));
    let num = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| Error::Parse(format!("bad value for {k:?}"))) };
    let q = num("q")?;
    let n = num("N")?;
    let steps = kv.get("T").map(|_| num("T")).transpose()?.unwrap_or(1);
    let boundary = kv.get("boundary").map(|b| parse_boundary(b)).transpose()?.unwrap_or(Boundary::Periodic);
    let u_h = resolve_matrix(get("u_H")?, base)?;
    let u_v = resolve_matrix(get("u_V")?, base)?;
    if u_h.dim() != q {
        return Err(Error::Parse(format!("q = {q} but u_H is {0}×{0}", u_h.dim())));
    }
    Ok(CircuitConfig { spec: CircuitSpec::new(n, u_h, u_v, boundary)?, steps })
}

/// One CSV row per time step.
pub fn grid_csv(rows: &[Vec<u32>]) -> String {
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().map(u32::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Binary 8-bit PGM with gray level `⌊255·v/(q−1)⌋`.
pub fn grid_pgm(rows: &[Vec<u32>], q: u32) -> Result<Vec<u8>> {
    if q < 2 {
        return Err(Error::InvalidDimension(format!("q must be at least 2, got {q}")));
    }
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Shape("ragged grid".into()));
    }
    let mut out = format!("P5\n{} {}\n255\n", width, rows.len()).into_bytes();
    for r in rows {
        for &v in r {
            if v >= q {
                return Err(Error::Shape(format!("grid value {v} outside [0, {q})")));
            }
            out.push((255 * v as u64 / (q as u64 - 1)) as u8);
        }
    }
    Ok(out)
}

pub fn profile_csv<T: Real>(profile: &EntropyProfile<T>) -> String {
    let mut out = String::from("t,entropy\n");
    for (t, v) in profile.values.iter().enumerate() {
        // roundoff below 1e-12 prints as an exact zero
        let v = if v.as_f64().abs() < 1e-12 { 0.0 } else { v.as_f64() };
        let _ = writeln!(out, "{},{}", t + 1, v);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct YbeRow {
    pub q: usize,
    pub seed: u64,
    /// `None` when the Sinkhorn search did not converge.
    pub residual: Option<f64>,
    pub pass: bool,
}

pub fn ybe_csv(rows: &[YbeRow]) -> String {
    let mut out = String::from("q,seed,residual,pass\n");
    for r in rows {
        let res = r.residual.map_or_else(|| "nan".to_string(), |x| format!("{x:.6e}"));
        let _ = writeln!(out, "{},{},{},{}", r.q, r.seed, res, r.pass);
    }
    out
}
