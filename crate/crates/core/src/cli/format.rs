//! Deterministic text output: `%.12g` numbers, CSV series, atomic writes.

use std::io::Write;
use std::path::Path;

use crate::dynamics::TimeSeries;
use crate::error::Result;

/// Significant digits of every emitted number.
pub const SIG_DIGITS: usize = 12;

/// C-style `%.{digits}g`.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn g12(x: f64) -> String {
    fmt_g(x, SIG_DIGITS)
}

/// `x` rounded to 12 significant digits, for JSON output.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        g12(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

pub fn series_csv(series: &TimeSeries) -> String {
    let mut out = TimeSeries::HEADER.join(",");
    out.push('\n');
    for r in &series.rows {
        let fields = [
            r.t,
            r.w,
            r.p,
            r.trace.re,
            r.trace.im,
            r.atom.rho11.re,
            r.atom.rho00.re,
            r.atom.rho01.re,
            r.atom.rho01.im,
        ];
        let line: Vec<String> = fields.iter().map(|&x| g12(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
