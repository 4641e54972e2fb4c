//! Text dumps of spectral fields and CSV tables of named norms.

use std::io::{self, BufRead, Write};

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::{Grid, ModeGrid};
use crate::{Error, Result};

/// Writes `# mdwave-field d=.. N=.. padding=..` followed by `k... re im` lines for
/// every retained mode (FFT slot order).
pub fn write_field(out: &mut impl Write, field: &SpectralField) -> io::Result<()> {
    let g = field.grid();
    writeln!(out, "# mdwave-field d={} N={} padding={}", g.dim(), g.cutoff(), g.padding())?;
    for (s, z) in field.coeffs().iter().enumerate() {
        if !g.is_active(s) {
            continue;
        }
        let k = g.wave(s);
        let ks: Vec<String> = k.iter().take(g.dim()).map(|c| c.to_string()).collect();
        writeln!(out, "{} {:e} {:e}", ks.join(" "), z.re, z.im)?;
    }
    Ok(())
}

/// Reads a dump produced by [`write_field`]; returns the field on a freshly built grid.
pub fn read_field(input: impl BufRead) -> Result<SpectralField> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty field dump".into()))?
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut d = 0;
    let mut n = 0;
    let mut p = 0;
    for tok in header.trim_start_matches('#').split_whitespace().skip(1) {
        let (key, val) = tok.split_once('=').ok_or_else(|| Error::Config(format!("bad header token {tok}")))?;
        let val: usize = val.parse().map_err(|_| Error::Config(format!("bad header value {tok}")))?;
        match key {
            "d" => d = val,
            "N" => n = val,
            "padding" => p = val,
            _ => return Err(Error::Config(format!("unknown header key {key}"))),
        }
    }
    let grid: Grid = ModeGrid::new(d, n, p)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.slots()];
    for line in lines {
        let line = line.map_err(|e| Error::Config(e.to_string()))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != d + 2 {
            return Err(Error::Config(format!("malformed coefficient line: {line}")));
        }
        let mut k = [0i64; 3];
        for (i, t) in toks.iter().take(d).enumerate() {
            k[i] = t.parse().map_err(|_| Error::Config(format!("bad wavenumber in {line}")))?;
        }
        let re: f64 = toks[d].parse().map_err(|_| Error::Config(format!("bad value in {line}")))?;
        let im: f64 = toks[d + 1].parse().map_err(|_| Error::Config(format!("bad value in {line}")))?;
        let s = grid.slot_of(k).ok_or_else(|| Error::Config(format!("wavevector {k:?} outside grid")))?;
        coeffs[s] = Complex64::new(re, im);
    }
    SpectralField::from_coeffs(&grid, coeffs)
}

/// CSV with a `t` column followed by named columns.
pub fn write_norm_csv(out: &mut impl Write, names: &[&str], rows: &[(f64, Vec<f64>)]) -> io::Result<()> {
    writeln!(out, "t,{}", names.join(","))?;
    for (t, vals) in rows {
        let cells: Vec<String> = vals.iter().map(|v| format!("{v:e}")).collect();
        writeln!(out, "{t:e},{}", cells.join(","))?;
    }
    Ok(())
}
