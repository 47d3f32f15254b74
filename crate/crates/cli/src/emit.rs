//! CSV emission and re-parsing for spectra and summary tables.
//!
//! Output is deterministic byte for byte: values are written with
//! Rust's shortest round-trip float formatting, rows in ascending
//! order, newline-terminated.

use anyhow::{bail, Context, Result};
use std::fs;
use std::path::Path;

use ringwalk_core::Spectrum;

/// Writes a spectrum as `l,probability` rows in ascending l.
pub fn emit_spectrum_csv(spec: &Spectrum, path: &Path) -> Result<()> {
    let mut out = String::from("l,probability\n");
    for (l, w) in spec.iter() {
        out.push_str(&format!("{l},{w}\n"));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Reads back a file produced by [`emit_spectrum_csv`].
pub fn read_spectrum_csv(path: &Path) -> Result<Spectrum> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("l,probability") => {}
        other => bail!("{}: bad header {other:?}", path.display()),
    }
    let mut lmin = None;
    let mut weights = Vec::new();
    for (i, line) in lines.enumerate() {
        let (l, w) = line
            .split_once(',')
            .with_context(|| format!("{}: malformed row {}", path.display(), i + 2))?;
        let l: i64 = l.parse()?;
        let w: f64 = w.parse()?;
        match lmin {
            None => lmin = Some(l),
            Some(start) => {
                if l != start + weights.len() as i64 {
                    bail!("{}: non-contiguous l at row {}", path.display(), i + 2);
                }
            }
        }
        weights.push(w);
    }
    Spectrum::from_weights(lmin.context("empty spectrum file")?, weights)
        .map_err(anyhow::Error::from)
}

/// Writes a generic CSV table with the given header and rows.
pub fn emit_table_csv(header: &str, rows: &[Vec<String>], path: &Path) -> Result<()> {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
