//! File output. Every file is written to a temporary sibling and renamed into
//! place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::{Format, Quantity};
use crate::error::{CliError, Result};
use crate::sweep::PhaseGrid;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.flush().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn to_csv(grid: &PhaseGrid) -> String {
    let mut out = String::new();
    for (k, v) in grid.config.echo() {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out.push_str(&format!("# engine_version = {ENGINE_VERSION}\n"));
    let names: Vec<&str> = grid.values.iter().map(|(q, _)| q.name()).collect();
    out.push_str(&format!("h1,h2,{}\n", names.join(",")));
    let n2 = grid.n2();
    for (i, &h1) in grid.h1.iter().enumerate() {
        for (j, &h2) in grid.h2.iter().enumerate() {
            out.push_str(&fmt_value(h1));
            out.push(',');
            out.push_str(&fmt_value(h2));
            for (_, v) in &grid.values {
                out.push(',');
                out.push_str(&fmt_value(v[i * n2 + j]));
            }
            out.push('\n');
        }
    }
    out
}

/// Parsed CSV body: column names and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Reads CSV written by this crate; `#` lines are skipped.
pub fn parse_csv(text: &str) -> std::result::Result<CsvTable, String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or("missing header")?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let rows = lines
        .enumerate()
        .map(|(k, line)| {
            let row: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| format!("row {k}: {e}")))
                .collect::<std::result::Result<_, _>>()?;
            if row.len() != header.len() {
                return Err(format!("row {k}: expected {} columns, got {}", header.len(), row.len()));
            }
            Ok(row)
        })
        .collect::<std::result::Result<_, String>>()?;
    Ok(CsvTable { header, rows })
}

pub fn to_json(grid: &PhaseGrid) -> Value {
    let mut values = Map::new();
    for (q, v) in &grid.values {
        let rows: Vec<&[f64]> = v.chunks(grid.n2()).collect();
        values.insert(q.name().to_string(), json!(rows));
    }
    json!({
        "config": grid.config,
        "axes": { "h1": grid.h1, "h2": grid.h2 },
        "values": values,
        "metadata": { "engine_version": ENGINE_VERSION, "layout": "values[q][i][j] at (h1[i], h2[j])" },
    })
}

/// Per-quantity 8-bit normalization. An all-equal map has range zero and
/// every pixel maps to 0.
pub fn normalize(v: &[f64]) -> (f64, f64, Vec<u8>) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let px = v
        .iter()
        .map(|&x| if span > 0.0 { ((x - lo) / span * 255.0).round() as u8 } else { 0 })
        .collect();
    (lo, hi, px)
}

/// Binary PGM with `h1` along columns and `h2` increasing upwards.
pub fn to_pgm(grid: &PhaseGrid, q: Quantity) -> (Vec<u8>, String) {
    let v = grid.get(q).expect("quantity present");
    let (n1, n2) = (grid.n1(), grid.n2());
    let (lo, hi, px) = normalize(v);
    let mut bytes = format!("P5\n{n1} {n2}\n255\n").into_bytes();
    for row in (0..n2).rev() {
        for col in 0..n1 {
            bytes.push(px[col * n2 + row]);
        }
    }
    let mut sidecar = String::new();
    sidecar.push_str(&format!("quantity = {q}\n"));
    sidecar.push_str(&format!("min = {}\n", fmt_value(lo)));
    sidecar.push_str(&format!("max = {}\n", fmt_value(hi)));
    sidecar.push_str("rule = pixel = round(255 (x - min) / (max - min)); all-equal maps to 0\n");
    sidecar.push_str("layout = columns h1 ascending, rows h2 descending\n");
    for (k, val) in grid.config.echo() {
        sidecar.push_str(&format!("{k} = {val}\n"));
    }
    (bytes, sidecar)
}

/// `stem_<quantity>.pgm` next to `out`.
pub fn pgm_paths(out: &Path, q: Quantity) -> (PathBuf, PathBuf) {
    let stem = out.with_extension("");
    let base = stem.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let pgm = stem.with_file_name(format!("{base}_{q}.pgm"));
    let txt = stem.with_file_name(format!("{base}_{q}.txt"));
    (pgm, txt)
}

/// Writes `grid` in `format`; returns the paths written.
pub fn emit(grid: &PhaseGrid, format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    match format {
        Format::Csv => {
            write_atomic(out, to_csv(grid).as_bytes())?;
            Ok(vec![out.to_path_buf()])
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&to_json(grid)).expect("finite values serialize");
            text.push('\n');
            write_atomic(out, text.as_bytes())?;
            Ok(vec![out.to_path_buf()])
        }
        Format::Pgm => {
            let mut written = Vec::new();
            for (q, _) in &grid.values {
                let (bytes, sidecar) = to_pgm(grid, *q);
                let (pgm, txt) = pgm_paths(out, *q);
                write_atomic(&pgm, &bytes)?;
                write_atomic(&txt, sidecar.as_bytes())?;
                written.push(pgm);
                written.push(txt);
            }
            Ok(written)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_value(0.1), "1.0000000000000001e-1");
        for x in [std::f64::consts::PI, 1e-300, -2.5e17, 0.0] {
            assert_eq!(fmt_value(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn normalization_rules() {
        assert_eq!(normalize(&[0.0; 4]).2, vec![0; 4]);
        assert_eq!(normalize(&[1.0, 2.0, 3.0]).2, vec![0, 128, 255]);
    }

    #[test]
    fn pgm_paths_strip_extension() {
        let (pgm, txt) = pgm_paths(Path::new("out/fig9.pgm"), Quantity::Negativity);
        assert_eq!(pgm, Path::new("out/fig9_negativity.pgm"));
        assert_eq!(txt, Path::new("out/fig9_negativity.txt"));
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        assert!(parse_csv("a,b\n1,2\n3\n").is_err());
        assert_eq!(parse_csv("# c\na,b\n1,2\n").unwrap().rows, vec![vec![1.0, 2.0]]);
    }
}
