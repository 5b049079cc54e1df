//! One-dimensional scans in temperature or field difference.

use std::str::FromStr;

use spinpair_core::measures::{concurrence_wootters, eof_from_concurrence, negativity, rel_entropy_coherence};
use spinpair_core::thermal::thermal_state_from_spectrum;
use spinpair_core::{build_hamiltonian, SpinPairParams64};

use crate::emit::fmt_value;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    Temperature,
    FieldDifference,
}

impl ScanKind {
    pub fn variable(self) -> &'static str {
        match self {
            ScanKind::Temperature => "kt",
            ScanKind::FieldDifference => "dh",
        }
    }
}

impl FromStr for ScanKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "temperature" | "t" | "kt" => Ok(ScanKind::Temperature),
            "field-difference" | "field_difference" | "dh" => Ok(ScanKind::FieldDifference),
            other => Err(format!("unknown scan kind `{other}` (expected temperature or field-difference)")),
        }
    }
}

/// Fixed parameters of a scan. A temperature scan holds `h1`, `h2`; a
/// field-difference scan holds `kt` and the average field `h_avg`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub kind: ScanKind,
    pub two_s: u32,
    pub j: f64,
    pub jz: f64,
    pub d: f64,
    pub h1: f64,
    pub h2: f64,
    pub h_avg: f64,
    pub kt: f64,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ScanTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self, cfg: &ScanConfig) -> String {
        let mut out = String::new();
        for (k, v) in cfg.echo() {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_value(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.two_s == 0 {
            return Err(CliError::config("two_s", "must be at least 1"));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::config("range", "endpoints must be finite"));
        }
        if self.steps == 0 {
            return Err(CliError::config("steps", "must be at least 1"));
        }
        match self.kind {
            ScanKind::Temperature if self.from.min(self.to) < 0.0 => {
                Err(CliError::config("range", "temperatures must be non-negative"))
            }
            ScanKind::FieldDifference if !(self.kt >= 0.0) => Err(CliError::config("kt", "must be non-negative")),
            _ => Ok(()),
        }
    }

    /// Scan points; a zero-length range yields a single point.
    pub fn points(&self) -> Vec<f64> {
        if self.from == self.to || self.steps == 1 {
            return vec![self.from];
        }
        let n = self.steps;
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn echo(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("kind", self.kind.variable().to_string()),
            ("two_s", self.two_s.to_string()),
            ("j", format!("{:?}", self.j)),
            ("jz", format!("{:?}", self.jz)),
            ("d", format!("{:?}", self.d)),
        ];
        match self.kind {
            ScanKind::Temperature => {
                v.push(("h1", format!("{:?}", self.h1)));
                v.push(("h2", format!("{:?}", self.h2)));
            }
            ScanKind::FieldDifference => {
                v.push(("h_avg", format!("{:?}", self.h_avg)));
                v.push(("kt", format!("{:?}", self.kt)));
            }
        }
        v.push(("from", format!("{:?}", self.from)));
        v.push(("to", format!("{:?}", self.to)));
        v.push(("steps", self.steps.to_string()));
        v
    }
}

/// Columns: the scan variable, concurrence and EoF (two qubits) or negativity,
/// and coherence.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanTable> {
    cfg.validate()?;
    let half_spin = cfg.two_s == 1;
    let mut header = vec![cfg.kind.variable().to_string()];
    if half_spin {
        header.extend(["concurrence".into(), "eof".into()]);
    } else {
        header.push("negativity".into());
    }
    header.push("coherence".into());
    let base = SpinPairParams64::new(cfg.two_s, cfg.j, cfg.jz, 0.0, 0.0).with_dm(cfg.d);
    let numeric = |e: spinpair_core::MeasureError| CliError::Numeric(e.to_string());
    let rows = cfg
        .points()
        .into_iter()
        .map(|x| {
            let (p, t) = match cfg.kind {
                ScanKind::Temperature => (base.with_fields(cfg.h1, cfg.h2), x),
                ScanKind::FieldDifference => (base.with_fields(cfg.h_avg + 0.5 * x, cfg.h_avg - 0.5 * x), cfg.kt),
            };
            let reduced = p.reduced().map_err(|e| CliError::config("j", e.to_string()))?;
            let spec = build_hamiltonian(&reduced).spectrum();
            let rho = thermal_state_from_spectrum(&spec, t).map_err(|e| CliError::config("kt", e.to_string()))?;
            let mut row = vec![x];
            if half_spin {
                let c = concurrence_wootters(&rho).map_err(numeric)?;
                row.push(c);
                row.push(eof_from_concurrence(c).map_err(numeric)?);
            } else {
                row.push(negativity(&rho, cfg.two_s).map_err(numeric)?);
            }
            row.push(rel_entropy_coherence(&rho).map_err(numeric)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable { header, rows })
}
