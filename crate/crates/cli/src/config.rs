//! Sweep configuration: flat `key = value` files merged with command-line
//! overrides, then resolved against defaults and validated.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use spinpair_core::SpinPairParams64;

use crate::error::{CliError, Result};

pub const WORKERS_ENV: &str = "SPINPAIR_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Negativity,
    Concurrence,
    Eof,
    Coherence,
    GsMagnetization,
    GsEnergy,
    Gap,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Negativity,
        Quantity::Concurrence,
        Quantity::Eof,
        Quantity::Coherence,
        Quantity::GsMagnetization,
        Quantity::GsEnergy,
        Quantity::Gap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Negativity => "negativity",
            Quantity::Concurrence => "concurrence",
            Quantity::Eof => "eof",
            Quantity::Coherence => "coherence",
            Quantity::GsMagnetization => "gs_magnetization",
            Quantity::GsEnergy => "gs_energy",
            Quantity::Gap => "gap",
        }
    }

    /// Only defined for two qubits.
    pub fn requires_half_spin(self) -> bool {
        matches!(self, Quantity::Concurrence | Quantity::Eof)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == key)
            .ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Pgm,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Pgm => "pgm",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "pgm" => Ok(Format::Pgm),
            other => Err(format!("unknown format `{other}` (expected csv, json or pgm)")),
        }
    }
}

/// `min:max:n` axis description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected min:max:n, got `{s}`"));
        }
        let min = parts[0].parse::<f64>().map_err(|e| format!("{}: {e}", parts[0]))?;
        let max = parts[1].parse::<f64>().map_err(|e| format!("{}: {e}", parts[1]))?;
        let n = parts[2].parse::<usize>().map_err(|e| format!("{}: {e}", parts[2]))?;
        Ok(AxisSpec { min, max, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub h1_min: f64,
    pub h1_max: f64,
    pub h2_min: f64,
    pub h2_max: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Partially specified sweep; later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub two_s: Option<u32>,
    pub j: Option<f64>,
    pub jz: Option<f64>,
    pub d: Option<f64>,
    pub kt: Option<f64>,
    pub h1_min: Option<f64>,
    pub h1_max: Option<f64>,
    pub h2_min: Option<f64>,
    pub h2_max: Option<f64>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub quantities: Option<Vec<Quantity>>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn parse_field<V: FromStr>(field: &str, value: &str) -> Result<V>
where
    V::Err: fmt::Display,
{
    value
        .trim()
        .parse::<V>()
        .map_err(|e| CliError::config(field, format!("cannot parse `{}`: {e}", value.trim())))
}

pub fn parse_quantities(value: &str) -> Result<Vec<Quantity>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Quantity>().map_err(|e| CliError::config("quantities", e)))
        .collect()
}

impl ConfigLayer {
    /// Sets one key; `-` and `_` are interchangeable in key names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        match key.as_str() {
            "two_s" => self.two_s = Some(parse_field(&key, value)?),
            "j" => self.j = Some(parse_field(&key, value)?),
            "jz" => self.jz = Some(parse_field(&key, value)?),
            "d" => self.d = Some(parse_field(&key, value)?),
            "kt" | "t" => self.kt = Some(parse_field(&key, value)?),
            "h1_min" => self.h1_min = Some(parse_field(&key, value)?),
            "h1_max" => self.h1_max = Some(parse_field(&key, value)?),
            "h2_min" => self.h2_min = Some(parse_field(&key, value)?),
            "h2_max" => self.h2_max = Some(parse_field(&key, value)?),
            "n1" => self.n1 = Some(parse_field(&key, value)?),
            "n2" => self.n2 = Some(parse_field(&key, value)?),
            "grid" => self.set_grid(parse_field(&key, value)?),
            "h1" => self.set_h1(parse_field(&key, value)?),
            "h2" => self.set_h2(parse_field(&key, value)?),
            "quantities" => self.quantities = Some(parse_quantities(value)?),
            "workers" => self.workers = Some(parse_field(&key, value)?),
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "format" => self.format = Some(parse_field(&key, value)?),
            _ => return Err(CliError::config(key.clone(), "unknown key")),
        }
        Ok(())
    }

    pub fn set_h1(&mut self, a: AxisSpec) {
        self.h1_min = Some(a.min);
        self.h1_max = Some(a.max);
        self.n1 = Some(a.n);
    }

    pub fn set_h2(&mut self, a: AxisSpec) {
        self.h2_min = Some(a.min);
        self.h2_max = Some(a.max);
        self.n2 = Some(a.n);
    }

    /// Same axis for both fields.
    pub fn set_grid(&mut self, a: AxisSpec) {
        self.set_h1(a);
        self.set_h2(a);
    }

    /// Parses `key = value` lines. `#` and `;` start comments; `[section]`
    /// headers are ignored.
    pub fn parse_ini(text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {}", lineno + 1), format!("expected key = value, got `{line}`")))?;
            layer.set(key, value)?;
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse_ini(&text)
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            two_s: over.two_s.or(self.two_s),
            j: over.j.or(self.j),
            jz: over.jz.or(self.jz),
            d: over.d.or(self.d),
            kt: over.kt.or(self.kt),
            h1_min: over.h1_min.or(self.h1_min),
            h1_max: over.h1_max.or(self.h1_max),
            h2_min: over.h2_min.or(self.h2_min),
            h2_max: over.h2_max.or(self.h2_max),
            n1: over.n1.or(self.n1),
            n2: over.n2.or(self.n2),
            quantities: over.quantities.or(self.quantities),
            workers: over.workers.or(self.workers),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
        }
    }

    /// Fills defaults and validates. The grid defaults to 201 × 201 over
    /// `±3 s max(J, |Jz|)`.
    pub fn resolve(self) -> Result<SweepConfig> {
        let two_s = self.two_s.unwrap_or(1);
        let j = self.j.unwrap_or(1.0);
        let jz = self.jz.unwrap_or(1.0);
        let d = self.d.unwrap_or(0.0);
        let kt = self.kt.unwrap_or(0.0);
        let extent = 1.5 * two_s as f64 * j.hypot(d).max(jz.abs());
        let grid = GridSpec {
            h1_min: self.h1_min.unwrap_or(-extent),
            h1_max: self.h1_max.unwrap_or(extent),
            h2_min: self.h2_min.unwrap_or(-extent),
            h2_max: self.h2_max.unwrap_or(extent),
            n1: self.n1.unwrap_or(201),
            n2: self.n2.unwrap_or(201),
        };
        let format = self.format.unwrap_or(Format::Csv);
        let cfg = SweepConfig {
            two_s,
            j,
            jz,
            d,
            kt,
            grid,
            quantities: self.quantities.unwrap_or_else(|| vec![Quantity::Negativity]),
            workers: self.workers.unwrap_or_else(default_workers),
            output: self
                .output
                .unwrap_or_else(|| PathBuf::from(format!("sweep.{}", format.extension()))),
            format,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Worker count from the environment, if set.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => parse_field(WORKERS_ENV, &v).map(Some),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::config(WORKERS_ENV, e.to_string())),
    }
}

/// Fully resolved sweep. `workers` and `output` do not affect cell values and
/// are left out of the echo written into output files.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub two_s: u32,
    pub j: f64,
    pub jz: f64,
    pub d: f64,
    pub kt: f64,
    pub grid: GridSpec,
    pub quantities: Vec<Quantity>,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub output: PathBuf,
    pub format: Format,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.two_s == 0 {
            return Err(CliError::config("two_s", "must be at least 1"));
        }
        for (name, v) in [("j", self.j), ("jz", self.jz), ("d", self.d), ("kt", self.kt)] {
            if !v.is_finite() {
                return Err(CliError::config(name, "must be finite"));
            }
        }
        if self.kt < 0.0 {
            return Err(CliError::config("kt", "temperature must be non-negative"));
        }
        if self.j == 0.0 && self.d == 0.0 {
            return Err(CliError::config("j", "J and D cannot both vanish"));
        }
        let g = &self.grid;
        if g.n1 < 2 || g.n2 < 2 {
            return Err(CliError::config("grid", format!("need n1, n2 >= 2 (got {} x {})", g.n1, g.n2)));
        }
        for (name, lo, hi) in [("h1", g.h1_min, g.h1_max), ("h2", g.h2_min, g.h2_max)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::config(name, format!("need finite min < max (got {lo}:{hi})")));
            }
        }
        if self.quantities.is_empty() {
            return Err(CliError::config("quantities", "at least one quantity is required"));
        }
        if let Some(q) = self.quantities.iter().find(|q| q.requires_half_spin()) {
            if self.two_s != 1 {
                return Err(CliError::config("quantities", format!("{q} requires two_s = 1")));
            }
        }
        for (k, q) in self.quantities.iter().enumerate() {
            if self.quantities[..k].contains(q) {
                return Err(CliError::config("quantities", format!("{q} listed twice")));
            }
        }
        if self.workers == 0 {
            return Err(CliError::config("workers", "must be at least 1"));
        }
        Ok(())
    }

    /// Couplings and spin at zero field; a DM term is folded into `J`.
    pub fn base_params(&self) -> SpinPairParams64 {
        SpinPairParams64::new(self.two_s, self.j, self.jz, 0.0, 0.0).with_dm(self.d)
    }

    /// `(key, value)` pairs in a fixed order with round-trip float formatting.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let g = &self.grid;
        let names: Vec<&str> = self.quantities.iter().map(|q| q.name()).collect();
        vec![
            ("two_s", self.two_s.to_string()),
            ("j", format!("{:?}", self.j)),
            ("jz", format!("{:?}", self.jz)),
            ("d", format!("{:?}", self.d)),
            ("kt", format!("{:?}", self.kt)),
            ("h1_min", format!("{:?}", g.h1_min)),
            ("h1_max", format!("{:?}", g.h1_max)),
            ("h2_min", format!("{:?}", g.h2_min)),
            ("h2_max", format!("{:?}", g.h2_max)),
            ("n1", g.n1.to_string()),
            ("n2", g.n2.to_string()),
            ("quantities", names.join(",")),
            ("format", self.format.extension().to_string()),
        ]
    }
}
