//! Command-line front end for the spin-pair library: field-plane sweeps,
//! one-dimensional scans, boundary tables, critical-point reports and a
//! certificate suite.

pub mod config;
pub mod emit;
pub mod error;
pub mod report;
pub mod scan;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use spinpair_core::SpinPairParams64;

pub use crate::config::WORKERS_ENV;
use crate::config::{AxisSpec, ConfigLayer, Format};
use crate::error::{CliError, Result};
use crate::scan::{ScanConfig, ScanKind};

#[derive(Debug, Parser)]
#[command(name = "spinpair", version, about = "Thermal entanglement of a spin-s XXZ pair in non-uniform fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate quantities on an (h1, h2) grid and write CSV, JSON or PGM.
    Sweep(SweepArgs),
    /// Scan temperature or field difference at fixed couplings.
    Scan(ScanArgs),
    /// Tabulate the ground-state boundary against the field difference.
    Boundary(BoundaryArgs),
    /// Report the critical temperature, stripe width and critical points.
    Critical(CriticalArgs),
    /// Run the certificate suite; exits with status 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Couplings {
    /// Twice the spin.
    #[arg(long)]
    pub two_s: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub jz: Option<f64>,
    /// Dzyaloshinskii-Moriya coupling.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
}

impl Couplings {
    fn params(&self) -> SpinPairParams64 {
        SpinPairParams64::new(self.two_s.unwrap_or(1), self.j.unwrap_or(1.0), self.jz.unwrap_or(1.0), 0.0, 0.0)
            .with_dm(self.d.unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub couplings: Couplings,
    /// Temperature in units of J (0 for the ground state).
    #[arg(long, allow_hyphen_values = true)]
    pub kt: Option<f64>,
    /// Same axis for both fields, `min:max:n`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<AxisSpec>,
    #[arg(long, allow_hyphen_values = true)]
    pub h1: Option<AxisSpec>,
    #[arg(long, allow_hyphen_values = true)]
    pub h2: Option<AxisSpec>,
    /// Comma-separated: negativity, concurrence, eof, coherence,
    /// gs_magnetization, gs_energy, gap.
    #[arg(long)]
    pub quantities: Option<String>,
    /// Worker threads; overrides the environment and the config file.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
}

impl SweepArgs {
    /// Config file, then environment worker count, then flags.
    pub fn layer(&self) -> Result<ConfigLayer> {
        let mut base = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        if let Some(w) = config::workers_from_env()? {
            base.workers = Some(w);
        }
        let mut flags = ConfigLayer {
            two_s: self.couplings.two_s,
            j: self.couplings.j,
            jz: self.couplings.jz,
            d: self.couplings.d,
            kt: self.kt,
            workers: self.workers,
            output: self.output.clone(),
            format: self.format,
            ..ConfigLayer::default()
        };
        if let Some(g) = self.grid {
            flags.set_grid(g);
        }
        if let Some(a) = self.h1 {
            flags.set_h1(a);
        }
        if let Some(a) = self.h2 {
            flags.set_h2(a);
        }
        if let Some(q) = &self.quantities {
            flags.quantities = Some(config::parse_quantities(q)?);
        }
        Ok(base.merge(flags))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// `temperature` or `field-difference`.
    #[arg(long)]
    pub kind: ScanKind,
    #[command(flatten)]
    pub couplings: Couplings,
    /// Fixed fields for a temperature scan.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub h1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub h2: f64,
    /// Average field for a field-difference scan.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub h_avg: f64,
    /// Temperature for a field-difference scan.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub kt: f64,
    /// Scan range `from:to:steps`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: AxisSpec,
    /// Write CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub couplings: Couplings,
    /// Field-difference range `from:to:n`.
    #[arg(long, allow_hyphen_values = true, default_value = "0:6:61")]
    pub dh: AxisSpec,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub couplings: Couplings,
    /// Also report the stripe half-width at this temperature.
    #[arg(long, allow_hyphen_values = true)]
    pub kt: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub draws: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Nodes per axis of the boundary grids.
    #[arg(long, default_value_t = 101)]
    pub grid_n: usize,
}

fn write_or_print(output: Option<&PathBuf>, text: &str, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => emit::write_atomic(path, text.as_bytes()),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Runs one command. `Ok(false)` means the verify suite found a failure.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Sweep(args) => {
            let cfg = args.layer()?.resolve()?;
            let start = Instant::now();
            let grid = sweep::run_sweep(&cfg)?;
            let written = emit::emit(&grid, cfg.format, &cfg.output)?;
            let _ = writeln!(
                err,
                "{} x {} cells on {} workers in {:.3} s",
                cfg.grid.n1,
                cfg.grid.n2,
                cfg.workers,
                start.elapsed().as_secs_f64()
            );
            for p in written {
                let _ = writeln!(out, "{}", p.display());
            }
            Ok(true)
        }
        Command::Scan(args) => {
            let p = args.couplings.params();
            let cfg = ScanConfig {
                kind: args.kind,
                two_s: p.two_s,
                j: p.j,
                jz: p.jz,
                d: p.d,
                h1: args.h1,
                h2: args.h2,
                h_avg: args.h_avg,
                kt: args.kt,
                from: args.range.min,
                to: args.range.max,
                steps: args.range.n,
            };
            let table = scan::run_scan(&cfg)?;
            write_or_print(args.output.as_ref(), &table.to_csv(&cfg), out)?;
            Ok(true)
        }
        Command::Boundary(args) => {
            let rows = report::boundary_table(&args.couplings.params(), args.dh)?;
            write_or_print(args.output.as_ref(), &report::boundary_csv(&rows), out)?;
            Ok(true)
        }
        Command::Critical(args) => {
            let text = report::critical_report(&args.couplings.params(), args.kt)?;
            write_or_print(None, &text, out)?;
            Ok(true)
        }
        Command::Verify(args) => {
            if args.grid_n < 2 {
                return Err(CliError::config("grid_n", "need at least 2 nodes"));
            }
            let outcomes = verify::run_suite(args.draws, args.seed, args.grid_n);
            for o in &outcomes {
                let _ = writeln!(out, "{}", o.line());
            }
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}
