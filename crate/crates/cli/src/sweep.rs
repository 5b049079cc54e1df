//! Field-plane sweeps evaluated cell by cell on a worker pool.

use rayon::prelude::*;
use rayon::ThreadPoolBuilder;
use spinpair_core::measures::{concurrence_wootters, eof_from_concurrence, negativity, rel_entropy_coherence};
use spinpair_core::phase::FieldGrid;
use spinpair_core::thermal::{ground_state_from_spectrum, thermal_state_from_spectrum};
use spinpair_core::{build_hamiltonian, SpinPairParams64};

use crate::config::{Quantity, SweepConfig};
use crate::error::{CliError, Result};

const TOL_DEG: f64 = 1e-9;

/// Values of a sweep, each quantity stored row-major with `h1` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub config: SweepConfig,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub values: Vec<(Quantity, Vec<f64>)>,
}

impl PhaseGrid {
    pub fn n1(&self) -> usize {
        self.h1.len()
    }

    pub fn n2(&self) -> usize {
        self.h2.len()
    }

    pub fn get(&self, q: Quantity) -> Option<&[f64]> {
        self.values.iter().find(|(k, _)| *k == q).map(|(_, v)| v.as_slice())
    }

    pub fn at(&self, q: Quantity, i: usize, j: usize) -> f64 {
        self.get(q).expect("quantity present")[i * self.n2() + j]
    }
}

pub fn field_grid(cfg: &SweepConfig) -> FieldGrid<f64> {
    let g = &cfg.grid;
    FieldGrid {
        h1_min: g.h1_min,
        h1_max: g.h1_max,
        h2_min: g.h2_min,
        h2_max: g.h2_max,
        n1: g.n1,
        n2: g.n2,
    }
}

/// All requested quantities at one parameter point. A DM term is removed by a
/// local rotation first, which changes none of the quantities.
pub fn evaluate_cell(p: &SpinPairParams64, kt: f64, quantities: &[Quantity]) -> Result<Vec<f64>> {
    let reduced = p.reduced().map_err(|e| CliError::config("j", e.to_string()))?;
    let spec = build_hamiltonian(&reduced).spectrum();
    let needs_state = quantities
        .iter()
        .any(|q| matches!(q, Quantity::Negativity | Quantity::Concurrence | Quantity::Eof | Quantity::Coherence));
    let rho = if needs_state {
        Some(thermal_state_from_spectrum(&spec, kt).map_err(|e| CliError::config("kt", e.to_string()))?)
    } else {
        None
    };
    let numeric = |e: spinpair_core::MeasureError| CliError::Numeric(e.to_string());
    let mut out = Vec::with_capacity(quantities.len());
    for q in quantities {
        let v = match q {
            Quantity::Negativity => negativity(rho.as_ref().expect("state"), p.two_s).map_err(numeric)?,
            Quantity::Concurrence => concurrence_wootters(rho.as_ref().expect("state")).map_err(numeric)?,
            Quantity::Eof => {
                let c = concurrence_wootters(rho.as_ref().expect("state")).map_err(numeric)?;
                eof_from_concurrence(c).map_err(numeric)?
            }
            Quantity::Coherence => rel_entropy_coherence(rho.as_ref().expect("state")).map_err(numeric)?,
            Quantity::GsMagnetization => ground_state_from_spectrum(&spec, TOL_DEG).min_abs_magnetization() as f64,
            Quantity::GsEnergy => spec.min_energy(),
            Quantity::Gap => {
                let mut e = spec.energies();
                e.sort_by(|a, b| a.total_cmp(b));
                e.iter().find(|&&x| x - e[0] > TOL_DEG * (1.0 + e[0].abs())).map_or(0.0, |&x| x - e[0])
            }
        };
        out.push(v);
    }
    Ok(out)
}

/// Evaluates every grid node. Each cell is computed independently and written
/// to its own slot, so the result does not depend on `cfg.workers`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<PhaseGrid> {
    cfg.validate()?;
    let grid = field_grid(cfg);
    let base = cfg.base_params();
    let pool = ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::config("workers", e.to_string()))?;
    let cells: Vec<Vec<f64>> = pool.install(|| {
        (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (h1, h2) = grid.node(k);
                evaluate_cell(&base.with_fields(h1, h2), cfg.kt, &cfg.quantities)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let values = cfg
        .quantities
        .iter()
        .enumerate()
        .map(|(qi, &q)| (q, cells.iter().map(|c| c[qi]).collect::<Vec<f64>>()))
        .collect::<Vec<_>>();
    for (q, v) in &values {
        if let Some(k) = v.iter().position(|x| !x.is_finite()) {
            let (h1, h2) = grid.node(k);
            return Err(CliError::Numeric(format!("{q} is not finite at h1 = {h1}, h2 = {h2}")));
        }
    }
    Ok(PhaseGrid {
        config: cfg.clone(),
        h1: grid.h1_axis(),
        h2: grid.h2_axis(),
        values,
    })
}
