//! Closed-form boundary tables and critical-point reports.

use spinpair_core::phase::{critical_points, critical_temperature, stripe_width};
use spinpair_core::SpinPairParams64;

use crate::config::AxisSpec;
use crate::emit::fmt_value;
use crate::error::{CliError, Result};

/// Ground-state boundary `|h1 + h2| = 2s Jz + √(4s²J² + δh²)` tabulated
/// against `δh = h1 − h2`. Columns `dh, sum_c, h1, h2`, where `(h1, h2)` is
/// the boundary point with `h1 + h2 = sum_c`. Rows with `sum_c < 0` have no
/// entangled region.
pub fn boundary_table(p: &SpinPairParams64, dh: AxisSpec) -> Result<Vec<[f64; 4]>> {
    if dh.n == 0 {
        return Err(CliError::config("dh", "need at least one point"));
    }
    let reduced = p.reduced().map_err(|e| CliError::config("j", e.to_string()))?;
    let two_s = reduced.two_s as f64;
    Ok((0..dh.n)
        .map(|k| {
            let x = if dh.n == 1 {
                dh.min
            } else if k == dh.n - 1 {
                dh.max
            } else {
                dh.min + (dh.max - dh.min) * k as f64 / (dh.n - 1) as f64
            };
            let sum = two_s * reduced.jz + (two_s * reduced.j).hypot(x);
            [x, sum, 0.5 * (sum + x), 0.5 * (sum - x)]
        })
        .collect())
}

pub fn boundary_csv(rows: &[[f64; 4]]) -> String {
    let mut out = String::from("dh,sum_c,h1,h2\n");
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&x| fmt_value(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Critical temperature, the stripe half-width at `kt` (if positive) and the
/// critical points (for `Jz < −J`), as `key = value` lines.
pub fn critical_report(p: &SpinPairParams64, kt: Option<f64>) -> Result<String> {
    let reduced = p.reduced().map_err(|e| CliError::config("j", e.to_string()))?;
    let mut out = String::new();
    out.push_str(&format!("two_s = {}\nj = {:?}\njz = {:?}\n", reduced.two_s, reduced.j, reduced.jz));
    let tc = critical_temperature(&reduced)?;
    out.push_str(&format!("kt_c = {}\n", fmt_value(tc)));
    if let Some(t) = kt {
        if !(t > 0.0) {
            return Err(CliError::config("kt", "stripe width needs kt > 0"));
        }
        let r = stripe_width(&reduced, t)?;
        out.push_str(&format!("kt = {:?}\n", t));
        out.push_str(&format!("stripe_h_c = {}\n", fmt_value(r.h_c)));
        out.push_str(&format!("stripe_method = {:?}\n", r.method));
    }
    match critical_points(&reduced) {
        Ok(info) => {
            let gs = info.verify(&reduced, 1e-9);
            out.push_str(&format!("critical_h_c = {}\n", fmt_value(info.h_c)));
            for (k, (h1, h2)) in info.locations.iter().enumerate() {
                out.push_str(&format!("critical_point_{} = {},{}\n", k + 1, fmt_value(*h1), fmt_value(*h2)));
            }
            out.push_str(&format!("critical_degeneracy = {}\n", info.degeneracy));
            out.push_str(&format!("critical_energy = {}\n", fmt_value(info.energy)));
            out.push_str(&format!("critical_degeneracy_found = {}\n", gs.degeneracy));
        }
        Err(_) => out.push_str("critical_points = none\n"),
    }
    Ok(out)
}
