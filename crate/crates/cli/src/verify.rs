//! Certificate suite behind `spinpair verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinpair_core::linalg::eig_sym_dense;
use spinpair_core::measures::{concurrence_wootters, negativity, negativity_pure, HalfSpinAnalytics};
use spinpair_core::model::{dm_hamiltonian_realified, gauge_flip_j};
use spinpair_core::phase::{boundary_agrees_with_diagonalization, lemma1_certificates, FieldGrid};
use spinpair_core::thermal::{thermal_state, DensityMatrix};
use spinpair_core::{build_hamiltonian, SpinPairParams64};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!("[{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Aggregate of the average-field certificates over random draws.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSummary {
    pub draws: usize,
    pub identity_max_dev: f64,
    pub det_failures: Vec<String>,
    pub sign_violations: usize,
}

impl ShiftSummary {
    pub fn passes(&self) -> bool {
        self.identity_max_dev <= 1e-10 && self.det_failures.is_empty() && self.sign_violations == 0
    }
}

/// Draws with `2s ∈ [1, 4]`, `J ∈ [0.2, 2)`, `Jz ∈ [−3, 3)`, `δh ∈ [−5, 5)`,
/// `T ∈ (0, 5]` and average-field shift in `[−5, 5]`.
pub fn average_field_shift_sweep(draws: usize, seed: u64) -> ShiftSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = ShiftSummary {
        draws,
        identity_max_dev: 0.0,
        det_failures: Vec::new(),
        sign_violations: 0,
    };
    for _ in 0..draws {
        let two_s = rng.gen_range(1..=4);
        let j = rng.gen_range(0.2..2.0);
        let jz = rng.gen_range(-3.0..3.0);
        let dh: f64 = rng.gen_range(-5.0..5.0);
        let t = 5.0 - rng.gen_range(0.0..5.0);
        let shift = rng.gen_range(-5.0..=5.0);
        let p = SpinPairParams64::new(two_s, j, jz, 0.5 * dh, -0.5 * dh);
        let r = lemma1_certificates(&p, t, shift).expect("positive temperature");
        summary.identity_max_dev = summary.identity_max_dev.max(r.identity_max_dev);
        if !(r.det_rel_err <= 1e-8 && r.det_sign_match) {
            summary.det_failures.push(format!(
                "2s={two_s} J={j:.4} Jz={jz:.4} dh={dh:.4} kT={t:.4} shift={shift:.4} rel_err={:e}",
                r.det_rel_err
            ));
        }
        if !r.sign_invariant() {
            summary.sign_violations += 1;
        }
    }
    summary
}

/// Largest spectral deviation between `H(J, D)` and `H(√(J² + D²))`.
pub fn dm_reduction_deviation(draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let two_s = rng.gen_range(1..=4);
        let p = SpinPairParams64::new(
            two_s,
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        )
        .with_dm(rng.gen_range(-2.0..2.0));
        let doubled = eig_sym_dense(&dm_hamiltonian_realified(&p));
        let reduced = build_hamiltonian(&p.reduced().expect("nonzero couplings")).spectrum().energies();
        for (k, e) in reduced.iter().enumerate() {
            worst = worst
                .max((doubled.eigenvalues()[2 * k] - e).abs())
                .max((doubled.eigenvalues()[2 * k + 1] - e).abs());
        }
    }
    worst
}

/// Largest gap between Wootters concurrence and the closed form on random
/// two-qubit thermal states.
pub fn wootters_deviation(draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let p = SpinPairParams64::new(
            1,
            rng.gen_range(0.1..2.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let t = rng.gen_range(0.01..5.0);
        let rho = thermal_state(&build_hamiltonian(&p), t).expect("positive temperature");
        let closed = HalfSpinAnalytics::new(&p, t).expect("spin 1/2").concurrence();
        worst = worst.max((concurrence_wootters(&rho).expect("two qubits") - closed).abs());
    }
    worst
}

/// Largest gap between the Schmidt and partial-transpose negativities of
/// random pure states with `2s ∈ [1, 6]`.
pub fn pure_negativity_deviation(draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let two_s = rng.gen_range(1..=6u32);
        let d = (two_s as usize + 1).pow(2);
        let mut v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let a = negativity_pure(&v, two_s).expect("normalized");
        let b = negativity(&DensityMatrix::from_pure(&v), two_s).expect("dimension");
        worst = worst.max((a - b).abs());
    }
    worst
}

/// Grid points where the closed-form boundary and exact diagonalization
/// disagree, ignoring nodes within `1e-9` of the boundary.
pub fn boundary_disagreements(two_s: u32, jz: f64, n: usize) -> (usize, usize) {
    let extent = 1.5 * two_s as f64 * jz.abs().max(1.0);
    let grid = FieldGrid::square(-extent, extent, n);
    let mut checked = 0;
    let mut bad = 0;
    for k in 0..grid.len() {
        let (h1, h2) = grid.node(k);
        match boundary_agrees_with_diagonalization(&SpinPairParams64::new(two_s, 1.0, jz, h1, h2), 1e-9) {
            Some(true) => checked += 1,
            Some(false) => {
                checked += 1;
                bad += 1;
            }
            None => {}
        }
    }
    (bad, checked)
}

pub fn run_suite(draws: usize, seed: u64, grid_n: usize) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let shift = average_field_shift_sweep(draws, seed);
    out.push(CheckOutcome {
        name: "average-field shift".into(),
        passed: shift.passes(),
        detail: format!(
            "{} draws, identity max dev {:.2e}, {} determinant failures, {} sign violations",
            shift.draws,
            shift.identity_max_dev,
            shift.det_failures.len(),
            shift.sign_violations
        ),
    });
    for f in &shift.det_failures {
        out.push(CheckOutcome {
            name: "average-field shift determinant".into(),
            passed: false,
            detail: f.clone(),
        });
    }
    let dm = dm_reduction_deviation(100, seed.wrapping_add(1));
    out.push(CheckOutcome {
        name: "DM reduction".into(),
        passed: dm <= 1e-10,
        detail: format!("max spectral deviation {dm:.2e}"),
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut gauge_ok = true;
    for _ in 0..50 {
        let p = SpinPairParams64::new(
            rng.gen_range(1..=4),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        gauge_ok &= gauge_flip_j(&p).1.holds();
    }
    out.push(CheckOutcome {
        name: "coupling sign gauge".into(),
        passed: gauge_ok,
        detail: "50 random draws".into(),
    });
    let w = wootters_deviation(draws, seed.wrapping_add(3));
    out.push(CheckOutcome {
        name: "Wootters vs closed form".into(),
        passed: w <= 1e-12,
        detail: format!("max deviation {w:.2e}"),
    });
    let n = pure_negativity_deviation(draws, seed.wrapping_add(4));
    out.push(CheckOutcome {
        name: "pure-state negativity".into(),
        passed: n <= 1e-10,
        detail: format!("max deviation {n:.2e}"),
    });
    for two_s in [1, 2, 4] {
        for jz in [1.0, -0.5, -1.0, -1.5] {
            let (bad, checked) = boundary_disagreements(two_s, jz, grid_n);
            out.push(CheckOutcome {
                name: format!("ground-state boundary 2s={two_s} Jz={jz}"),
                passed: bad == 0,
                detail: format!("{bad} disagreements in {checked} nodes"),
            });
        }
    }
    out
}
