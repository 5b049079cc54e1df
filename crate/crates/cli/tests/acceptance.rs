//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Exits nonzero when
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use spinpair_cli::config::{ConfigLayer, Quantity};
use spinpair_cli::scan::{run_scan, ScanConfig, ScanKind};
use spinpair_cli::sweep::run_sweep;
use spinpair_cli::verify::{
    average_field_shift_sweep, boundary_disagreements, dm_reduction_deviation, pure_negativity_deviation,
    wootters_deviation,
};
use spinpair_core::measures::{
    coherence_asymptotic, entanglement_entropy_pure, eof_from_concurrence, negativity, negativity_pure,
    rel_entropy_coherence, SpinOneAnalytics,
};
use spinpair_core::phase::{critical_points, critical_temperature, critical_temperature_numeric, stripe_width};
use spinpair_core::thermal::{ground_state, thermal_state};
use spinpair_core::{build_hamiltonian, DensityMatrix64, SpinPairParams64};

struct Report {
    failures: usize,
}

impl Report {
    fn record(&mut self, id: &str, passed: bool, detail: String) {
        println!("[{}] {id}: {detail}", if passed { "PASS" } else { "FAIL" });
        if !passed {
            self.failures += 1;
        }
    }
}

fn params(two_s: u32, jz: f64, h1: f64, h2: f64) -> SpinPairParams64 {
    SpinPairParams64::new(two_s, 1.0, jz, h1, h2)
}

fn critical_temperatures(r: &mut Report) {
    let mut detail = Vec::new();
    let mut ok = true;
    for (two_s, target, tol) in [(1u32, 0.5673, 1e-3), (2, 0.864, 2e-3), (4, 1.498, 2e-3)] {
        let start = Instant::now();
        let p = params(two_s, 0.0, 0.0, 0.0);
        let tc = if two_s == 1 { critical_temperature(&p) } else { critical_temperature_numeric(&p) }.unwrap();
        let secs = start.elapsed().as_secs_f64();
        ok &= (tc - target).abs() <= tol && secs < 10.0;
        detail.push(format!("2s={two_s} kTc={tc:.6} (target {target} ± {tol}, {secs:.3} s)"));
    }
    r.record("1 critical temperatures", ok, detail.join("; "));
}

fn whole_plane_thresholds(r: &mut Report) {
    let sweep = |jz: f64, kt: f64| {
        let text = format!("two_s = 1\njz = {jz}\nkt = {kt}\nn1 = 51\nn2 = 51\nquantities = concurrence");
        run_sweep(&ConfigLayer::parse_ini(&text).unwrap().resolve().unwrap()).unwrap()
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for (jz, below, above) in [(1.0, 0.90, 0.92), (-0.5, 0.33, 0.34)] {
        let cold = sweep(jz, below);
        let min_c = cold.get(Quantity::Concurrence).unwrap().iter().cloned().fold(f64::INFINITY, f64::min);
        let hot = sweep(jz, above);
        let diag_zero = (0..51).all(|i| hot.at(Quantity::Concurrence, i, i) == 0.0);
        let off_positive = hot.at(Quantity::Concurrence, 0, 50) > 0.0;
        ok &= min_c > 0.0 && diag_zero && off_positive;
        detail.push(format!(
            "Jz={jz}: min C at kT={below} is {min_c:.3e}; kT={above} diagonal zero {diag_zero}, corner C {:.3}",
            hot.at(Quantity::Concurrence, 0, 50)
        ));
    }
    r.record("2 whole-plane entanglement thresholds", ok, detail.join("; "));
}

fn stripe_limits(r: &mut Report) {
    let half = stripe_width(&params(1, -1.5, 0.0, 0.0), 0.01).unwrap().h_c;
    let limit = 1.25f64.sqrt();
    let rel = (half / limit - 1.0).abs();
    r.record(
        "3a stripe limit 2s=1 Jz=-1.5 kT=0.01",
        rel <= 0.01,
        format!("h_c={half:.6}, T->0 limit {limit:.6}, relative gap {:.3}% (tolerance 1%)", rel * 100.0),
    );
    let two = stripe_width(&params(4, -1.2, 0.0, 0.0), 0.01).unwrap().h_c;
    let limit = 4.0 * 0.44f64.sqrt();
    let rel = (two / limit - 1.0).abs();
    r.record(
        "3b stripe limit 2s=4 Jz=-1.2 kT=0.01",
        rel <= 0.02,
        format!("h_c={two:.6}, limit {limit:.6}, relative gap {:.3}% (tolerance 2%)", rel * 100.0),
    );
}

fn negativity_anchors(r: &mut Report) {
    let a = SpinOneAnalytics::new(&params(2, 0.0, 0.4, 0.4)).unwrap();
    let n_pm: Vec<f64> = [1, -1].iter().map(|&s| negativity_pure(&a.psi_pm1(s), 2).unwrap()).collect();
    let n0 = negativity_pure(&a.psi_0(), 2).unwrap();
    let target = (1.0 + 2.0 * 2f64.sqrt()) / 4.0;
    let mut worst: f64 = n_pm.iter().map(|x| (x - 0.5).abs()).fold(0.0, f64::max).max((n0 - target).abs());
    for two_s in 1..=6u32 {
        let n = two_s as usize + 1;
        let mut v = vec![0.0; n * n];
        for k in 0..n {
            v[k * n + n - 1 - k] = (n as f64).sqrt().recip();
        }
        let s = two_s as f64 / 2.0;
        worst = worst.max((negativity(&DensityMatrix64::from_pure(&v), two_s).unwrap() - s).abs());
    }
    r.record(
        "4 negativity anchors",
        worst <= 1e-10,
        format!("N(Psi+-1)={:.12}, N(Psi0)={n0:.12} (target {target:.12}), max deviation {worst:.2e}", n_pm[0]),
    );
}

fn critical_point_degeneracy(r: &mut Report) {
    let p = params(4, -1.2, 0.0, 0.0);
    let info = critical_points(&p).unwrap();
    let gs = info.verify(&p, 1e-9);
    let (h1, h2) = info.locations[0];
    let moved: Vec<usize> = [(1e-3, 0.0), (0.0, 1e-3)]
        .iter()
        .map(|(a, b)| ground_state(&build_hamiltonian(&p.with_fields(h1 + a, h2 + b)), 1e-9).degeneracy)
        .collect();
    let ok = gs.degeneracy == 9 && (gs.energy + 4.8).abs() <= 1e-9 && moved.iter().all(|&d| d < 9);
    r.record(
        "5 critical-point degeneracy",
        ok,
        format!("{} states at E={:.12}; perturbed degeneracies {moved:?}", gs.degeneracy, gs.energy),
    );
}

fn average_field_shift(r: &mut Report) {
    let start = Instant::now();
    let s = average_field_shift_sweep(1000, 7);
    let secs = start.elapsed().as_secs_f64();
    let ok = s.passes() && secs < 60.0;
    r.record(
        "6 average-field shift certificates",
        ok,
        format!(
            "{} draws in {secs:.2} s: identity max dev {:.2e}, {} determinant failures, {} sign violations",
            s.draws,
            s.identity_max_dev,
            s.det_failures.len(),
            s.sign_violations
        ),
    );
    for f in &s.det_failures {
        println!("       determinant: {f}");
    }
}

fn closed_form_cross_checks(r: &mut Report) {
    let w = wootters_deviation(1000, 11);
    let n = pure_negativity_deviation(1000, 12);
    let mut bad = 0;
    let mut checked = 0;
    for two_s in [1, 2, 4] {
        for jz in [1.0, -0.5, -1.0, -1.5] {
            let (b, c) = boundary_disagreements(two_s, jz, 101);
            bad += b;
            checked += c;
        }
    }
    r.record(
        "7 closed-form cross-checks",
        w <= 1e-12 && n <= 1e-10 && bad == 0,
        format!("Wootters max dev {w:.2e}; pure negativity max dev {n:.2e}; boundary {bad} disagreements in {checked} nodes"),
    );
}

fn coherence_limits(r: &mut Report) {
    let mut detail = Vec::new();
    let mut ok = true;
    for (two_s, jz, h1, h2) in [(1, 0.3, 0.2, -0.4), (2, 0.0, 0.3, -0.1), (4, -0.5, 0.7, 0.2)] {
        let h = build_hamiltonian(&params(two_s, jz, h1, h2));
        let mut e = h.spectrum().energies();
        e.sort_by(|a, b| a.total_cmp(b));
        let rho = thermal_state(&h, (e[1] - e[0]) / 50.0).unwrap();
        let ee = entanglement_entropy_pure(&ground_state(&h, 1e-9).members[0].state, two_s).unwrap();
        let dev = (rel_entropy_coherence(&rho).unwrap() - ee).abs();
        ok &= dev <= 1e-8;
        detail.push(format!("GS 2s={two_s} dev {dev:.1e}"));
    }
    for two_s in [1, 2, 4] {
        let p = params(two_s, 0.6, 0.8, -0.3);
        let t = 200.0;
        let exact = rel_entropy_coherence(&thermal_state(&build_hamiltonian(&p), t).unwrap()).unwrap();
        let rel = (exact / coherence_asymptotic(&p, t).unwrap().leading - 1.0).abs();
        ok &= rel <= 5e-3;
        detail.push(format!("high-T 2s={two_s} rel {:.3}%", rel * 100.0));
    }
    for (two_s, jz) in [(1, 0.6), (2, 0.0)] {
        let p = params(two_s, jz, 0.8, -0.3);
        let t = 20.0;
        let exact = rel_entropy_coherence(&thermal_state(&build_hamiltonian(&p), t).unwrap()).unwrap();
        let a = coherence_asymptotic(&p, t).unwrap();
        let gain = (exact - a.leading).abs() / (exact - a.refined.unwrap()).abs();
        ok &= gain >= 10.0;
        detail.push(format!("next order 2s={two_s} gain {gain:.1}x"));
    }
    r.record("8 coherence limits", ok, detail.join("; "));
}

fn scan_phenomenology(r: &mut Report) {
    let base = ScanConfig {
        kind: ScanKind::Temperature,
        two_s: 1,
        j: 1.0,
        jz: -0.5,
        d: 0.0,
        h1: 0.3,
        h2: 0.3,
        h_avg: 0.0,
        kt: 0.5,
        from: 0.0,
        to: 0.6,
        steps: 241,
    };
    let c = run_scan(&base).unwrap().column("concurrence").unwrap();
    let on: Vec<usize> = (0..c.len()).filter(|&k| c[k] > 0.0).collect();
    let reentry = c[0] == 0.0 && !on.is_empty() && on.last().unwrap() + 1 < c.len() && on.windows(2).all(|w| w[1] == w[0] + 1);
    let mut detail = vec![format!(
        "T-scan C(0)={}, positive for kT in [{:.4}, {:.4}], zero after",
        c[0],
        on.first().map_or(f64::NAN, |&k| 0.6 * k as f64 / 240.0),
        on.last().map_or(f64::NAN, |&k| 0.6 * k as f64 / 240.0)
    )];
    let mut ok = reentry;
    let dh: f64 = 20.0;
    let pure = eof_from_concurrence(1.0 / dh.hypot(1.0)).unwrap();
    for jz in [1.0, -0.5, -1.0, -1.5] {
        let cfg = ScanConfig { kind: ScanKind::FieldDifference, jz, from: dh, to: dh, steps: 1, ..base.clone() };
        let t = run_scan(&cfg).unwrap();
        let (eof, coh) = (t.column("eof").unwrap()[0], t.column("coherence").unwrap()[0]);
        ok &= (eof - coh).abs() <= 0.01 && (eof - pure).abs() <= 0.01 && (coh - pure).abs() <= 0.01;
        detail.push(format!("Jz={jz}: EoF {eof:.5} coherence {coh:.5}"));
    }
    detail.push(format!("pure-state EoF {pure:.5}"));
    r.record("9 scan phenomenology", ok, detail.join("; "));
}

fn dm_reduction(r: &mut Report) {
    let dev = dm_reduction_deviation(100, 13);
    r.record("10 DM reduction", dev <= 1e-10, format!("100 draws, max spectral deviation {dev:.2e}"));
}

fn main() -> ExitCode {
    let mut r = Report { failures: 0 };
    critical_temperatures(&mut r);
    whole_plane_thresholds(&mut r);
    stripe_limits(&mut r);
    negativity_anchors(&mut r);
    critical_point_degeneracy(&mut r);
    average_field_shift(&mut r);
    closed_form_cross_checks(&mut r);
    coherence_limits(&mut r);
    scan_phenomenology(&mut r);
    dm_reduction(&mut r);
    println!("{} criteria failed", r.failures);
    if r.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
