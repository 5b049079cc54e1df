mod common;

use proptest::prelude::*;
use rand::Rng;
use spinpair_core::measures::HalfSpinAnalytics;
use spinpair_core::model::build_hamiltonian;
use spinpair_core::SpinPairParams64 as SpinPairParams;
use spinpair_core::thermal::{
    gibbs_log, ground_state, log_partition_function, min_eigenvalue, reduced_state, thermal_state,
};

#[test]
fn spin_half_closed_form_matches_matrix_exponential() {
    let mut rng = common::rng(31);
    for _ in 0..50 {
        let (j, jz, h1, h2) = (rng.gen_range(0.1..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let t = rng.gen_range(0.05..5.0);
        let p = SpinPairParams::new(1, j, jz, h1, h2);
        let closed = HalfSpinAnalytics::new(&p, t).unwrap().thermal_matrix();
        let oracle = common::gibbs(&common::dense_hamiltonian(1, j, jz, h1, h2), 4, t);
        assert!(common::max_abs_diff(closed.as_slice(), &oracle) <= 1e-12);
        let ours = thermal_state(&build_hamiltonian(&p), t).unwrap();
        assert!(common::max_abs_diff(ours.matrix().as_slice(), &oracle) <= 1e-12);
    }
}

#[test]
fn thermal_state_matches_dense_oracle_for_higher_spins() {
    let mut rng = common::rng(32);
    for two_s in 2..=5 {
        for _ in 0..5 {
            let (j, jz, h1, h2) = (rng.gen_range(0.1..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let t = rng.gen_range(0.1..5.0);
            let n = (two_s as usize + 1).pow(2);
            let oracle = common::gibbs(&common::dense_hamiltonian(two_s, j, jz, h1, h2), n, t);
            let ours = thermal_state(&build_hamiltonian(&SpinPairParams::new(two_s, j, jz, h1, h2)), t).unwrap();
            assert!(common::max_abs_diff(ours.matrix().as_slice(), &oracle) <= 1e-11, "two_s={two_s}");
        }
    }
}

#[test]
fn partition_function_is_boltzmann_sum() {
    let p = SpinPairParams::new(3, 0.9, 0.3, 1.2, -0.4);
    let spec = build_hamiltonian(&p).spectrum();
    let oracle = common::eigenvalues(&common::dense_hamiltonian(3, 0.9, 0.3, 1.2, -0.4), 16);
    for t in [0.1, 0.7, 3.0, 40.0] {
        let z: f64 = oracle.iter().map(|e| (-e / t).exp()).sum();
        let ln_z = log_partition_function(&spec, t).unwrap();
        assert!((ln_z - z.ln()).abs() <= 1e-12 * z.ln().abs().max(1.0));
    }
}

#[test]
fn average_field_factorizes() {
    // ρ(h1, h2) ∝ e^{h̄ Sz/T} ρ(h1 − h̄, h2 − h̄), since Sz commutes with H.
    let (two_s, j, jz, h1, h2, t) = (2, 0.8, -0.5, 1.4, 0.2, 0.6);
    let hbar = 0.5 * (h1 + h2);
    let o = common::ops(two_s);
    let n = o.n;
    let id = common::identity(n);
    let sz: Vec<f64> = common::kron(&o.sz, n, &id, n)
        .iter()
        .zip(common::kron(&id, n, &o.sz, n))
        .map(|(a, b)| a + b)
        .collect();
    let d = n * n;
    let boost = common::matrix_function(&sz, d, |x| (hbar * x / t).exp());
    let centred = thermal_state(&build_hamiltonian(&SpinPairParams::new(two_s, j, jz, h1 - hbar, h2 - hbar)), t).unwrap();
    let mut product = common::matmul(&boost, centred.matrix().as_slice(), d);
    let tr: f64 = (0..d).map(|i| product[i * d + i]).sum();
    product.iter_mut().for_each(|x| *x /= tr);
    let direct = thermal_state(&build_hamiltonian(&SpinPairParams::new(two_s, j, jz, h1, h2)), t).unwrap();
    assert!(common::max_abs_diff(&product, direct.matrix().as_slice()) <= 1e-10);
}

#[test]
fn low_temperature_approaches_ground_projector() {
    let p = SpinPairParams::new(2, 1.0, 0.2, 0.3, -0.1);
    let h = build_hamiltonian(&p);
    let gs = ground_state(&h, 1e-9);
    assert_eq!(gs.degeneracy, 1);
    let spec = h.spectrum();
    let mut e = spec.energies();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let t = (e[1] - e[0]) / 50.0;
    let rho = thermal_state(&h, t).unwrap();
    let v = &gs.members[0].state;
    let d = v.len();
    let mut dev: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            dev = dev.max((rho.matrix().get(a, b) - v[a] * v[b]).abs());
        }
    }
    assert!(dev <= 1e-12 + 10.0 * (-50f64).exp(), "dev={dev}");
    let zero = thermal_state(&h, 0.0).unwrap();
    assert!(common::max_abs_diff(zero.matrix().as_slice(), rho.matrix().as_slice()) <= 1e-12 + 10.0 * (-50f64).exp());
}

#[test]
fn degenerate_ground_state_mixture_at_zero_temperature() {
    // h1 = h2 = 0, Jz = J > 0 for spin ½: unique singlet. With J < 0 the
    // triplet is threefold degenerate at Jz = J.
    let h = build_hamiltonian(&SpinPairParams::new(1, -1.0, -1.0, 0.0, 0.0));
    let gs = ground_state(&h, 1e-9);
    assert_eq!(gs.degeneracy, 3);
    let rho = thermal_state(&h, 0.0).unwrap();
    assert!((rho.trace() - 1.0).abs() < 1e-14);
    assert!((rho.purity() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn reduced_state_reproduces_local_expectations() {
    let (two_s, j, jz, h1, h2, t) = (3, 0.7, 0.4, -0.9, 1.3, 0.8);
    let p = SpinPairParams::new(two_s, j, jz, h1, h2);
    let rho = thermal_state(&build_hamiltonian(&p), t).unwrap();
    let o = common::ops(two_s);
    let n = o.n;
    let id = common::identity(n);
    for (site, global) in [(1u8, common::kron(&o.sz, n, &id, n)), (2u8, common::kron(&id, n, &o.sz, n))] {
        let d = n * n;
        let prod = common::matmul(rho.matrix().as_slice(), &global, d);
        let full: f64 = (0..d).map(|i| prod[i * d + i]).sum();
        let r = reduced_state(&rho, site, two_s).unwrap();
        let local: f64 = (0..n).map(|i| r.get(i, i) * o.sz[i * n + i]).sum();
        assert!((full - local).abs() <= 1e-13);
        assert!((r.trace() - 1.0).abs() <= 1e-13);
    }
    assert!(reduced_state(&rho, 3, two_s).is_err());
}

#[test]
fn negative_temperature_rejected() {
    let h = build_hamiltonian(&SpinPairParams::new(1, 1.0, 0.0, 0.0, 0.0));
    assert!(thermal_state(&h, -0.1).is_err());
    assert!(gibbs_log(&h.spectrum(), 0.0).is_err());
}

#[test]
fn log_domain_state_agrees_where_representable() {
    let p = SpinPairParams::new(4, 1.1, -0.3, 0.5, 0.9);
    let h = build_hamiltonian(&p);
    for t in [0.05, 0.5, 5.0] {
        let plain = thermal_state(&h, t).unwrap();
        let (log, _) = gibbs_log(&h.spectrum(), t).unwrap();
        let d = plain.dim();
        for a in 0..d {
            for b in 0..d {
                let (s, l) = log.get(a, b);
                let x = plain.matrix().get(a, b);
                assert!((s * l.exp() - x).abs() <= 1e-13, "t={t} ({a},{b})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn thermal_state_is_a_density_matrix(
        two_s in 1u32..=6,
        j in 0.1f64..2.0, jz in -2.0f64..2.0, h1 in -3.0f64..3.0, h2 in -3.0f64..3.0,
        t in 0.0f64..5.0,
    ) {
        let rho = thermal_state(&build_hamiltonian(&SpinPairParams::new(two_s, j, jz, h1, h2)), t).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() <= 1e-12);
        prop_assert!(min_eigenvalue(&rho) >= -1e-12);
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
    }
}
