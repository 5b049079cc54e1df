//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the crate's solvers: dense matrices are plain
//! row-major `Vec<f64>`, spin operators are built from the textbook ladder
//! formula, and eigenvalues come from cyclic Jacobi rotations.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub type Dense = Vec<f64>;

pub fn zeros(n: usize) -> Dense {
    vec![0.0; n * n]
}

pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Dense {
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0.0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

pub fn kron(a: &[f64], na: usize, b: &[f64], nb: usize) -> Dense {
    let n = na * nb;
    let mut out = zeros(n);
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k) * n + j * nb + l] = a[i * na + j] * b[k * nb + l];
                }
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n);
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// Real single-site operators in the descending-m basis; `sy` is kept out by
/// working with `s⁺` and `s⁻`.
pub struct Ops {
    pub n: usize,
    pub sz: Dense,
    pub sp: Dense,
    pub sm: Dense,
    pub sx: Dense,
}

pub fn ops(two_s: u32) -> Ops {
    let n = two_s as usize + 1;
    let s = two_s as f64 / 2.0;
    let m = |k: usize| s - k as f64;
    let mut sz = zeros(n);
    let mut sp = zeros(n);
    for k in 0..n {
        sz[k * n + k] = m(k);
        if k + 1 < n {
            // s⁺ |m⟩ = √(s(s+1) − m(m+1)) |m+1⟩, and m(k) = m(k+1) + 1
            let mk1 = m(k + 1);
            sp[k * n + k + 1] = (s * (s + 1.0) - mk1 * (mk1 + 1.0)).sqrt();
        }
    }
    let mut sm = zeros(n);
    for i in 0..n {
        for j in 0..n {
            sm[i * n + j] = sp[j * n + i];
        }
    }
    let sx = (0..n * n).map(|k| 0.5 * (sp[k] + sm[k])).collect();
    Ops { n, sz, sp, sm, sx }
}

/// Dense `H` from Kronecker products: `−h1 s1z − h2 s2z + (J/2)(s1⁺s2⁻ + s1⁻s2⁺) + Jz s1z s2z`.
pub fn dense_hamiltonian(two_s: u32, j: f64, jz: f64, h1: f64, h2: f64) -> Dense {
    let o = ops(two_s);
    let n = o.n;
    let id = identity(n);
    let z1 = kron(&o.sz, n, &id, n);
    let z2 = kron(&id, n, &o.sz, n);
    let pm = kron(&o.sp, n, &o.sm, n);
    let mp = kron(&o.sm, n, &o.sp, n);
    let zz = kron(&o.sz, n, &o.sz, n);
    (0..n * n * n * n)
        .map(|k| -h1 * z1[k] - h2 * z2[k] + 0.5 * j * (pm[k] + mp[k]) + jz * zz[k])
        .collect()
}

/// Cyclic Jacobi: returns ascending eigenvalues and column eigenvectors.
pub fn jacobi(a: &[f64], n: usize) -> (Vec<f64>, Dense) {
    let mut a = a.to_vec();
    let mut v = identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].partial_cmp(&a[y * n + y]).unwrap());
    let vals = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vecs = zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i * n + new] = v[i * n + old];
        }
    }
    (vals, vecs)
}

pub fn eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    jacobi(a, n).0
}

/// `f(A)` through the Jacobi eigenbasis.
pub fn matrix_function(a: &[f64], n: usize, f: impl Fn(f64) -> f64) -> Dense {
    let (vals, vecs) = jacobi(a, n);
    let mut out = zeros(n);
    for k in 0..n {
        let fk = f(vals[k]);
        for i in 0..n {
            for j in i..n {
                out[i * n + j] += fk * vecs[i * n + k] * vecs[j * n + k];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            out[i * n + j] = out[j * n + i];
        }
    }
    out
}

/// Gibbs state `e^{−H/T}/Z` via Jacobi.
pub fn gibbs(h: &[f64], n: usize, t: f64) -> Dense {
    let vals = eigenvalues(h, n);
    let e0 = vals[0];
    let g = matrix_function(h, n, |e| (-(e - e0) / t).exp());
    let z: f64 = (0..n).map(|i| g[i * n + i]).sum();
    g.iter().map(|x| x / z).collect()
}

/// `⟨a,b|out|a′,b′⟩ = ⟨a,b′|m|a′,b⟩` written independently of the crate.
pub fn partial_transpose(m: &[f64], na: usize, nb: usize) -> Dense {
    let n = na * nb;
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (i / nb, i % nb);
            let (a2, b2) = (j / nb, j % nb);
            out[(a * nb + b2) * n + a2 * nb + b] = m[i * n + j];
        }
    }
    out
}

pub fn negativity(rho: &[f64], n_local: usize) -> f64 {
    let pt = partial_transpose(rho, n_local, n_local);
    -eigenvalues(&pt, n_local * n_local).iter().filter(|&&l| l < 0.0).sum::<f64>()
}

pub fn entropy2(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 1e-300).map(|p| p * p.log2()).sum::<f64>()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// Random symmetric matrix with entries in `[-1, 1]`.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Dense {
    let mut m = zeros(n);
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-1.0..1.0);
            m[i * n + j] = x;
            m[j * n + i] = x;
        }
    }
    m
}
