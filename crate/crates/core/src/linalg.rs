//! Real symmetric linear algebra: tridiagonal and dense eigensolvers, partial
//! transpose and spectral matrix functions.
//!
//! Every matrix the engine touches is real in the standard product basis, so
//! nothing here handles complex entries.

use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("tridiagonal matrix needs dim >= 1 and dim - 1 off-diagonal entries (got {diag} and {offdiag})")]
    MalformedTridiag { diag: usize, offdiag: usize },
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
}

impl<T: Real> SymTridiag<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self, LinalgError> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(LinalgError::MalformedTridiag {
                diag: diag.len(),
                offdiag: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    pub fn to_dense(&self) -> SymMatrix<T> {
        let n = self.dim();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, self.diag[i]);
        }
        for (i, &e) in self.offdiag.iter().enumerate() {
            m.set(i, i + 1, e);
        }
        m
    }

    pub fn max_abs(&self) -> T {
        self.diag
            .iter()
            .chain(self.offdiag.iter())
            .fold(T::zero(), |acc, x| acc.max(x.abs()))
    }
}

/// Dense real symmetric matrix, row-major.
///
/// Symmetry is exact: every mutator writes both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds from the upper triangle `f(i, j)`, `i <= j`, mirrored below.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rejects input that is not bitwise symmetric.
    pub fn from_row_major(dim: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != dim * dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if data[i * dim + j] != data[j * dim + i] {
                    return Err(LinalgError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { dim, data })
    }

    /// Outer product `v vᵀ`.
    pub fn outer(v: &[T]) -> Self {
        Self::from_upper_fn(v.len(), |i, j| v[i] * v[j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        let x = self.get(i, j) + v;
        self.set(i, j, x);
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| *a * *b)
                    .sum()
            })
            .collect()
    }

    /// General (not necessarily symmetric) product, row-major.
    pub fn matmul(&self, other: &Self) -> Vec<T> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = out[i * n + j] + a * other.get(k, j);
                }
            }
        }
        out
    }

    /// `A B A`, symmetrized against rounding.
    pub fn sandwich(&self, middle: &Self) -> Self {
        let n = self.dim;
        let ab = self.matmul(middle);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut x = T::zero();
                let mut y = T::zero();
                for k in 0..n {
                    x = x + ab[i * n + k] * self.get(k, j);
                    y = y + ab[j * n + k] * self.get(k, i);
                }
                out.set(i, j, (x + y) * T::lit(0.5));
            }
        }
        out
    }

    /// `D A D` for diagonal `D`.
    pub fn diag_congruence(&self, d: &[T]) -> Self {
        assert_eq!(d.len(), self.dim, "dimension mismatch");
        Self::from_upper_fn(self.dim, |i, j| d[i] * self.get(i, j) * d[j])
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for a in 0..na {
            for a2 in 0..na {
                let x = self.get(a, a2);
                for b in 0..nb {
                    for b2 in 0..nb {
                        out.data[(a * nb + b) * n + a2 * nb + b2] = x * other.get(b, b2);
                    }
                }
            }
        }
        out
    }

    /// Smallest eigenvalue of `D^{-1/2} A D^{-1/2}` with `D = diag(A)`.
    ///
    /// By Sylvester's law of inertia this has the sign of `λ_min(A)`, but it is
    /// computed on a matrix with unit diagonal, so it stays resolvable when the
    /// entries of `A` span many orders of magnitude (low-temperature states).
    /// Rows that are identically zero are dropped; a non-positive diagonal with
    /// any non-zero coupling certifies indefiniteness and yields `-1`.
    pub fn scaled_min_eigenvalue(&self) -> T {
        let n = self.dim;
        let mut keep = Vec::with_capacity(n);
        for i in 0..n {
            let d = self.get(i, i);
            if d > T::zero() {
                keep.push(i);
            } else if d < T::zero() || (0..n).any(|j| self.get(i, j) != T::zero()) {
                return -T::one();
            }
        }
        if keep.is_empty() {
            return T::zero();
        }
        let scale: Vec<T> = keep.iter().map(|&i| self.get(i, i).sqrt().recip()).collect();
        let sub = Self::from_upper_fn(keep.len(), |a, b| {
            self.get(keep[a], keep[b]) * scale[a] * scale[b]
        });
        let min = eig_sym_dense(&sub).eigenvalues()[0];
        if keep.len() < n {
            min.min(T::zero())
        } else {
            min
        }
    }

    /// `(sign, ln|det A|)` via LU with partial pivoting; `sign == 0` for a
    /// singular matrix. A strictly positive diagonal is equilibrated first.
    pub fn log_abs_det(&self) -> (T, T) {
        let n = self.dim;
        let diag = self.diagonal();
        if diag.iter().all(|&d| d > T::zero()) {
            let s: Vec<T> = diag.iter().map(|d| d.sqrt().recip()).collect();
            let log_scale: T = diag.iter().map(|d| d.ln()).sum();
            let a = (0..n * n).map(|k| self.data[k] * s[k / n] * s[k % n]).collect();
            let (sign, ld) = lu_log_abs_det(a, n);
            (sign, ld + log_scale)
        } else {
            lu_log_abs_det(self.data.clone(), n)
        }
    }
}

fn lu_log_abs_det<T: Real>(mut a: Vec<T>, n: usize) -> (T, T) {
    let mut sign = T::one();
    let mut log_abs = T::zero();
    for col in 0..n {
        let (piv, pmax) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .fold((col, -T::one()), |best, x| if x.1 > best.1 { x } else { best });
        if pmax == T::zero() {
            return (T::zero(), T::neg_infinity());
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            sign = -sign;
        }
        let p = a[col * n + col];
        if p < T::zero() {
            sign = -sign;
        }
        log_abs = log_abs + p.abs().ln();
        for r in (col + 1)..n {
            let f = a[r * n + col] / p;
            if f != T::zero() {
                for k in (col + 1)..n {
                    a[r * n + k] = a[r * n + k] - f * a[col * n + k];
                }
            }
        }
    }
    (sign, log_abs)
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    /// Row-major `n x n`; column `k` is the eigenvector of `eigenvalues[k]`.
    vectors: Vec<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    #[inline]
    pub fn component(&self, row: usize, k: usize) -> T {
        self.vectors[row * self.dim() + k]
    }

    pub fn vector(&self, k: usize) -> Vec<T> {
        (0..self.dim()).map(|i| self.component(i, k)).collect()
    }

    /// Spectral matrix function `V f(Λ) Vᵀ`.
    pub fn map(&self, mut f: impl FnMut(T) -> T) -> SymMatrix<T> {
        let weights: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.weighted_sum(&weights)
    }

    /// `Σ_k w_k v_k v_kᵀ`.
    pub fn weighted_sum(&self, weights: &[T]) -> SymMatrix<T> {
        let n = self.dim();
        SymMatrix::from_upper_fn(n, |i, j| {
            weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != T::zero())
                .map(|(k, &w)| w * self.component(i, k) * self.component(j, k))
                .sum()
        })
    }

    pub fn reconstruct(&self) -> SymMatrix<T> {
        self.map(|l| l)
    }

    /// `max |VᵀV − I|`.
    pub fn orthonormality_error(&self) -> T {
        let n = self.dim();
        let mut err = T::zero();
        for a in 0..n {
            for b in a..n {
                let dot: T = (0..n).map(|i| self.component(i, a) * self.component(i, b)).sum();
                let target = if a == b { T::one() } else { T::zero() };
                err = err.max((dot - target).abs());
            }
        }
        err
    }

    fn sorted(eigenvalues: Vec<T>, z: Vec<T>) -> Self {
        let n = eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eigenvalues[a]
                .partial_cmp(&eigenvalues[b])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut vectors = vec![T::zero(); n * n];
        for (new, &old) in order.iter().enumerate() {
            for i in 0..n {
                vectors[i * n + new] = z[i * n + old];
            }
        }
        Self {
            eigenvalues: order.iter().map(|&k| eigenvalues[k]).collect(),
            vectors,
        }
    }
}

/// Implicit QL with Wilkinson-type shifts on a tridiagonal matrix, accumulating
/// the rotations into `z` (row-major, `n x n`).
///
/// `e[i]` couples `d[i]` and `d[i+1]`; `e` has length `n` with `e[n-1]` unused.
fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T], z: &mut [T]) {
    let n = d.len();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 * n.max(1) {
                // Unreachable for finite input; keep the partially converged result.
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let signed_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + signed_r);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zf = z[k * n + i + 1];
                    let zi = z[k * n + i];
                    z[k * n + i + 1] = s * zi + c * zf;
                    z[k * n + i] = c * zi - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}

/// Full spectral decomposition of a symmetric tridiagonal matrix.
pub fn eig_sym_tridiag<T: Real>(t: &SymTridiag<T>) -> SpectralDecomposition<T> {
    let n = t.dim();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(T::zero());
    let mut z = SymMatrix::<T>::identity(n).data;
    tridiagonal_ql(&mut d, &mut e, &mut z);
    let mut spec = SpectralDecomposition::sorted(d, z);
    twisted_refine(t, &mut spec);
    spec
}

/// Recomputes well-separated eigenvectors from a twisted factorization of
/// `T − λI`, twisted at the largest component.
///
/// Each component becomes a product of ratios `−e / pivot`, so small
/// components (strongly graded blocks) carry relative rather than absolute
/// accuracy. Vectors of eigenvalues closer than `1e-3 ‖T‖` to a neighbour, or
/// whose factorization hits a zero pivot, keep the QL result.
fn twisted_refine<T: Real>(t: &SymTridiag<T>, spec: &mut SpectralDecomposition<T>) {
    let n = t.dim();
    if n < 2 || t.offdiag.iter().any(|&x| x == T::zero()) {
        return;
    }
    let norm = t.max_abs();
    let lam = spec.eigenvalues.clone();
    let (d, e) = (&t.diag, &t.offdiag);
    for k in 0..n {
        let gap = (0..n)
            .filter(|&j| j != k)
            .map(|j| (lam[j] - lam[k]).abs())
            .fold(T::infinity(), T::min);
        if gap < T::lit(1e-3) * norm {
            continue;
        }
        let old: Vec<T> = (0..n).map(|i| spec.vectors[i * n + k]).collect();
        let r = (0..n)
            .max_by(|&a, &b| old[a].abs().partial_cmp(&old[b].abs()).unwrap_or(Ordering::Equal))
            .unwrap_or(0);
        let mut top = vec![T::zero(); n];
        let mut bottom = vec![T::zero(); n];
        for j in 0..r {
            top[j] = d[j] - lam[k] - if j > 0 { e[j - 1] * e[j - 1] / top[j - 1] } else { T::zero() };
        }
        for j in (r + 1..n).rev() {
            bottom[j] = d[j] - lam[k] - if j + 1 < n { e[j] * e[j] / bottom[j + 1] } else { T::zero() };
        }
        let pivots_ok = top[..r].iter().chain(&bottom[r + 1..]).all(|&p| p != T::zero() && p.is_finite());
        if !pivots_ok {
            continue;
        }
        let mut v = vec![T::zero(); n];
        v[r] = T::one();
        for j in (0..r).rev() {
            v[j] = -e[j] * v[j + 1] / top[j];
        }
        for j in r + 1..n {
            v[j] = -e[j - 1] * v[j - 1] / bottom[j];
        }
        let norm_v = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if !norm_v.is_finite() {
            continue;
        }
        let sign = if old[r] < T::zero() { -T::one() } else { T::one() };
        for i in 0..n {
            spec.vectors[i * n + k] = sign * v[i] / norm_v;
        }
    }
}

/// Householder reduction `A = Q T Qᵀ`; returns `(diag, offdiag, Q)` with `Q`
/// row-major.
fn householder_tridiagonalize<T: Real>(m: &SymMatrix<T>) -> (Vec<T>, Vec<T>, Vec<T>) {
    let n = m.dim();
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let scale: T = (0..=l).map(|k| a[i][k].abs()).sum();
            if scale == T::zero() {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] = a[i][k] / scale;
                    h = h + a[i][k] * a[i][k];
                }
                let mut f = a[i][l];
                let mut g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                a[i][l] = f - g;
                f = T::zero();
                for j in 0..=l {
                    a[j][i] = a[i][j] / h;
                    g = T::zero();
                    for k in 0..=j {
                        g = g + a[j][k] * a[i][k];
                    }
                    for k in (j + 1)..=l {
                        g = g + a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f = f + e[j] * a[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] = a[j][k] - (f * e[k] + g * a[i][k]);
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    if n > 0 {
        d[0] = T::zero();
        e[0] = T::zero();
    }
    for i in 0..n {
        if d[i] != T::zero() {
            for j in 0..i {
                let mut g = T::zero();
                for k in 0..i {
                    g = g + a[i][k] * a[k][j];
                }
                for k in 0..i {
                    a[k][j] = a[k][j] - g * a[k][i];
                }
            }
        }
        d[i] = a[i][i];
        a[i][i] = T::one();
        for j in 0..i {
            a[j][i] = T::zero();
            a[i][j] = T::zero();
        }
    }
    let offdiag = e.into_iter().skip(1).collect();
    let q = a.into_iter().flatten().collect();
    (d, offdiag, q)
}

/// Full spectral decomposition of a dense symmetric matrix (Householder
/// tridiagonalization followed by implicit QL).
pub fn eig_sym_dense<T: Real>(m: &SymMatrix<T>) -> SpectralDecomposition<T> {
    let n = m.dim();
    if n == 0 {
        return SpectralDecomposition {
            eigenvalues: Vec::new(),
            vectors: Vec::new(),
        };
    }
    let (mut d, mut e, mut z) = householder_tridiagonalize(m);
    e.push(T::zero());
    tridiagonal_ql(&mut d, &mut e, &mut z);
    SpectralDecomposition::sorted(d, z)
}

/// Partial transpose on the second factor of a `dim_a x dim_b` bipartition:
/// `⟨a,b|out|a′,b′⟩ = ⟨a,b′|m|a′,b⟩`.
pub fn partial_transpose<T: Real>(
    m: &SymMatrix<T>,
    dim_a: usize,
    dim_b: usize,
) -> Result<SymMatrix<T>, LinalgError> {
    let n = dim_a * dim_b;
    if m.dim() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: m.dim(),
        });
    }
    let mut data = vec![T::zero(); n * n];
    for a in 0..dim_a {
        for b in 0..dim_b {
            for a2 in 0..dim_a {
                for b2 in 0..dim_b {
                    data[(a * dim_b + b) * n + a2 * dim_b + b2] = m.get(a * dim_b + b2, a2 * dim_b + b);
                }
            }
        }
    }
    Ok(SymMatrix { dim: n, data })
}

/// Minus the sum of the negative eigenvalues.
pub fn trace_norm_negativity<T: Real>(m: &SymMatrix<T>) -> T {
    let spec = eig_sym_dense(m);
    let neg: T = spec
        .eigenvalues()
        .iter()
        .filter(|&&l| l < T::zero())
        .copied()
        .sum();
    -neg
}

/// Symmetric matrix stored entrywise as `(sign, ln|x|)`, for matrices whose
/// entries span more than the floating-point exponent range.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSymMatrix<T> {
    dim: usize,
    sign: Vec<T>,
    log_abs: Vec<T>,
}

impl<T: Real> LogSymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            sign: vec![T::zero(); dim * dim],
            log_abs: vec![T::neg_infinity(); dim * dim],
        }
    }

    pub fn from_matrix(m: &SymMatrix<T>) -> Self {
        Self {
            dim: m.dim,
            sign: m.data.iter().map(|&x| if x == T::zero() { T::zero() } else { x.signum() }).collect(),
            log_abs: m.data.iter().map(|x| x.abs().ln()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> (T, T) {
        let k = i * self.dim + j;
        (self.sign[k], self.log_abs[k])
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, sign: T, log_abs: T) {
        let (sign, log_abs) = if sign == T::zero() { (T::zero(), T::neg_infinity()) } else { (sign.signum(), log_abs) };
        for k in [i * self.dim + j, j * self.dim + i] {
            self.sign[k] = sign;
            self.log_abs[k] = log_abs;
        }
    }

    /// Same index map as [`partial_transpose`].
    pub fn partial_transpose(&self, dim_a: usize, dim_b: usize) -> Result<Self, LinalgError> {
        let n = dim_a * dim_b;
        if self.dim != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: self.dim,
            });
        }
        let mut out = Self::zeros(n);
        for a in 0..dim_a {
            for b in 0..dim_b {
                for a2 in 0..dim_a {
                    for b2 in 0..dim_b {
                        let src = (a * dim_b + b2) * n + a2 * dim_b + b;
                        let dst = (a * dim_b + b) * n + a2 * dim_b + b2;
                        out.sign[dst] = self.sign[src];
                        out.log_abs[dst] = self.log_abs[src];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Symmetric Ruiz equilibration in the log domain.
    ///
    /// Runs at most `sweeps` sweeps. Returns `S = D A D` with every non-zero
    /// row of `S` having maximal entry close to one, together with `ln D`. Congruence preserves inertia, and
    /// `ln|det A| = ln|det S| − 2 Σ ln D`.
    pub fn equilibrate(&self, sweeps: usize) -> (SymMatrix<T>, Vec<T>) {
        let n = self.dim;
        let half = T::lit(0.5);
        let mut c = vec![T::zero(); n];
        for _ in 0..sweeps {
            let row_max: Vec<T> = (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| self.sign[i * n + j] != T::zero())
                        .map(|j| self.log_abs[i * n + j] + c[i] + c[j])
                        .fold(T::neg_infinity(), T::max)
                })
                .collect();
            let mut worst = T::zero();
            for i in 0..n {
                if row_max[i].is_finite() {
                    c[i] = c[i] - half * row_max[i];
                    worst = worst.max(row_max[i].abs());
                }
            }
            if worst < T::lit(1e-3) {
                break;
            }
        }
        let data = (0..n * n)
            .map(|k| {
                let s = self.sign[k];
                if s == T::zero() {
                    T::zero()
                } else {
                    s * (self.log_abs[k] + c[k / n] + c[k % n]).exp()
                }
            })
            .collect();
        (SymMatrix { dim: n, data }, c)
    }

    /// Index sets of the connected components of the non-zero pattern, each
    /// sorted. `A` is the direct sum of the corresponding principal blocks.
    pub fn connected_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let mut label = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            label[root] = id;
            let mut members = vec![root];
            let mut k = 0;
            while k < members.len() {
                let i = members[k];
                for j in 0..n {
                    if label[j] == usize::MAX && self.sign[i * n + j] != T::zero() {
                        label[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            blocks.push(members);
        }
        blocks
    }

    /// Principal submatrix on `idx`.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                let k = i * self.dim + j;
                out.sign[a * idx.len() + b] = self.sign[k];
                out.log_abs[a * idx.len() + b] = self.log_abs[k];
            }
        }
        out
    }

    fn dense_log_abs_det(&self) -> (T, T) {
        let (s, c) = self.equilibrate(500);
        let (sign, ld) = lu_log_abs_det(s.data, self.dim);
        let shift: T = c.iter().copied().sum();
        (sign, ld - T::lit(2.0) * shift)
    }

    /// `(sign, ln|det A|)`, block by block on the equilibrated blocks.
    pub fn log_abs_det(&self) -> (T, T) {
        self.connected_blocks()
            .iter()
            .map(|idx| self.submatrix(idx).dense_log_abs_det())
            .fold((T::one(), T::zero()), |(s, l), (bs, bl)| (s * bs, l + bl))
    }

    /// Smallest eigenvalue over the equilibrated blocks; it has the sign of
    /// `λ_min(A)`.
    pub fn min_eigenvalue_sign_proxy(&self) -> T {
        self.connected_blocks()
            .iter()
            .map(|idx| {
                let (s, _) = self.submatrix(idx).equilibrate(500);
                eig_sym_dense(&s).eigenvalues()[0]
            })
            .fold(T::infinity(), T::min)
    }
}

/// Signed `ln Σ_k s_k e^{l_k}` as `(sign, ln|sum|)`.
pub fn signed_log_sum_exp<T: Real>(terms: impl IntoIterator<Item = (T, T)>) -> (T, T) {
    let terms: Vec<(T, T)> = terms.into_iter().filter(|t| t.0 != T::zero()).collect();
    let m = terms.iter().map(|t| t.1).fold(T::neg_infinity(), T::max);
    if !m.is_finite() {
        return (T::zero(), T::neg_infinity());
    }
    let sum: T = terms.iter().map(|&(s, l)| s * (l - m).exp()).sum();
    if sum == T::zero() {
        (T::zero(), T::neg_infinity())
    } else {
        (sum.signum(), m + sum.abs().ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_matrix_blocks_follow_zero_pattern() {
        let m = SymMatrix::from_row_major(4, vec![
            2.0, 0.0, 1.0, 0.0, //
            0.0, -3.0, 0.0, 0.0, //
            1.0, 0.0, 2.0, 0.0, //
            0.0, 0.0, 0.0, 0.5,
        ])
        .unwrap();
        let l = LogSymMatrix::from_matrix(&m);
        assert_eq!(l.connected_blocks(), vec![vec![0, 2], vec![1], vec![3]]);
        let (sign, ld) = l.log_abs_det();
        assert_eq!(sign, -1.0);
        assert!(f64::abs(ld - 4.5f64.ln()) < 1e-14);
        assert!(f64::abs(l.min_eigenvalue_sign_proxy() + 1.0) < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let t = SymTridiag::new(vec![5.0], vec![]).unwrap();
        let s = eig_sym_tridiag(&t);
        assert_eq!(s.eigenvalues(), &[5.0]);
        assert_eq!(s.vector(0), vec![1.0]);
    }

    #[test]
    fn pauli_x() {
        let t = SymTridiag::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let s = eig_sym_tridiag(&t);
        assert!(f64::abs(s.eigenvalues()[0] + 1.0) < 1e-15);
        assert!(f64::abs(s.eigenvalues()[1] - 1.0) < 1e-15);
        assert!(s.orthonormality_error() < 1e-15);
    }

    #[test]
    fn malformed_tridiag() {
        assert!(SymTridiag::<f64>::new(vec![], vec![]).is_err());
        assert!(SymTridiag::new(vec![1.0, 2.0], vec![]).is_err());
    }

    #[test]
    fn identity_spectrum() {
        let s = eig_sym_dense(&SymMatrix::<f64>::identity(4));
        assert_eq!(s.eigenvalues(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn three_by_three_closed_form() {
        let m = SymMatrix::from_row_major(3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
        let s = eig_sym_dense(&m);
        let r2 = 2f64.sqrt();
        let expected = [2.0 - r2, 2.0, 2.0 + r2];
        for (a, b) in s.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let err = SymMatrix::from_row_major(2, vec![1.0, 2.0, 2.5, 1.0]).unwrap_err();
        assert_eq!(err, LinalgError::NotSymmetric { row: 0, col: 1 });
    }

    #[test]
    fn bell_partial_transpose() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = SymMatrix::outer(&[0.0, h, h, 0.0]);
        let pt = partial_transpose(&rho, 2, 2).unwrap();
        let s = eig_sym_dense(&pt);
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in s.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((trace_norm_negativity(&pt) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_transpose_dimension_mismatch() {
        let m = SymMatrix::<f64>::identity(5);
        assert!(matches!(
            partial_transpose(&m, 2, 2),
            Err(LinalgError::DimensionMismatch { expected: 4, found: 5 })
        ));
    }

    #[test]
    fn psd_has_zero_negativity() {
        let m = SymMatrix::from_diagonal(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(trace_norm_negativity(&m), 0.0);
    }

    #[test]
    fn scaled_min_eigenvalue_resolves_graded_matrix() {
        // diag(1, 1e-40) with coupling just large enough to make it indefinite.
        let mut m = SymMatrix::from_diagonal(&[1.0, 1e-40]);
        m.set(0, 1, 1.01e-20);
        assert!(m.scaled_min_eigenvalue() < 0.0);
        m.set(0, 1, 0.99e-20);
        assert!(m.scaled_min_eigenvalue() > 0.0);
    }

    #[test]
    fn log_matrix_beyond_exponent_range() {
        // [[1, e^-600], [e^-600, e^-1300]] is indefinite; e^-1300 underflows.
        let mut m = LogSymMatrix::<f64>::zeros(2);
        m.set(0, 0, 1.0, 0.0);
        m.set(0, 1, 1.0, -600.0);
        m.set(1, 1, 1.0, -1300.0);
        assert!(m.min_eigenvalue_sign_proxy() < 0.0);
        let (sign, ld) = m.log_abs_det();
        assert_eq!(sign, -1.0);
        assert!((ld + 1200.0).abs() < 1e-9);
        m.set(1, 1, 1.0, -1100.0);
        assert!(m.min_eigenvalue_sign_proxy() > 0.0);
        assert_eq!(m.log_abs_det().0, 1.0);
    }

    #[test]
    fn signed_log_sum_exp_cancels() {
        let (s, l) = signed_log_sum_exp([(1.0, 800.0), (-1.0, 800.0 + (0.5f64).ln())]);
        assert_eq!(s, 1.0);
        assert!((l - (800.0 + 0.5f64.ln())).abs() < 1e-12);
        assert_eq!(signed_log_sum_exp([(1.0, 0.0), (-1.0, 0.0)]).0, 0.0);
    }

    #[test]
    fn log_det_of_diagonal() {
        let m = SymMatrix::from_diagonal(&[2.0, -3.0, 0.5]);
        let (sign, ld) = m.log_abs_det();
        assert_eq!(sign, -1.0);
        assert!((ld - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn runs_in_single_precision() {
        let m = SymMatrix::<f32>::from_row_major(3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
        let s = eig_sym_dense(&m);
        assert!((s.eigenvalues()[1] - 2.0).abs() < 1e-5);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-5);
    }
}
