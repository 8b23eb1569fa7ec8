//! Dense real symmetric matrices and their eigendecomposition.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Sweep cap of the Jacobi iteration.
pub const MAX_SWEEPS: usize = 30;
/// Converged when the off-diagonal Frobenius norm drops below this
/// fraction of `‖A‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Square symmetric matrix, stored row-major. Writes go through
/// [`set`](Self::set), which updates both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds from row-major data, rejecting anything not exactly symmetric.
    pub fn from_rows(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::param("data", "length must be dim * dim"));
        }
        for i in 0..dim {
            for j in 0..i {
                if data[i * dim + j].to_bits() != data[j * dim + i].to_bits() {
                    return Err(Error::param("data", "matrix is not symmetric"));
                }
            }
        }
        Ok(SymMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }
}

fn off_diagonal_norm(data: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for v in &data[i * n + i + 1..(i + 1) * n] {
            sum += v * v;
        }
    }
    libm::sqrt(2.0 * sum)
}

/// `A = V Λ Vᵀ` with eigenvalues ascending and eigenvectors in the columns
/// of `V` (row-major, `dim × dim`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    eigenvectors: Vec<f64>,
    dim: usize,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component `i` of eigenvector `k`.
    pub fn vector_component(&self, i: usize, k: usize) -> f64 {
        self.eigenvectors[i * self.dim + k]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.vector_component(i, k)).collect()
    }

    /// `V` in row-major order.
    pub fn eigenvectors(&self) -> &[f64] {
        &self.eigenvectors
    }

    /// `‖A − V Λ Vᵀ‖_F / ‖A‖_F` (absolute when `A = 0`).
    pub fn reconstruction_error(&self, a: &SymMatrix) -> f64 {
        let n = self.dim;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n)
                    .map(|k| {
                        self.vector_component(i, k)
                            * self.eigenvalues[k]
                            * self.vector_component(j, k)
                    })
                    .sum();
                let d = a.get(i, j) - r;
                sum += d * d;
            }
        }
        let norm = a.frobenius_norm();
        let err = libm::sqrt(sum);
        if norm > 0.0 {
            err / norm
        } else {
            err
        }
    }

    /// `max |VᵀV − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in p..n {
                let dot: f64 = (0..n)
                    .map(|i| self.vector_component(i, p) * self.vector_component(i, q))
                    .sum();
                let target = if p == q { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Each sweep visits every `(p, q)` pair above the diagonal in row order and
/// applies the rotation that zeroes `a_pq`, accumulating the rotations into
/// `V`. Iteration stops when the off-diagonal Frobenius norm falls below
/// `1e-14 ‖A‖_F`; after [`MAX_SWEEPS`] sweeps it fails with
/// [`Error::NoConvergence`].
pub fn symmetric_eigen(a: &SymMatrix) -> Result<EigenDecomposition> {
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("a", "entries must be finite"));
    }
    let n = a.dim;
    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&m, n) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let eigenvalues = order.iter().map(|&k| m[k * n + k]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[i * n + col] = v[i * n + k];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        dim: n,
    })
}

/// `A ← JᵀAJ`, `V ← VJ` for the rotation in the `(p, q)` plane that
/// annihilates `a_pq`.
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + libm::sqrt(1.0 + theta * theta));
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        m[k * n + p] = new_kp;
        m[p * n + k] = new_kp;
        m[k * n + q] = new_kq;
        m[q * n + k] = new_kq;
    }
    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;

    for row in v.chunks_exact_mut(n) {
        let vp = row[p];
        let vq = row[q];
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}
