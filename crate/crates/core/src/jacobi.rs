//! Cyclic Jacobi eigenvalue iteration for small dense Hermitian matrices.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::DensityError;

/// Sweep cap before reporting non-convergence.
pub const MAX_SWEEPS: usize = 30;
/// Convergence when the off-diagonal Frobenius norm is at most `TOL·(1 + |trace|)`.
pub const CONVERGENCE_TOL: f64 = 1e-13;
/// Eigenvalues of positive semidefinite input above `-NEGATIVE_SLACK` are clamped to zero.
pub const NEGATIVE_SLACK: f64 = 1e-10;

/// Dense row-major Hermitian matrix. Only Hermitian input is meaningful; this is not checked.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n, "data length must be n*n");
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i].re).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<JacobiResult, DensityError> {
        let mut work = self.data.clone();
        let mut out = alloc::vec![0.0; self.n];
        let stats = jacobi_in_place(self.n, &mut work, &mut out)?;
        Ok(JacobiResult { eigenvalues: out, sweeps: stats.sweeps, off_diagonal: stats.off_diagonal })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiResult {
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm at termination.
    pub off_diagonal: f64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct JacobiStats {
    pub sweeps: usize,
    pub off_diagonal: f64,
}

fn off_diagonal_norm(n: usize, a: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += a[p * n + q].norm_sqr();
        }
    }
    libm::sqrt(2.0 * s)
}

/// Diagonalizes `a` (row-major `n×n`, overwritten) and writes sorted eigenvalues to `out`.
pub(crate) fn jacobi_in_place(n: usize, a: &mut [Complex64], out: &mut [f64]) -> Result<JacobiStats, DensityError> {
    let trace: f64 = (0..n).map(|i| a[i * n + i].re).sum();
    let tol = CONVERGENCE_TOL * (1.0 + trace.abs());
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(n, a);
        if off <= tol {
            for i in 0..n {
                out[i] = a[i * n + i].re;
            }
            out.sort_unstable_by(f64::total_cmp);
            return Ok(JacobiStats { sweeps, off_diagonal: off });
        }
        if sweeps == MAX_SWEEPS {
            return Err(DensityError::NoConvergence { off_diagonal: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(n, a, p, q);
            }
        }
    }
}

/// Annihilates `a[p][q]` with the unitary `diag(1, ē)·[[c, s], [−s, c]]` acting on the `(p, q)` plane.
fn rotate(n: usize, a: &mut [Complex64], p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = libm::sqrt(apq.norm_sqr());
    if mag == 0.0 {
        return;
    }
    let e = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;
    let e_bar = e.conj();

    // A ← A·G on columns p, q.
    for r in 0..n {
        let x = a[r * n + p];
        let y = a[r * n + q];
        a[r * n + p] = x * c - y * e_bar * s;
        a[r * n + q] = x * s + y * e_bar * c;
    }
    // A ← Gᴴ·A on rows p, q.
    for r in 0..n {
        let x = a[p * n + r];
        let y = a[q * n + r];
        a[p * n + r] = x * c - y * e * s;
        a[q * n + r] = x * s + y * e * c;
    }
    a[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
}

/// Sorted, non-negative eigenvalues of a positive semidefinite Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
}

impl HermitianSpectrum {
    /// Clamps values in `[-NEGATIVE_SLACK, 0)` to zero; keeps anything more negative as is.
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        clamp_small_negatives(&mut eigenvalues);
        Self { eigenvalues }
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub(crate) fn clamp_small_negatives(values: &mut [f64]) {
    for v in values {
        if *v < 0.0 && *v >= -NEGATIVE_SLACK {
            *v = 0.0;
        }
    }
}
