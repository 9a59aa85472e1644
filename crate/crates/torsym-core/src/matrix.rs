//! Dense complex matrices: the desk-scale home of truncated operators.
//! Row-major storage, LU inversion with partial pivoting, and a seeded
//! power iteration for the largest singular value.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::rng::SplitMix64;

/// Default iteration cap for the singular-value power iteration.
pub const NORM_ITERATION_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Certified largest-singular-value estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    /// Relative eigen-residual of the final Rayleigh pair of `A*A`.
    pub residual: f64,
    pub iterations: usize,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_same_shape(&self, other: &Self) -> CoreResult<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CoreError::DimensionMismatch { expected: (self.rows * self.cols).to_string(), got: (other.rows * other.cols).to_string() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> CoreResult<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(CMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> CoreResult<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(CMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Self, s: Complex64) -> CoreResult<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> CoreResult<Self> {
        if self.cols != other.rows {
            return Err(CoreError::DimensionMismatch { expected: (self.cols).to_string(), got: (other.rows).to_string() });
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row_out = &mut out.data[r * other.cols..(r + 1) * other.cols];
                let row_b = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> CoreResult<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(CoreError::DimensionMismatch { expected: (self.cols).to_string(), got: (v.len()).to_string() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[r] = acc;
        }
        Ok(out)
    }

    /// `A* v` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> CoreResult<Vec<Complex64>> {
        if v.len() != self.rows {
            return Err(CoreError::DimensionMismatch { expected: (self.rows).to_string(), got: (v.len()).to_string() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let x = v[r];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * x;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest singular value: power iteration on `A*A` with a seeded
    /// start vector. Errors if the relative eigen-residual has not
    /// reached `tol` within the iteration cap, carrying the best estimate.
    pub fn operator_norm(&self, tol: f64, seed: u64) -> CoreResult<f64> {
        let est = self.operator_norm_estimate(tol, NORM_ITERATION_CAP, seed)?;
        if est.residual > tol {
            return Err(CoreError::NormNotConverged {
                estimate: est.value,
                residual: est.residual,
                iterations: est.iterations,
            });
        }
        Ok(est.value)
    }

    /// Power iteration returning the best estimate and its residual even
    /// when `tol` is not reached within `cap` iterations. Errors only on
    /// invalid input or non-finite data.
    pub fn operator_norm_estimate(&self, tol: f64, cap: usize, seed: u64) -> CoreResult<NormEstimate> {
        if tol <= 0.0 {
            return Err(CoreError::InvalidArgument("tolerance must be > 0".into()));
        }
        if !self.all_finite() {
            return Err(CoreError::InvalidArgument("matrix has non-finite entries".into()));
        }
        if self.rows == 0 || self.cols == 0 {
            return Ok(NormEstimate { value: 0.0, residual: 0.0, iterations: 0 });
        }

        let mut rng = SplitMix64::new(seed);
        let mut v: Vec<Complex64> =
            (0..self.cols).map(|_| Complex64::new(rng.next_sym(), rng.next_sym())).collect();
        normalize(&mut v);

        let mut lambda = 0.0f64;
        let mut residual = f64::INFINITY;
        let mut iterations = 0usize;
        while iterations < cap {
            iterations += 1;
            // w = A*A v
            let av = self.mul_vec(&v)?;
            let w = self.adjoint_mul_vec(&av)?;
            let wn = norm(&w);
            if wn == 0.0 {
                // v in the kernel of A; for a nonzero matrix restart once
                // from a fresh vector, otherwise the norm is 0
                if self.max_abs() == 0.0 {
                    return Ok(NormEstimate { value: 0.0, residual: 0.0, iterations });
                }
                v = (0..self.cols)
                    .map(|_| Complex64::new(rng.next_sym(), rng.next_sym()))
                    .collect();
                normalize(&mut v);
                continue;
            }
            // Rayleigh quotient with the normalized v: lambda = <v, w>
            lambda = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
            // residual of (lambda, v) as an eigenpair of A*A, relative
            let mut r2 = 0.0f64;
            for (wi, vi) in w.iter().zip(&v) {
                r2 += (wi - vi * lambda).norm_sqr();
            }
            residual = if lambda > 0.0 { libm::sqrt(r2) / lambda } else { libm::sqrt(r2) };
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / wn;
            }
            if residual <= tol {
                break;
            }
        }
        Ok(NormEstimate { value: libm::sqrt(lambda.max(0.0)), residual, iterations })
    }

    /// Inverse by LU with partial pivoting. Returns the inverse and the
    /// growth ratio `max|pivot| / min|pivot|`, a cheap conditioning proxy.
    pub fn lu_inverse(&self) -> CoreResult<(Self, f64)> {
        if self.rows != self.cols {
            return Err(CoreError::InvalidArgument(format!(
                "cannot invert {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut max_piv = 0.0f64;
        let mut min_piv = f64::INFINITY;

        for col in 0..n {
            let mut best = col;
            let mut best_abs = lu[col * n + col].norm();
            for r in col + 1..n {
                let a = lu[r * n + col].norm();
                if a > best_abs {
                    best_abs = a;
                    best = r;
                }
            }
            if best_abs < 1e-300 {
                return Err(CoreError::Singular(format!("zero pivot at column {col}")));
            }
            if best != col {
                for c in 0..n {
                    lu.swap(col * n + c, best * n + c);
                }
                perm.swap(col, best);
            }
            max_piv = max_piv.max(best_abs);
            min_piv = min_piv.min(best_abs);
            let piv = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / piv;
                lu[r * n + col] = f;
                for c in col + 1..n {
                    let sub = f * lu[col * n + c];
                    lu[r * n + c] -= sub;
                }
            }
        }

        // solve A X = I column by column through the factorization
        let mut inv = CMatrix::zeros(n, n);
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for col in 0..n {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = if perm[r] == col { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            }
            for r in 1..n {
                let mut acc = y[r];
                for c in 0..r {
                    acc -= lu[r * n + c] * y[c];
                }
                y[r] = acc;
            }
            for r in (0..n).rev() {
                let mut acc = y[r];
                for c in r + 1..n {
                    acc -= lu[r * n + c] * y[c];
                }
                y[r] = acc / lu[r * n + r];
            }
            for r in 0..n {
                inv.set(r, col, y[r]);
            }
        }
        Ok((inv, max_piv / min_piv))
    }
}

fn norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    } else if let Some(first) = v.first_mut() {
        *first = Complex64::new(1.0, 0.0);
    }
}
