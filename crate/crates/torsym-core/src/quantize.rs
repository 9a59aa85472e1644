//! Operators from discrete symbols: application to functions, the dense
//! matrix realization on the modes `|k|_inf <= K`, symbol extraction,
//! translation conjugation, algebra operations, and the `C_p` norm bound.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::grid::TorusGrid;
use crate::index::{freq_box, FreqIndex};
use crate::lattice::{c_p_constant, LatticeSum};
use crate::matrix::{CMatrix, NormEstimate, NORM_ITERATION_CAP};
use crate::periodic::PeriodicFunction;
use crate::symbol::DiscreteSymbol;
use crate::DEFAULT_OVERSAMPLE;

/// Largest tolerated relative coefficient magnitude on the outermost
/// frequency shell of a symbol entry.  Coefficients that large at the grid
/// boundary mean the grid is aliasing frequency content the matrix
/// realization would then misattribute to interior modes.
pub const ALIAS_REL_TOL: f64 = 1e-6;

/// The matrix of an operator restricted to the Fourier modes
/// `|k|_inf <= K`, rows and columns in graded-lex frequency order.
/// Entry `(l, k)` is the coefficient of `e_l` in `A e_k`, divided by
/// `(2 pi)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    grid: TorusGrid,
    cutoff: i64,
    matrix: CMatrix,
    indices: Vec<FreqIndex>,
    positions: BTreeMap<Vec<i64>, usize>,
}

/// One `C_p` norm-bound check: `measured <= C_p * sup |(1-Lap)^p a_j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormBoundRecord {
    pub p: u32,
    pub matrix_cutoff: i64,
    pub c_p: LatticeSum,
    /// `sup_{j,x} |(1-Lap)^p a_j(x)|`.
    pub sup_term: f64,
    pub bound: f64,
    pub measured: f64,
    /// Eigen-residual of the measured norm (power iteration certificate).
    pub measured_residual: f64,
    pub slack: f64,
}

fn index_positions(indices: &[FreqIndex]) -> BTreeMap<Vec<i64>, usize> {
    indices
        .iter()
        .enumerate()
        .map(|(p, j)| (j.components().to_vec(), p))
        .collect()
}

impl TruncatedOperator {
    /// Wrap an existing matrix; its side must be `(2K+1)^n`.
    pub fn from_matrix(grid: TorusGrid, cutoff: i64, matrix: CMatrix) -> CoreResult<Self> {
        let indices = freq_box(grid.dimension(), cutoff);
        if matrix.rows() != indices.len() || matrix.cols() != indices.len() {
            return Err(CoreError::DimensionMismatch { expected: (indices.len()).to_string(), got: (matrix.rows()).to_string() });
        }
        if !matrix.all_finite() {
            return Err(CoreError::InvalidArgument("matrix has non-finite entries".into()));
        }
        let positions = index_positions(&indices);
        Ok(TruncatedOperator { grid, cutoff, matrix, indices, positions })
    }

    pub fn identity(grid: TorusGrid, cutoff: i64) -> Self {
        let indices = freq_box(grid.dimension(), cutoff);
        let positions = index_positions(&indices);
        let matrix = CMatrix::identity(indices.len());
        TruncatedOperator { grid, cutoff, matrix, indices, positions }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn side(&self) -> usize {
        self.indices.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Row/column frequencies in storage order.
    pub fn indices(&self) -> &[FreqIndex] {
        &self.indices
    }

    pub fn entry(&self, l: &FreqIndex, k: &FreqIndex) -> CoreResult<Complex64> {
        let r = self.position(l)?;
        let c = self.position(k)?;
        Ok(self.matrix.get(r, c))
    }

    pub fn position(&self, j: &FreqIndex) -> CoreResult<usize> {
        self.positions.get(j.components()).copied().ok_or_else(|| {
            CoreError::InvalidArgument(format!("frequency {j} outside operator box K={}", self.cutoff))
        })
    }

    /// `(T_y A T_{-y})_{l,k} = e^{-i(l-k).y} A_{l,k}`.
    pub fn conjugate_translation(&self, y: &[f64]) -> CoreResult<Self> {
        if y.len() != self.grid.dimension() {
            return Err(CoreError::DimensionMismatch { expected: (self.grid.dimension()).to_string(), got: (y.len()).to_string() });
        }
        // phase per index, applied as diagonal unitaries on both sides
        let phases: Vec<Complex64> = self
            .indices
            .iter()
            .map(|j| {
                let dot = j.dot(y).expect("dimension checked");
                Complex64::new(0.0, -dot).exp()
            })
            .collect();
        let side = self.side();
        let matrix = CMatrix::from_fn(side, side, |r, c| {
            self.matrix.get(r, c) * phases[r] * phases[c].conj()
        });
        Ok(TruncatedOperator { matrix, ..self.clone() })
    }

    pub fn compose(&self, other: &Self) -> CoreResult<Self> {
        self.check_compatible(other)?;
        let matrix = self.matrix.mul(&other.matrix)?;
        Ok(TruncatedOperator { matrix, ..self.clone() })
    }

    pub fn adjoint(&self) -> Self {
        TruncatedOperator { matrix: self.matrix.adjoint(), ..self.clone() }
    }

    pub fn add_scaled(&self, other: &Self, s: Complex64) -> CoreResult<Self> {
        self.check_compatible(other)?;
        let mut matrix = self.matrix.clone();
        matrix.add_scaled(&other.matrix, s)?;
        Ok(TruncatedOperator { matrix, ..self.clone() })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        TruncatedOperator { matrix: self.matrix.scale(s), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> CoreResult<Self> {
        self.check_compatible(other)?;
        let matrix = self.matrix.sub(&other.matrix)?;
        Ok(TruncatedOperator { matrix, ..self.clone() })
    }

    fn check_compatible(&self, other: &Self) -> CoreResult<()> {
        self.grid.check_same(&other.grid)?;
        if self.cutoff != other.cutoff {
            return Err(CoreError::InvalidArgument(format!(
                "cutoff mismatch: K={} vs K={}",
                self.cutoff, other.cutoff
            )));
        }
        Ok(())
    }

    /// Largest singular value with the certified tolerance.
    pub fn operator_norm(&self, tol: f64, seed: u64) -> CoreResult<f64> {
        self.matrix.operator_norm(tol, seed)
    }

    /// Best-effort norm estimate with residual.
    pub fn norm_estimate(&self, tol: f64, seed: u64) -> CoreResult<NormEstimate> {
        self.matrix.operator_norm_estimate(tol, NORM_ITERATION_CAP, seed)
    }

    /// Dense inverse; returns the operator and the pivot-growth
    /// conditioning proxy from the LU factorization.
    pub fn inverse(&self) -> CoreResult<(Self, f64)> {
        let (matrix, growth) = self.matrix.lu_inverse()?;
        Ok((TruncatedOperator { matrix, ..self.clone() }, growth))
    }

    /// Apply to the coefficient vector of `u` restricted to the box.
    pub fn apply_function(&self, u: &PeriodicFunction) -> CoreResult<PeriodicFunction> {
        u.grid().check_same(&self.grid)?;
        let two_pi_n = self.grid.weight() * libm::pow(self.grid.points_per_dim() as f64, self.grid.dimension() as f64);
        let v: Vec<Complex64> = self.indices.iter().map(|k| u.coeff_or_zero(k)).collect();
        let av = self.matrix.mul_vec(&v)?;
        let mut out = PeriodicFunction::zero(self.grid);
        for (pos, l) in self.indices.iter().enumerate() {
            // column convention: A e_k = sum_l M_{l,k} e_l, and e_l has
            // hat coefficient (2 pi)^n at l
            out.accumulate(&PeriodicFunction::exponential(self.grid, l)?, av[pos] / two_pi_n)?;
        }
        Ok(out)
    }

    /// Read the symbol back off the matrix: `a_j` has hat coefficient
    /// `(2 pi)^n M_{j+m, j}` at mode `m`. Modes falling outside the box
    /// are zero. Requires `j_out <= K`.
    pub fn extract_symbol(&self, j_out: i64) -> CoreResult<DiscreteSymbol> {
        if j_out > self.cutoff {
            return Err(CoreError::InvalidArgument(format!(
                "extraction cutoff J={j_out} exceeds matrix cutoff K={}",
                self.cutoff
            )));
        }
        let two_pi_n = libm::pow(core::f64::consts::TAU, self.grid.dimension() as f64);
        DiscreteSymbol::from_fn(self.grid, j_out, |j| {
            let col = self.position(j)?;
            let f = PeriodicFunction::from_coeff_fn(self.grid, |m| {
                match self.positions.get(j.add(m).components()) {
                    Some(&row) => self.matrix.get(row, col) * two_pi_n,
                    None => Complex64::new(0.0, 0.0),
                }
            });
            Ok(f)
        })
    }

    /// Extraction keeping only entry modes `|m|_inf <= window`; requires
    /// `j_out + window <= K` so every kept mode is inside the box.
    pub fn extract_symbol_windowed(&self, j_out: i64, window: i64) -> CoreResult<DiscreteSymbol> {
        if j_out + window > self.cutoff {
            return Err(CoreError::InvalidArgument(format!(
                "extraction needs J + window <= K: {j_out} + {window} > {}",
                self.cutoff
            )));
        }
        Ok(self.extract_symbol(j_out)?.band_limit_entries(window))
    }
}

/// Fraction of `u`'s coefficient energy on modes outside `|j|_inf <= J`.
pub fn out_of_band_fraction(s: &DiscreteSymbol, u: &PeriodicFunction) -> f64 {
    let total = u.coeff_energy();
    if total == 0.0 {
        return 0.0;
    }
    let inside = u.band_limit(s.cutoff()).coeff_energy();
    ((total - inside) / total).max(0.0)
}

/// `A u = (2 pi)^(-n) sum_{|j|_inf <= J} a_j e_j u_hat_j`, with
/// anti-aliased products through the coefficient-shift identity
/// `a_j e_j = shift_modes(a_j, j)`.
pub fn apply(s: &DiscreteSymbol, u: &PeriodicFunction) -> CoreResult<PeriodicFunction> {
    u.grid().check_same(s.grid())?;
    let inv_two_pi_n = libm::pow(core::f64::consts::TAU, -(s.dimension() as f64));
    let mut out = PeriodicFunction::zero(*s.grid());
    for (j, a) in s.iter() {
        let uhat = u.coeff_or_zero(j);
        if uhat.norm_sqr() == 0.0 {
            continue;
        }
        out.accumulate(&a.shift_modes(j), uhat * inv_two_pi_n)?;
    }
    Ok(out)
}

/// Matrix realization of `Op(a_j)` on the modes `|k|_inf <= K`.
/// Preconditions: `K <= J`, `2K <= N/2`, and every entry's spectrum has
/// decayed below `ALIAS_REL_TOL` by the grid boundary (no aliasing).
pub fn to_matrix(s: &DiscreteSymbol, k_cut: i64) -> CoreResult<TruncatedOperator> {
    if k_cut > s.cutoff() {
        return Err(CoreError::InvalidArgument(format!(
            "matrix cutoff K={k_cut} exceeds symbol cutoff J={}",
            s.cutoff()
        )));
    }
    let half = (s.grid().points_per_dim() / 2) as i64;
    if 2 * k_cut > half {
        return Err(CoreError::InvalidArgument(format!(
            "matrix cutoff K={k_cut} needs modes out to 2K > N/2 = {half}"
        )));
    }
    let leak = s.iter().map(|(_, a)| a.boundary_leakage()).fold(0.0, f64::max);
    if leak > ALIAS_REL_TOL {
        return Err(CoreError::InvalidArgument(format!(
            "aliasing: relative coefficient magnitude {leak:.3e} at the grid \
             boundary exceeds {ALIAS_REL_TOL:.0e}; increase N"
        )));
    }
    let indices = freq_box(s.dimension(), k_cut);
    let inv_two_pi_n = libm::pow(core::f64::consts::TAU, -(s.dimension() as f64));
    let side = indices.len();
    let mut matrix = CMatrix::zeros(side, side);
    for (col, k) in indices.iter().enumerate() {
        let a = s.entry(k)?;
        for (row, l) in indices.iter().enumerate() {
            let m = l.sub(k);
            matrix.set(row, col, a.coeff_or_zero(&m) * inv_two_pi_n);
        }
    }
    TruncatedOperator::from_matrix(*s.grid(), k_cut, matrix)
}

/// Check the lattice norm bound: measured truncated norm against
/// `C_p * sup_{j,x} |(1-Lap)^p a_j|`.
pub fn norm_bound_check(
    s: &DiscreteSymbol,
    p: u32,
    k_cut: i64,
    norm_tol: f64,
    seed: u64,
) -> CoreResult<NormBoundRecord> {
    let c_p = c_p_constant(s.dimension(), p)?;
    let mut sup_term = 0.0f64;
    for (_, a) in s.iter() {
        sup_term = sup_term.max(a.one_minus_laplacian_pow(p).sup_norm(DEFAULT_OVERSAMPLE));
    }
    let bound = c_p.value * sup_term;
    let op = to_matrix(s, k_cut)?;
    let est = op.norm_estimate(norm_tol, seed)?;
    Ok(NormBoundRecord {
        p,
        matrix_cutoff: k_cut,
        c_p,
        sup_term,
        bound,
        measured: est.value,
        measured_residual: est.residual,
        slack: bound - est.value,
    })
}
