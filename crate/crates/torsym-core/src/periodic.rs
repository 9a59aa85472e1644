//! Truncated Fourier representation of smooth functions on `T^n`.
//!
//! Coefficients follow the hat convention `u_hat_k = int e_{-k} u`, with
//! synthesis `u(x) = (2 pi)^{-n} sum_k u_hat_k e^{i k . x}` over the
//! symmetric half-open box `k in {-N/2, ..., N/2 - 1}^n`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::fft;
use crate::grid::TorusGrid;
use crate::index::{FreqIndex, MultiIndex};
use crate::DEFAULT_DERIVATIVE_CAP;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    grid: TorusGrid,
    /// DFT natural layout: axis index `f in 0..N` carries frequency
    /// `f` for `f < N/2` and `f - N` otherwise; row-major over axes.
    coeffs: Vec<Complex64>,
}

impl PeriodicFunction {
    /// Build from grid samples by the trapezoid/DFT rule with weight
    /// `(2 pi / N)^n`; exact for band-limited inputs below the Nyquist box.
    pub fn analyze(grid: TorusGrid, values: &[Complex64]) -> CoreResult<Self> {
        grid.check_len(values.len())?;
        let mut coeffs = values.to_vec();
        fft::forward_nd(&mut coeffs, grid.dimension(), grid.points_per_dim());
        let w = grid.weight();
        for c in &mut coeffs {
            *c *= w;
        }
        Ok(PeriodicFunction { grid, coeffs })
    }

    /// Grid values `u(x_m) = (2 pi)^{-n} sum_k u_hat_k e^{i k . x_m}`.
    pub fn synthesize(&self) -> Vec<Complex64> {
        let mut values = self.coeffs.clone();
        fft::inverse_nd(&mut values, self.grid.dimension(), self.grid.points_per_dim());
        let scale = libm::pow(2.0 * PI, -(self.grid.dimension() as f64));
        for v in &mut values {
            *v *= scale;
        }
        values
    }

    pub fn zero(grid: TorusGrid) -> Self {
        let total = grid.total_nodes();
        PeriodicFunction { grid, coeffs: alloc::vec![Complex64::new(0.0, 0.0); total] }
    }

    /// Constant function `u = c`.
    pub fn constant(grid: TorusGrid, c: Complex64) -> Self {
        let mut f = Self::zero(grid);
        let vol = libm::pow(2.0 * PI, grid.dimension() as f64);
        f.coeffs[0] = c * vol;
        f
    }

    /// The exponential `e_j(x) = e^{i j . x}` (requires `|j|` inside the box).
    pub fn exponential(grid: TorusGrid, j: &FreqIndex) -> CoreResult<Self> {
        let mut f = Self::zero(grid);
        let vol = libm::pow(2.0 * PI, grid.dimension() as f64);
        let pos = f.position_of(j)?;
        f.coeffs[pos] = Complex64::new(vol, 0.0);
        Ok(f)
    }

    /// Build directly from a coefficient rule over the frequency box.
    pub fn from_coeff_fn(grid: TorusGrid, mut f: impl FnMut(&FreqIndex) -> Complex64) -> Self {
        let mut out = Self::zero(grid);
        for flat in 0..out.coeffs.len() {
            let k = out.freq_of_flat(flat);
            out.coeffs[flat] = f(&k);
        }
        out
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// Raw coefficient storage (DFT natural layout).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn dim(&self) -> usize {
        self.grid.dimension()
    }

    fn points(&self) -> usize {
        self.grid.points_per_dim()
    }

    /// Frequency index of a flat storage position.
    pub fn freq_of_flat(&self, flat: usize) -> FreqIndex {
        let nn = self.points();
        let half = (nn / 2) as i64;
        let mut comps = alloc::vec![0i64; self.dim()];
        let mut rem = flat;
        for d in (0..self.dim()).rev() {
            let f = (rem % nn) as i64;
            comps[d] = if f < half { f } else { f - nn as i64 };
            rem /= nn;
        }
        FreqIndex::new(comps)
    }

    fn position_of(&self, k: &FreqIndex) -> CoreResult<usize> {
        if k.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: alloc::format!("{}", self.dim()),
                got: alloc::format!("{}", k.dim()),
            });
        }
        let nn = self.points() as i64;
        let half = nn / 2;
        let mut flat = 0usize;
        for &c in k.components() {
            if c < -half || c >= half {
                return Err(CoreError::InvalidArgument(alloc::format!(
                    "frequency {k} outside box [-{half}, {half})"
                )));
            }
            let f = if c >= 0 { c } else { c + nn };
            flat = flat * nn as usize + f as usize;
        }
        Ok(flat)
    }

    /// Coefficient `u_hat_k`; zero-dimension errors if `k` is outside the box.
    pub fn coeff(&self, k: &FreqIndex) -> CoreResult<Complex64> {
        Ok(self.coeffs[self.position_of(k)?])
    }

    /// Coefficient, treating out-of-box frequencies as zero.
    pub fn coeff_or_zero(&self, k: &FreqIndex) -> Complex64 {
        match self.position_of(k) {
            Ok(p) => self.coeffs[p],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Apply a frequency-side multiplier `u_hat_k -> m(k) u_hat_k`.
    pub fn multiplier(&self, mut m: impl FnMut(&FreqIndex) -> Complex64) -> Self {
        let mut out = self.clone();
        for flat in 0..out.coeffs.len() {
            let k = out.freq_of_flat(flat);
            out.coeffs[flat] *= m(&k);
        }
        out
    }

    /// Spectral derivative `d^alpha`: multiplication by `(i k)^alpha`.
    pub fn derivative_capped(&self, alpha: &MultiIndex, cap: u32) -> CoreResult<Self> {
        if alpha.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: alloc::format!("{}", self.dim()),
                got: alloc::format!("{}", alpha.dim()),
            });
        }
        if alpha.order() > cap {
            return Err(CoreError::DerivativeCapExceeded { order: alpha.order(), cap });
        }
        let a = alpha.clone();
        Ok(self.multiplier(|k| {
            let mut m = Complex64::new(1.0, 0.0);
            for (&ki, &ai) in k.components().iter().zip(a.components()) {
                let ik = Complex64::new(0.0, ki as f64);
                for _ in 0..ai {
                    m *= ik;
                }
            }
            m
        }))
    }

    pub fn derivative(&self, alpha: &MultiIndex) -> CoreResult<Self> {
        self.derivative_capped(alpha, DEFAULT_DERIVATIVE_CAP)
    }

    /// Translation `(T_y u)(x) = u(x - y)`: coefficient `k` gains `e^{-i k . y}`.
    pub fn translate(&self, y: &[f64]) -> CoreResult<Self> {
        if y.len() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: alloc::format!("{}", self.dim()),
                got: alloc::format!("{}", y.len()),
            });
        }
        let y = y.to_vec();
        Ok(self.multiplier(|k| {
            let phase: f64 = k
                .components()
                .iter()
                .zip(&y)
                .map(|(&ki, &yi)| -(ki as f64) * yi)
                .sum();
            Complex64::new(libm::cos(phase), libm::sin(phase))
        }))
    }

    /// `(1 - Laplacian)^p`: coefficient `k` times `(1 + |k|^2)^p`.
    pub fn one_minus_laplacian_pow(&self, p: u32) -> Self {
        self.multiplier(|k| {
            let k2: f64 = k.components().iter().map(|&c| (c * c) as f64).sum();
            Complex64::new(libm::pow(1.0 + k2, p as f64), 0.0)
        })
    }

    /// Multiply by `e_j`, shifting every coefficient by `j`; modes leaving
    /// the box are dropped (exact otherwise).
    pub fn shift_modes(&self, j: &FreqIndex) -> Self {
        let mut out = Self::zero(self.grid);
        for flat in 0..self.coeffs.len() {
            let c = self.coeffs[flat];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let k = self.freq_of_flat(flat);
            if let Ok(pos) = out.position_of(&k.add(j)) {
                out.coeffs[pos] = c;
            }
        }
        out
    }

    /// Embed the coefficient box into a grid refined by `factor`.
    pub fn zero_pad(&self, factor: usize) -> Self {
        let big = self.grid.refine(factor);
        let mut out = PeriodicFunction {
            grid: big,
            coeffs: alloc::vec![Complex64::new(0.0, 0.0); big.total_nodes()],
        };
        for flat in 0..self.coeffs.len() {
            let k = self.freq_of_flat(flat);
            let pos = out.position_of(&k).expect("refined box contains original");
            out.coeffs[pos] = self.coeffs[flat];
        }
        out
    }

    /// Truncate the coefficient box down to `grid` (must be coarser,
    /// same dimension).
    pub fn truncate_to(&self, grid: TorusGrid) -> CoreResult<Self> {
        if grid.dimension() != self.dim() || grid.points_per_dim() > self.points() {
            return Err(CoreError::InvalidArgument(
                "truncate_to requires a coarser grid of the same dimension".into(),
            ));
        }
        let mut out = PeriodicFunction {
            grid,
            coeffs: alloc::vec![Complex64::new(0.0, 0.0); grid.total_nodes()],
        };
        for flat in 0..out.coeffs.len() {
            let k = out.freq_of_flat(flat);
            out.coeffs[flat] = self.coeff_or_zero(&k);
        }
        Ok(out)
    }

    /// Zero out all modes with `|k|_inf > radius`.
    pub fn band_limit(&self, radius: i64) -> Self {
        let mut out = self.clone();
        for flat in 0..out.coeffs.len() {
            if out.freq_of_flat(flat).linf() > radius {
                out.coeffs[flat] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Max of `|u|` over the grid refined by zero-padding the spectrum.
    /// Monotone non-decreasing in `oversample`.
    pub fn sup_norm(&self, oversample: usize) -> f64 {
        let f = if oversample <= 1 { self.clone() } else { self.zero_pad(oversample) };
        f.synthesize()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Anti-aliased pointwise product: both factors are zero-padded 2x,
    /// multiplied on the fine grid, and truncated back.
    pub fn pointwise_mul(&self, other: &Self) -> CoreResult<Self> {
        self.grid.check_same(&other.grid)?;
        let a = self.zero_pad(2).synthesize();
        let b = other.zero_pad(2).synthesize();
        let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let fine = PeriodicFunction::analyze(self.grid.refine(2), &prod)?;
        fine.truncate_to(self.grid)
    }

    pub fn pointwise_add(&self, other: &Self) -> CoreResult<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        for (c, d) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += d;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    /// In-place `self += s * other` (same grid assumed checked by caller).
    pub fn accumulate(&mut self, other: &Self, s: Complex64) -> CoreResult<()> {
        self.grid.check_same(&other.grid)?;
        for (c, d) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += s * d;
        }
        Ok(())
    }

    /// `sum_k |u_hat_k|^2`.
    pub fn coeff_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `||u||_{L^2}^2 = (2 pi)^{-n} sum |u_hat_k|^2` (Parseval).
    pub fn l2_norm_sqr(&self) -> f64 {
        self.coeff_energy() * libm::pow(2.0 * PI, -(self.dim() as f64))
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|k|_inf` whose coefficient exceeds `tol * max|coeff|`.
    pub fn bandwidth(&self, rel_tol: f64) -> i64 {
        let cutoff = self.max_coeff_abs() * rel_tol;
        let mut bw = 0i64;
        for flat in 0..self.coeffs.len() {
            if self.coeffs[flat].norm() > cutoff {
                bw = bw.max(self.freq_of_flat(flat).linf());
            }
        }
        bw
    }

    /// Relative magnitude of the coefficients on the outermost shell
    /// `|k|_inf >= N/2 - 1`.  On an N-point grid these modes carry any
    /// frequency content the grid could not resolve, so their size bounds
    /// the aliasing contamination of the interior coefficients.
    pub fn boundary_leakage(&self) -> f64 {
        let max = self.max_coeff_abs();
        if max == 0.0 {
            return 0.0;
        }
        let shell = (self.grid.points_per_dim() / 2) as i64 - 1;
        let mut worst = 0.0f64;
        for flat in 0..self.coeffs.len() {
            if self.freq_of_flat(flat).linf() >= shell {
                worst = worst.max(self.coeffs[flat].norm());
            }
        }
        worst / max
    }

    /// True iff `u_hat_{-k} = conj(u_hat_k)` to within `tol` (u real).
    pub fn is_real(&self, tol: f64) -> bool {
        for flat in 0..self.coeffs.len() {
            let k = self.freq_of_flat(flat);
            let neg = self.coeff_or_zero(&k.neg());
            if (self.coeffs[flat] - neg.conj()).norm() > tol {
                return false;
            }
        }
        true
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{FreqIndex, MultiIndex};

    fn grid1(n: usize) -> TorusGrid {
        TorusGrid::new(1, n).unwrap()
    }

    const TAU: f64 = 2.0 * PI;

    #[test]
    fn analyze_constant() {
        let g = grid1(8);
        let vals = alloc::vec![Complex64::new(1.0, 0.0); 8];
        let f = PeriodicFunction::analyze(g, &vals).unwrap();
        assert!((f.coeff(&FreqIndex::new([0i64])).unwrap() - Complex64::new(TAU, 0.0)).norm() < 1e-12);
        for k in 1..4i64 {
            assert!(f.coeff(&FreqIndex::new([k])).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn analyze_single_mode() {
        // u(x) = e^{i 3 x}, N = 16 -> u_hat_3 = 2 pi
        let g = grid1(16);
        let vals: Vec<Complex64> = g
            .nodes()
            .map(|x| Complex64::new(0.0, 3.0 * x[0]).exp())
            .collect();
        let f = PeriodicFunction::analyze(g, &vals).unwrap();
        for k in -8..8i64 {
            let expect = if k == 3 { TAU } else { 0.0 };
            assert!(
                (f.coeff(&FreqIndex::new([k])).unwrap() - Complex64::new(expect, 0.0)).norm() < 1e-10,
                "k={k}"
            );
        }
    }

    #[test]
    fn analyze_cosine_matches_quadrature_oracle() {
        // Oracle: direct quadrature sum over the 8 nodes.
        let g = grid1(8);
        let vals: Vec<Complex64> = g.nodes().map(|x| Complex64::new(x[0].cos(), 0.0)).collect();
        let f = PeriodicFunction::analyze(g, &vals).unwrap();
        for target in [1i64, -1] {
            let mut oracle = Complex64::new(0.0, 0.0);
            for (m, x) in g.nodes().enumerate() {
                let e = Complex64::new(0.0, -(target as f64) * x[0]).exp();
                oracle += e * vals[m];
            }
            oracle *= g.weight();
            let got = f.coeff(&FreqIndex::new([target])).unwrap();
            assert!((got - oracle).norm() < 1e-13);
            assert!((got - Complex64::new(PI, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn synthesize_constant_and_roundtrip() {
        let g = grid1(8);
        let f = PeriodicFunction::constant(g, Complex64::new(1.0, 0.0));
        for v in f.synthesize() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        }
        let vals: Vec<Complex64> = g.nodes().map(|x| Complex64::new(x[0].cos(), 0.0)).collect();
        let f = PeriodicFunction::analyze(g, &vals).unwrap();
        for (a, b) in f.synthesize().iter().zip(&vals) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_single_modes() {
        let g = grid1(16);
        let f = PeriodicFunction::exponential(g, &FreqIndex::new([2i64])).unwrap();
        let df = f.derivative(&MultiIndex::new([1u32])).unwrap();
        // d/dx e^{i2x} = 2i e^{i2x}
        let expect = f.scale(Complex64::new(0.0, 2.0));
        for (a, b) in df.coeffs().iter().zip(expect.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        // second derivative of cos x is -cos x
        let vals: Vec<Complex64> = g.nodes().map(|x| Complex64::new(x[0].cos(), 0.0)).collect();
        let c = PeriodicFunction::analyze(g, &vals).unwrap();
        let d2 = c.derivative(&MultiIndex::new([2u32])).unwrap();
        for (a, b) in d2.synthesize().iter().zip(&vals) {
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_pole_series_oracle() {
        // f(x) = 1/(2 - e^{ix}) = sum_k 2^{-k-1} e^{ikx}; d^5 multiplies
        // term k by (ik)^5.
        let g = grid1(128);
        let vals: Vec<Complex64> = g
            .nodes()
            .map(|x| {
                (Complex64::new(2.0, 0.0) - Complex64::new(0.0, x[0]).exp())
                    .finv()
            })
            .collect();
        let f = PeriodicFunction::analyze(g, &vals).unwrap();
        let d5 = f.derivative(&MultiIndex::new([5u32])).unwrap();
        let oracle: Vec<Complex64> = g
            .nodes()
            .map(|x| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..200i64 {
                    let term = Complex64::new(0.0, k as f64).powu(5)
                        * libm::pow(2.0, -(k as f64) - 1.0)
                        * Complex64::new(0.0, k as f64 * x[0]).exp();
                    acc += term;
                }
                acc
            })
            .collect();
        let got = d5.synthesize();
        let scale: f64 = oracle.iter().map(|v| v.norm()).fold(0.0, f64::max);
        // d^5 amplifies roundoff in the small high-mode coefficients by
        // k^5, so the achievable relative accuracy is ~ N eps k_max^5
        for (a, b) in got.iter().zip(&oracle) {
            assert!((a - b).norm() / scale < 1e-9);
        }
    }

    #[test]
    fn derivative_cap_enforced() {
        let g = grid1(8);
        let f = PeriodicFunction::constant(g, Complex64::new(1.0, 0.0));
        let err = f.derivative(&MultiIndex::new([21u32])).unwrap_err();
        assert!(matches!(err, CoreError::DerivativeCapExceeded { .. }));
    }

    #[test]
    fn translate_identities() {
        let g = grid1(16);
        let f = PeriodicFunction::exponential(g, &FreqIndex::new([1i64])).unwrap();
        let id = f.translate(&[0.0]).unwrap();
        assert_eq!(f, id);
        // e^{ix} shifted by pi -> -e^{ix}
        let t = f.translate(&[PI]).unwrap();
        let neg = f.scale(Complex64::new(-1.0, 0.0));
        for (a, b) in t.coeffs().iter().zip(neg.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn laplacian_power() {
        let g = grid1(16);
        // f = 1 + cos x, p = 2 -> 1 + 4 cos x (per-mode multiplier (1+1)^2)
        let vals: Vec<Complex64> = g
            .nodes()
            .map(|x| Complex64::new(1.0 + x[0].cos(), 0.0))
            .collect();
        let f = PeriodicFunction::analyze(g, &vals).unwrap();
        let lf = f.one_minus_laplacian_pow(2);
        let expect: Vec<Complex64> = g
            .nodes()
            .map(|x| Complex64::new(1.0 + 4.0 * x[0].cos(), 0.0))
            .collect();
        for (a, b) in lf.synthesize().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12);
        }
        // p = 0 is the identity; eigenfunction check
        assert_eq!(f.one_minus_laplacian_pow(0), f);
        let e3 = PeriodicFunction::exponential(g, &FreqIndex::new([3i64])).unwrap();
        let le = e3.one_minus_laplacian_pow(1);
        let expect = e3.scale(Complex64::new(10.0, 0.0));
        for (a, b) in le.coeffs().iter().zip(expect.coeffs()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn sup_norm_examples() {
        let g = grid1(8);
        let c = PeriodicFunction::constant(g, Complex64::new(-2.5, 0.0));
        assert!((c.sup_norm(1) - 2.5).abs() < 1e-13);
        // sin x on N=8, oversample 4: dense-evaluation oracle says 1
        let vals: Vec<Complex64> = g.nodes().map(|x| Complex64::new(x[0].sin(), 0.0)).collect();
        let s = PeriodicFunction::analyze(g, &vals).unwrap();
        let dense: f64 = (0..100_000)
            .map(|i| (TAU * i as f64 / 1e5).sin().abs())
            .fold(0.0, f64::max);
        assert!((s.sup_norm(4) - dense).abs() < 1e-3);
        // unimodular mode
        let e5 = PeriodicFunction::exponential(grid1(16), &FreqIndex::new([5i64])).unwrap();
        assert!((e5.sup_norm(4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pointwise_mul_examples() {
        let g = grid1(16);
        let vals: Vec<Complex64> = g.nodes().map(|x| Complex64::new(x[0].cos(), 0.0)).collect();
        let c = PeriodicFunction::analyze(g, &vals).unwrap();
        let one = PeriodicFunction::constant(g, Complex64::new(1.0, 0.0));
        // f * 1 = f
        let p = c.pointwise_mul(&one).unwrap();
        for (a, b) in p.coeffs().iter().zip(c.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        // e_j * e_{-j} = 1
        let ej = PeriodicFunction::exponential(g, &FreqIndex::new([3i64])).unwrap();
        let emj = PeriodicFunction::exponential(g, &FreqIndex::new([-3i64])).unwrap();
        let prod = ej.pointwise_mul(&emj).unwrap();
        for (a, b) in prod.coeffs().iter().zip(one.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        // (cos x)^2 = 1/2 + cos(2x)/2
        let sq = c.pointwise_mul(&c).unwrap();
        assert!((sq.coeff(&FreqIndex::new([0i64])).unwrap() - Complex64::new(PI, 0.0)).norm() < 1e-13);
        assert!(
            (sq.coeff(&FreqIndex::new([2i64])).unwrap() - Complex64::new(PI / 2.0, 0.0)).norm()
                < 1e-13
        );
        assert!(sq.coeff(&FreqIndex::new([1i64])).unwrap().norm() < 1e-13);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = PeriodicFunction::constant(grid1(8), Complex64::new(1.0, 0.0));
        let b = PeriodicFunction::constant(grid1(16), Complex64::new(1.0, 0.0));
        assert!(a.pointwise_mul(&b).is_err());
        assert!(a.pointwise_add(&b).is_err());
    }

    #[test]
    fn shift_modes_is_exponential_multiplication() {
        let g = grid1(16);
        let vals: Vec<Complex64> = g.nodes().map(|x| Complex64::new(x[0].cos(), 0.0)).collect();
        let c = PeriodicFunction::analyze(g, &vals).unwrap();
        let shifted = c.shift_modes(&FreqIndex::new([2i64]));
        let e2 = PeriodicFunction::exponential(g, &FreqIndex::new([2i64])).unwrap();
        let via_mul = c.pointwise_mul(&e2).unwrap();
        for (a, b) in shifted.coeffs().iter().zip(via_mul.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn real_check() {
        let g = grid1(8);
        let vals: Vec<Complex64> = g.nodes().map(|x| Complex64::new(x[0].cos(), 0.0)).collect();
        assert!(PeriodicFunction::analyze(g, &vals).unwrap().is_real(1e-12));
        let e1 = PeriodicFunction::exponential(g, &FreqIndex::new([1i64])).unwrap();
        assert!(!e1.is_real(1e-12));
    }
}
