//! The translation orbit `f(y) = T_y A T_{-y}` at matrix level: the
//! derivative identity against `A^alpha`, derivative growth tables, and
//! Taylor-remainder decay.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::fit::{fit_growth_table, FitOptions, GrowthFit};
use crate::index::{multi_indices_upto, MultiIndex};
use crate::matrix::NORM_ITERATION_CAP;
use crate::quantize::{to_matrix, TruncatedOperator};
use crate::rng::SplitMix64;
use crate::symbol::DiscreteSymbol;

/// Residual tolerance for the matrix norms inside orbit diagnostics.
/// Looser than the default norm tolerance: these norms feed growth fits
/// and convergence ratios, not 1e-12 equalities.
pub const ORBIT_NORM_TOL: f64 = 1e-7;

/// Order-4 central first-derivative stencil `(f(-2h), f(-h), f(h), f(2h))`
/// weights, to be divided by `12h`.
const STENCIL: [(i32, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];

/// One finite-difference check of
/// `d^alpha_y f(y) = (-1)^|alpha| T_y A^alpha T_{-y}`, where
/// `A^alpha = Op(d^alpha a_j)`.  The sign comes from the translation
/// convention `(T_y u)(x) = u(x - y)`: each derivative in `y` of
/// `a_j(x - y)` picks up a factor `-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDerivativeRecord {
    pub alpha: MultiIndex,
    pub y: Vec<f64>,
    pub h: f64,
    pub scheme_order: u32,
    /// Norm of the finite-difference derivative matrix.
    pub fd_norm: f64,
    /// Norm of the exact (symbol-side) derivative matrix.
    pub exact_norm: f64,
    /// Norm of the difference between the two paths.
    pub identity_error: f64,
}

/// Orbit-side analyticity table: `|A^alpha|` fitted against
/// `C^(1+|alpha|) alpha!`. By unitary invariance of the conjugation the
/// sup over `y` of `|d^alpha f(y)|` equals `|A^alpha|` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitGrowthTable {
    pub k_cutoff: i64,
    pub fit: GrowthFit,
    /// Largest power-iteration residual among the tabulated norms.
    pub max_norm_residual: f64,
}

/// Decay of `max_y |f(y) - P_D(y)|` over sampled `y` as the Taylor
/// degree `D` grows.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorRemainderReport {
    pub degrees: Vec<u32>,
    pub max_remainder: Vec<f64>,
    pub radius: f64,
    pub samples: usize,
    /// Norm of `f(y0)`, the natural scale of the remainders.
    pub base_norm: f64,
}

/// `f(y)` as a matrix: `to_matrix(T_y s, K)`, equal to the conjugation
/// of `to_matrix(s, K)` by the translation phases.
pub fn orbit_eval(s: &DiscreteSymbol, y: &[f64], k_cut: i64) -> CoreResult<TruncatedOperator> {
    to_matrix(&s.translate(y)?, k_cut)
}

fn fd_orbit(
    s: &DiscreteSymbol,
    alpha: &MultiIndex,
    y: &[f64],
    h: f64,
    k_cut: i64,
) -> CoreResult<TruncatedOperator> {
    let coord = alpha.components().iter().position(|&a| a > 0);
    let Some(i) = coord else {
        return orbit_eval(s, y, k_cut);
    };
    let mut reduced = alpha.components().to_vec();
    reduced[i] -= 1;
    let reduced = MultiIndex::new(reduced);
    let mut acc: Option<TruncatedOperator> = None;
    for (step, w) in STENCIL {
        let mut yy = y.to_vec();
        yy[i] += step as f64 * h;
        let term = fd_orbit(s, &reduced, &yy, h, k_cut)?;
        let weight = Complex64::new(w / (12.0 * h), 0.0);
        acc = Some(match acc {
            None => term.scale(weight),
            Some(a) => a.add_scaled(&term, weight)?,
        });
    }
    Ok(acc.expect("stencil is non-empty"))
}

/// Compare the order-4 finite-difference derivative of the orbit with the
/// exact symbol-side derivative `(-1)^|alpha| T_y Op(d^alpha a_j) T_{-y}`.
/// Preconditions: `h` in `[1e-4, 1e-1]`, `|alpha| <= 4`, and for `n >= 2`
/// at most 2 per coordinate (stencil cost and rounding noise).
pub fn orbit_derivative_check(
    s: &DiscreteSymbol,
    alpha: &MultiIndex,
    y: &[f64],
    h: f64,
    k_cut: i64,
    seed: u64,
) -> CoreResult<OrbitDerivativeRecord> {
    if !(1e-4..=1e-1).contains(&h) {
        return Err(CoreError::InvalidArgument(format!("step h={h} outside [1e-4, 1e-1]")));
    }
    if alpha.order() > 4 {
        return Err(CoreError::InvalidArgument(format!(
            "finite differences limited to |alpha| <= 4, got {alpha}"
        )));
    }
    if s.dimension() >= 2 && alpha.components().iter().any(|&a| a > 2) {
        return Err(CoreError::InvalidArgument(format!(
            "finite differences limited to order 2 per coordinate for n >= 2, got {alpha}"
        )));
    }
    // band-limit once so the amplified derivative tails cannot trip the
    // aliasing check; both paths then see the same symbol exactly
    let window = (s.grid().points_per_dim() / 2) as i64 - k_cut;
    let s = s.band_limit_entries(window);
    let mut exact = to_matrix(&s.derivative(alpha)?, k_cut)?.conjugate_translation(y)?;
    if alpha.order() % 2 == 1 {
        exact = exact.scale(Complex64::new(-1.0, 0.0));
    }
    let exact_norm = exact.norm_estimate(ORBIT_NORM_TOL, seed)?.value;
    if alpha.is_zero() {
        // no differencing: the two paths coincide by construction
        return Ok(OrbitDerivativeRecord {
            alpha: alpha.clone(),
            y: y.to_vec(),
            h,
            scheme_order: 4,
            fd_norm: exact_norm,
            exact_norm,
            identity_error: 0.0,
        });
    }
    let fd = fd_orbit(&s, alpha, y, h, k_cut)?;
    let fd_norm = fd.norm_estimate(ORBIT_NORM_TOL, seed)?.value;
    let diff = fd.sub(&exact)?;
    let identity_error = diff.norm_estimate(ORBIT_NORM_TOL, seed)?.value;
    Ok(OrbitDerivativeRecord {
        alpha: alpha.clone(),
        y: y.to_vec(),
        h,
        scheme_order: 4,
        fd_norm,
        exact_norm,
        identity_error,
    })
}

/// Tabulate `|A^alpha| = |Op(d^alpha a_j)|` for `|alpha| <= a_max` and
/// fit the growth. Entries are band-limited to `N/2 - K` first so the
/// amplified derivative tails cannot alias.
pub fn orbit_growth_table(
    s: &DiscreteSymbol,
    a_max: u32,
    k_cut: i64,
    options: FitOptions,
    seed: u64,
) -> CoreResult<OrbitGrowthTable> {
    if a_max < 4 {
        return Err(CoreError::InvalidArgument("a_max must be >= 4".into()));
    }
    let window = (s.grid().points_per_dim() / 2) as i64 - k_cut;
    let banded = s.band_limit_entries(window);
    let mut table = Vec::new();
    let mut max_residual = 0.0f64;
    for alpha in multi_indices_upto(s.dimension(), a_max) {
        let op = to_matrix(&banded.derivative_capped(&alpha, a_max.max(20))?, k_cut)?;
        let est = op.matrix().operator_norm_estimate(ORBIT_NORM_TOL, NORM_ITERATION_CAP, seed)?;
        max_residual = max_residual.max(est.residual);
        table.push((alpha, est.value));
    }
    let fit = fit_growth_table(&table, a_max, options);
    Ok(OrbitGrowthTable { k_cutoff: k_cut, fit, max_norm_residual: max_residual })
}

/// Taylor polynomial of the orbit at `y0`, compared against the true
/// orbit at seeded random points within `|y - y0|_inf <= radius`.
pub fn taylor_remainder_check(
    s: &DiscreteSymbol,
    y0: &[f64],
    degrees: &[u32],
    radius: f64,
    samples: usize,
    k_cut: i64,
    seed: u64,
) -> CoreResult<TaylorRemainderReport> {
    let &d_max = degrees
        .iter()
        .max()
        .ok_or_else(|| CoreError::InvalidArgument("degree list must be non-empty".into()))?;
    if d_max > 8 {
        return Err(CoreError::InvalidArgument(format!("Taylor degree {d_max} exceeds 8")));
    }
    if radius <= 0.0 || samples == 0 {
        return Err(CoreError::InvalidArgument("radius and samples must be positive".into()));
    }
    let n = s.dimension();
    if y0.len() != n {
        return Err(CoreError::DimensionMismatch { expected: (n).to_string(), got: (y0.len()).to_string() });
    }
    // band-limit once, as in `orbit_derivative_check`: the truth and the
    // Taylor terms are then built from the identical symbol
    let window = (s.grid().points_per_dim() / 2) as i64 - k_cut;
    let s = s.band_limit_entries(window);

    // derivative matrices d^alpha f(y0), including the sign from the
    // translation convention (see `orbit_derivative_check`)
    let alphas = multi_indices_upto(n, d_max);
    let mut derivs = Vec::with_capacity(alphas.len());
    for alpha in &alphas {
        let mut m = to_matrix(&s.derivative_capped(alpha, d_max.max(20))?, k_cut)?
            .conjugate_translation(y0)?;
        if alpha.order() % 2 == 1 {
            m = m.scale(Complex64::new(-1.0, 0.0));
        }
        derivs.push(m);
    }
    let base_norm = derivs[0].norm_estimate(ORBIT_NORM_TOL, seed)?.value;

    let mut rng = SplitMix64::new(seed);
    let mut max_remainder = alloc::vec![0.0f64; degrees.len()];
    for _ in 0..samples {
        let offset: Vec<f64> = (0..n).map(|_| radius * rng.next_sym()).collect();
        let y: Vec<f64> = y0.iter().zip(&offset).map(|(a, b)| a + b).collect();
        let truth = orbit_eval(&s, &y, k_cut)?;
        // accumulate the Taylor sum degree by degree
        let mut partial: Option<TruncatedOperator> = None;
        let mut by_degree: Vec<Option<TruncatedOperator>> = alloc::vec![None; d_max as usize + 1];
        for (alpha, m) in alphas.iter().zip(&derivs) {
            let mut coeff = libm::exp(-alpha.ln_factorial());
            for (o, a) in offset.iter().zip(alpha.components()) {
                coeff *= libm::pow(*o, *a as f64);
            }
            let w = Complex64::new(coeff, 0.0);
            partial = Some(match partial {
                None => m.scale(w),
                Some(p) => p.add_scaled(m, w)?,
            });
            // alphas are graded: record the running sum when the degree
            // block completes, i.e. overwrite at each entry of the degree
            by_degree[alpha.order() as usize] = partial.clone();
        }
        for (pos, d) in degrees.iter().enumerate() {
            let p = by_degree[*d as usize]
                .clone()
                .or_else(|| partial.clone())
                .expect("at least one term");
            let r = truth.sub(&p)?.norm_estimate(ORBIT_NORM_TOL, seed)?.value;
            max_remainder[pos] = max_remainder[pos].max(r);
        }
    }
    Ok(TaylorRemainderReport {
        degrees: degrees.to_vec(),
        max_remainder,
        radius,
        samples,
        base_norm,
    })
}
