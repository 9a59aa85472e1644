//! Discrete-symbol families `j -> a_j` over a truncated frequency box,
//! and the two desk-scale classifiers: the order-`m` boundedness test and
//! the uniform-analyticity fit.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::expr::SymbolSpec;
use crate::fit::{fit_growth_table, FitOptions, GrowthFit};
use crate::grid::TorusGrid;
use crate::index::{freq_box, multi_indices_upto, FreqIndex, MultiIndex};
use crate::periodic::PeriodicFunction;
use crate::{DEFAULT_DERIVATIVE_CAP, DEFAULT_OVERSAMPLE};

/// A truncated discrete symbol: one `PeriodicFunction` per frequency
/// `j` with `|j|_inf <= J`, all on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSymbol {
    grid: TorusGrid,
    cutoff: i64,
    /// Entries in graded-lex frequency order (parallel to `indices`).
    entries: Vec<PeriodicFunction>,
    indices: Vec<FreqIndex>,
    positions: BTreeMap<Vec<i64>, usize>,
}

impl DiscreteSymbol {
    /// Build from a rule producing each `a_j`.
    pub fn from_fn(
        grid: TorusGrid,
        cutoff: i64,
        mut f: impl FnMut(&FreqIndex) -> CoreResult<PeriodicFunction>,
    ) -> CoreResult<Self> {
        if cutoff < 0 {
            return Err(CoreError::InvalidArgument("cutoff J must be >= 0".into()));
        }
        let indices = freq_box(grid.dimension(), cutoff);
        let mut entries = Vec::with_capacity(indices.len());
        for j in &indices {
            let a = f(j)?;
            a.grid().check_same(&grid)?;
            if !a.all_finite() {
                return Err(CoreError::NonFiniteEvaluation {
                    freq: format!("{j}"),
                    detail: "entry has non-finite coefficients".into(),
                });
            }
            entries.push(a);
        }
        let positions = indices
            .iter()
            .enumerate()
            .map(|(p, j)| (j.components().to_vec(), p))
            .collect();
        Ok(DiscreteSymbol { grid, cutoff, entries, indices, positions })
    }

    /// Build by evaluating a pointwise rule `(j, x) -> a_j(x)` on the grid.
    pub fn from_values_fn(
        grid: TorusGrid,
        cutoff: i64,
        mut eval: impl FnMut(&FreqIndex, &[f64]) -> CoreResult<Complex64>,
    ) -> CoreResult<Self> {
        Self::from_fn(grid, cutoff, |j| {
            let mut values = Vec::with_capacity(grid.total_nodes());
            for x in grid.nodes() {
                let v = eval(j, &x)?;
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(CoreError::NonFiniteEvaluation {
                        freq: format!("{j}"),
                        detail: format!("non-finite value at x={x:?}"),
                    });
                }
                values.push(v);
            }
            PeriodicFunction::analyze(grid, &values)
        })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn dimension(&self) -> usize {
        self.grid.dimension()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, j: &FreqIndex) -> CoreResult<&PeriodicFunction> {
        self.positions
            .get(j.components())
            .map(|&p| &self.entries[p])
            .ok_or_else(|| {
                CoreError::InvalidArgument(format!("frequency {j} outside symbol box J={}", self.cutoff))
            })
    }

    /// Iterate `(j, a_j)` in graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&FreqIndex, &PeriodicFunction)> {
        self.indices.iter().zip(self.entries.iter())
    }

    /// Apply a function entrywise, keeping the cutoff.
    pub fn map_entries(
        &self,
        mut f: impl FnMut(&FreqIndex, &PeriodicFunction) -> CoreResult<PeriodicFunction>,
    ) -> CoreResult<Self> {
        let mut out = self.clone();
        for (pos, j) in self.indices.iter().enumerate() {
            out.entries[pos] = f(j, &self.entries[pos])?;
        }
        Ok(out)
    }

    /// `T_y` applied entrywise: the symbol of `T_y A T_{-y}`.
    pub fn translate(&self, y: &[f64]) -> CoreResult<Self> {
        self.map_entries(|_, a| a.translate(y))
    }

    /// `d^alpha` applied entrywise: the symbol of `A^alpha`.
    pub fn derivative(&self, alpha: &MultiIndex) -> CoreResult<Self> {
        self.derivative_capped(alpha, DEFAULT_DERIVATIVE_CAP)
    }

    pub fn derivative_capped(&self, alpha: &MultiIndex, cap: u32) -> CoreResult<Self> {
        self.map_entries(|_, a| a.derivative_capped(alpha, cap))
    }

    /// Restrict to the sub-box `|j|_inf <= cutoff`.
    pub fn restrict(&self, cutoff: i64) -> CoreResult<Self> {
        if cutoff > self.cutoff {
            return Err(CoreError::InvalidArgument(format!(
                "cannot restrict J={} symbol to larger J={cutoff}",
                self.cutoff
            )));
        }
        DiscreteSymbol::from_fn(self.grid, cutoff, |j| self.entry(j).cloned())
    }

    /// Zero out entry modes beyond `|m|_inf > radius` in every `a_j`.
    pub fn band_limit_entries(&self, radius: i64) -> Self {
        self.map_entries(|_, a| Ok(a.band_limit(radius)))
            .expect("band limiting cannot fail")
    }

    /// Largest entry bandwidth (modes above `rel_tol * max|coeff|`).
    pub fn max_bandwidth(&self, rel_tol: f64) -> i64 {
        self.entries.iter().map(|a| a.bandwidth(rel_tol)).max().unwrap_or(0)
    }

    /// `sup_{j,x} |d^alpha a_j(x)|` over the family.
    pub fn derivative_sup(&self, alpha: &MultiIndex, cap: u32, oversample: usize) -> CoreResult<f64> {
        let mut best = 0.0f64;
        for a in &self.entries {
            let d = a.derivative_capped(alpha, cap)?;
            best = best.max(d.sup_norm(oversample));
        }
        Ok(best)
    }
}

/// Seminorm `rho_m(a) = max_{|beta| <= m} sup |d^beta a|`.
pub fn seminorm_rho(a: &PeriodicFunction, m: u32, oversample: usize) -> CoreResult<f64> {
    let mut best = 0.0f64;
    for beta in multi_indices_upto(a.grid().dimension(), m) {
        // rho is defined without a cap; use the order itself
        let d = a.derivative_capped(&beta, m.max(DEFAULT_DERIVATIVE_CAP))?;
        best = best.max(d.sup_norm(oversample));
    }
    Ok(best)
}

/// One row of an order-test report.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderEntry {
    pub alpha: MultiIndex,
    /// `max_{j,x} (1+|j|)^{-m} |d^alpha a_j(x)|`.
    pub max_ratio: f64,
    pub witness_j: FreqIndex,
}

/// Result of the order-`m` test.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub order_m: f64,
    pub j_cutoff: i64,
    pub b_max: f64,
    pub entries: Vec<OrderEntry>,
    pub max_ratio: f64,
    pub witness_alpha: MultiIndex,
    pub witness_j: FreqIndex,
    /// `bounded` iff `max_ratio <= b_max`.
    pub bounded: bool,
    /// Max ratio over the half box `|j|_inf <= J/2`, and the ratio of the
    /// two maxima; a factor well above 1 flags growth in `J`.
    pub half_box_max_ratio: f64,
    pub j_growth_factor: f64,
    pub growing_in_j: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderTestOptions {
    pub b_max: f64,
    pub oversample: usize,
    pub derivative_cap: u32,
    /// Growth-in-J flag threshold on `max_ratio(J) / max_ratio(J/2)`.
    pub j_growth_tol: f64,
}

impl Default for OrderTestOptions {
    fn default() -> Self {
        OrderTestOptions {
            b_max: 1e6,
            oversample: DEFAULT_OVERSAMPLE,
            derivative_cap: DEFAULT_DERIVATIVE_CAP,
            j_growth_tol: 1.25,
        }
    }
}

/// The order-`m` symbol test: tabulates
/// `(1+|j|)^{-m} sup_x |d^alpha a_j(x)|` over the truncated box.
pub fn order_test(
    s: &DiscreteSymbol,
    m: f64,
    alphas: &[MultiIndex],
    options: OrderTestOptions,
) -> CoreResult<OrderReport> {
    if alphas.is_empty() {
        return Err(CoreError::InvalidArgument("alpha list must be non-empty".into()));
    }
    let half = s.cutoff() / 2;
    let mut entries = Vec::with_capacity(alphas.len());
    let mut max_ratio = 0.0f64;
    let mut witness_alpha = alphas[0].clone();
    let mut witness_j = FreqIndex::zero(s.dimension());
    let mut half_box_max = 0.0f64;
    for alpha in alphas {
        let mut a_max_ratio = 0.0f64;
        let mut a_witness = FreqIndex::zero(s.dimension());
        for (j, a) in s.iter() {
            let d = a.derivative_capped(alpha, options.derivative_cap)?;
            let sup = d.sup_norm(options.oversample);
            let ratio = libm::pow(1.0 + j.euclidean_norm(), -m) * sup;
            if ratio > a_max_ratio {
                a_max_ratio = ratio;
                a_witness = j.clone();
            }
            if j.linf() <= half && ratio > half_box_max {
                half_box_max = ratio;
            }
        }
        if a_max_ratio > max_ratio {
            max_ratio = a_max_ratio;
            witness_alpha = alpha.clone();
            witness_j = a_witness.clone();
        }
        entries.push(OrderEntry { alpha: alpha.clone(), max_ratio: a_max_ratio, witness_j: a_witness });
    }
    let j_growth_factor = if half_box_max > 0.0 { max_ratio / half_box_max } else { 1.0 };
    Ok(OrderReport {
        order_m: m,
        j_cutoff: s.cutoff(),
        b_max: options.b_max,
        entries,
        max_ratio,
        witness_alpha,
        witness_j,
        bounded: max_ratio <= options.b_max,
        half_box_max_ratio: half_box_max,
        j_growth_factor,
        growing_in_j: j_growth_factor > options.j_growth_tol,
    })
}

/// Symbol-side analyticity report: the derivative table
/// `M_alpha = sup_{j,x} |d^alpha a_j|` fitted against `C^(1+|alpha|) alpha!`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticityReport {
    pub j_cutoff: i64,
    pub oversample: usize,
    pub fit: GrowthFit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticityOptions {
    pub fit: FitOptions,
    pub oversample: usize,
    pub derivative_cap: u32,
}

impl Default for AnalyticityOptions {
    fn default() -> Self {
        AnalyticityOptions {
            fit: FitOptions::default(),
            oversample: DEFAULT_OVERSAMPLE,
            derivative_cap: DEFAULT_DERIVATIVE_CAP,
        }
    }
}

/// Tabulate `M_alpha` for `|alpha| <= a_max` and fit the analyticity
/// constant. `a_max >= 4` so the plateau statistic has a window.
pub fn analyticity_fit(
    s: &DiscreteSymbol,
    a_max: u32,
    options: AnalyticityOptions,
) -> CoreResult<AnalyticityReport> {
    if a_max < 4 {
        return Err(CoreError::InvalidArgument("a_max must be >= 4".into()));
    }
    if a_max > options.derivative_cap {
        return Err(CoreError::DerivativeCapExceeded { order: a_max, cap: options.derivative_cap });
    }
    let mut table = Vec::new();
    for alpha in multi_indices_upto(s.dimension(), a_max) {
        let m = s.derivative_sup(&alpha, options.derivative_cap, options.oversample)?;
        table.push((alpha, m));
    }
    let fit = fit_growth_table(&table, a_max, options.fit);
    Ok(AnalyticityReport { j_cutoff: s.cutoff(), oversample: options.oversample, fit })
}

/// Build a symbol family from a parsed expression.
pub fn build_symbol(spec: &SymbolSpec, grid: TorusGrid, cutoff: i64) -> CoreResult<DiscreteSymbol> {
    spec.check_dimension(grid.dimension())?;
    DiscreteSymbol::from_values_fn(grid, cutoff, |j, x| {
        spec.eval(x, j.components()).map_err(|e| CoreError::NonFiniteEvaluation {
            freq: format!("{j}"),
            detail: format!("{e}"),
        })
    })
}
