//! Derivative-growth fitting shared by the symbol-side and orbit-side
//! analyticity classifiers.
//!
//! Given a table `alpha -> M_alpha` of derivative magnitudes, the fitted
//! per-alpha constant is `c_alpha = (M_alpha / alpha!)^(1/(1+|alpha|))`;
//! a uniformly analytic family satisfies `M_alpha <= C^(1+|alpha|) alpha!`
//! with one `C`, so `c_alpha` stays bounded. No finite table can prove
//! that, so the verdict is a heuristic on the growth of `c_alpha` over the
//! top half of the tabulated range, with an explicit inconclusive outcome.

use alloc::vec::Vec;

use crate::index::MultiIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    UniformlyAnalytic,
    NotAnalytic,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::UniformlyAnalytic => "uniformly-analytic",
            Verdict::NotAnalytic => "not-analytic",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Fit thresholds. `slope_tol` / `growth_tol` are relative slopes of
/// `c_alpha` per unit `|alpha|` over the top half of the range: at or
/// below `slope_tol` the table is compatible with a plateau (analytic),
/// at or above `growth_tol` it grows too fast (not analytic), in between
/// the test is inconclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub slope_tol: f64,
    pub growth_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { slope_tol: 0.03, growth_tol: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaFit {
    pub alpha: MultiIndex,
    /// Tabulated magnitude (sup of a derivative, or an operator norm).
    pub magnitude: f64,
    /// `(magnitude / alpha!)^(1/(1+|alpha|))`.
    pub c_alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub a_max: u32,
    pub entries: Vec<AlphaFit>,
    /// `max_alpha c_alpha`.
    pub c_star: f64,
    /// Per-degree maxima `d_k = max_{|alpha|=k} c_alpha`.
    pub degree_max: Vec<f64>,
    /// Least-squares slope of `d_k` over the top half of the degree range,
    /// normalized by the mean level (relative growth per unit degree).
    pub plateau_slope: f64,
    pub verdict: Verdict,
    pub options: FitOptions,
}

/// `c_alpha` from a magnitude, in log space so large factorials are safe.
pub fn c_alpha(magnitude: f64, alpha: &MultiIndex) -> f64 {
    if magnitude <= 0.0 {
        return 0.0;
    }
    let ln_c = (libm::log(magnitude) - alpha.ln_factorial()) / (1.0 + alpha.order() as f64);
    libm::exp(ln_c)
}

/// Fit a derivative-magnitude table. `table` must contain every alpha with
/// `|alpha| <= a_max` (graded-lex order is preserved in the output).
pub fn fit_growth_table(table: &[(MultiIndex, f64)], a_max: u32, options: FitOptions) -> GrowthFit {
    let entries: Vec<AlphaFit> = table
        .iter()
        .map(|(alpha, m)| AlphaFit {
            alpha: alpha.clone(),
            magnitude: *m,
            c_alpha: c_alpha(*m, alpha),
        })
        .collect();
    let c_star = entries.iter().map(|e| e.c_alpha).fold(0.0, f64::max);

    let mut degree_max = alloc::vec![0.0f64; a_max as usize + 1];
    for e in &entries {
        let k = e.alpha.order() as usize;
        if k < degree_max.len() {
            degree_max[k] = degree_max[k].max(e.c_alpha);
        }
    }

    // top half of the degree range
    let lo = (a_max as usize).div_ceil(2);
    let hi = a_max as usize;
    let window: Vec<(f64, f64)> = (lo..=hi).map(|k| (k as f64, degree_max[k])).collect();
    let mean = window.iter().map(|&(_, d)| d).sum::<f64>() / window.len() as f64;

    let plateau_slope = if mean < 1e-13 {
        // degenerate table (e.g. all derivatives vanish): flat
        0.0
    } else {
        let n = window.len() as f64;
        let mx = window.iter().map(|&(k, _)| k).sum::<f64>() / n;
        let my = mean;
        let mut num = 0.0;
        let mut den = 0.0;
        for &(k, d) in &window {
            num += (k - mx) * (d - my);
            den += (k - mx) * (k - mx);
        }
        (num / den) / mean
    };

    let verdict = if !c_star.is_finite() {
        Verdict::NotAnalytic
    } else if plateau_slope <= options.slope_tol {
        Verdict::UniformlyAnalytic
    } else if plateau_slope >= options.growth_tol {
        Verdict::NotAnalytic
    } else {
        Verdict::Inconclusive
    };

    GrowthFit { a_max, entries, c_star, degree_max, plateau_slope, verdict, options }
}
