//! Multi-indices (derivative orders) and signed frequency indices.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{CoreError, CoreResult};

/// A derivative multi-index `alpha = (alpha_1, ..., alpha_n)`, entries >= 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    components: Vec<u32>,
}

impl MultiIndex {
    pub fn new(components: impl Into<Vec<u32>>) -> Self {
        MultiIndex { components: components.into() }
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex { components: alloc::vec![0; n] }
    }

    /// The i-th coordinate unit index in dimension n.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = alloc::vec![0u32; n];
        c[i] = 1;
        MultiIndex { components: c }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    /// `|alpha| = sum alpha_i`.
    pub fn order(&self) -> u32 {
        self.components.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Shift every component by the same amount (`beta = alpha + (s,...,s)`).
    pub fn shift_all(&self, s: u32) -> MultiIndex {
        MultiIndex { components: self.components.iter().map(|&a| a + s).collect() }
    }

    /// `ln(alpha!) = sum ln(alpha_i!)`, via the log-gamma function so large
    /// orders never overflow.
    pub fn ln_factorial(&self) -> f64 {
        self.components.iter().map(|&a| ln_factorial(a)).sum()
    }

    /// `alpha! = prod alpha_i!` as a float.
    pub fn factorial(&self) -> f64 {
        libm::exp(self.ln_factorial())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `ln(a!)` for a single non-negative integer.
pub fn ln_factorial(a: u32) -> f64 {
    libm::lgamma(a as f64 + 1.0)
}

fn graded_lex_cmp_u32(a: &[u32], b: &[u32]) -> Ordering {
    let oa: u32 = a.iter().sum();
    let ob: u32 = b.iter().sum();
    oa.cmp(&ob).then_with(|| a.cmp(b))
}

/// All multi-indices in dimension `n` with `|alpha| <= max_order`, in graded
/// lexicographic order.
pub fn multi_indices_upto(n: usize, max_order: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = alloc::vec![0u32; n];
    collect_rec(&mut cur, 0, max_order, &mut out);
    out.sort_by(|a, b| graded_lex_cmp_u32(&a.components, &b.components));
    out
}

fn collect_rec(cur: &mut Vec<u32>, pos: usize, budget: u32, out: &mut Vec<MultiIndex>) {
    if pos == cur.len() {
        out.push(MultiIndex::new(cur.clone()));
        return;
    }
    for v in 0..=budget {
        cur[pos] = v;
        collect_rec(cur, pos + 1, budget - v, out);
    }
    cur[pos] = 0;
}

/// A signed frequency index `j in Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreqIndex {
    components: Vec<i64>,
}

impl FreqIndex {
    pub fn new(components: impl Into<Vec<i64>>) -> Self {
        FreqIndex { components: components.into() }
    }

    pub fn zero(n: usize) -> Self {
        FreqIndex { components: alloc::vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.components
    }

    /// Euclidean norm `|j| = (sum j_i^2)^(1/2)`.
    pub fn euclidean_norm(&self) -> f64 {
        libm::sqrt(self.components.iter().map(|&c| (c * c) as f64).sum())
    }

    /// Max norm `|j|_inf`.
    pub fn linf(&self) -> i64 {
        self.components.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &FreqIndex) -> FreqIndex {
        debug_assert_eq!(self.dim(), other.dim());
        FreqIndex {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &FreqIndex) -> FreqIndex {
        debug_assert_eq!(self.dim(), other.dim());
        FreqIndex {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> FreqIndex {
        FreqIndex { components: self.components.iter().map(|c| -c).collect() }
    }

    /// `j . y` for a real point `y`.
    pub fn dot(&self, y: &[f64]) -> CoreResult<f64> {
        if y.len() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim().to_string(),
                got: y.len().to_string(),
            });
        }
        Ok(self.components.iter().zip(y).map(|(&j, &yi)| j as f64 * yi).sum())
    }
}

impl fmt::Display for FreqIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn graded_lex_cmp_i64(a: &[i64], b: &[i64]) -> Ordering {
    let ga = a.iter().map(|c| c.abs()).max().unwrap_or(0);
    let gb = b.iter().map(|c| c.abs()).max().unwrap_or(0);
    ga.cmp(&gb).then_with(|| a.cmp(b))
}

/// The frequency box `{-radius, ..., radius}^n` in graded-lex order: sorted
/// by `|j|_inf` first, then lexicographically on components. This is the
/// canonical row/column ordering of truncated operator matrices.
pub fn freq_box(n: usize, radius: i64) -> Vec<FreqIndex> {
    let mut out = Vec::new();
    let mut cur = alloc::vec![0i64; n];
    fn rec(cur: &mut Vec<i64>, pos: usize, radius: i64, out: &mut Vec<FreqIndex>) {
        if pos == cur.len() {
            out.push(FreqIndex::new(cur.clone()));
            return;
        }
        for v in -radius..=radius {
            cur[pos] = v;
            rec(cur, pos + 1, radius, out);
        }
        cur[pos] = 0;
    }
    rec(&mut cur, 0, radius, &mut out);
    out.sort_by(|a, b| graded_lex_cmp_i64(&a.components, &b.components));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_order_and_factorial() {
        let a = MultiIndex::new([2u32, 3]);
        assert_eq!(a.order(), 5);
        assert!((a.factorial() - 12.0).abs() < 1e-12);
        // 40! via lgamma stays finite and accurate in relative terms.
        let big = MultiIndex::new([40u32]);
        let ln40 = big.ln_factorial();
        assert!((ln40 - 110.32063971475738).abs() < 1e-9);
    }

    #[test]
    fn graded_lex_enumeration() {
        let list = multi_indices_upto(2, 2);
        let expect: alloc::vec::Vec<MultiIndex> = alloc::vec![
            MultiIndex::new([0u32, 0]),
            MultiIndex::new([0u32, 1]),
            MultiIndex::new([1u32, 0]),
            MultiIndex::new([0u32, 2]),
            MultiIndex::new([1u32, 1]),
            MultiIndex::new([2u32, 0]),
        ];
        assert_eq!(list, expect);
    }

    #[test]
    fn freq_box_graded_lex() {
        let b = freq_box(1, 2);
        let flat: alloc::vec::Vec<i64> = b.iter().map(|j| j.components()[0]).collect();
        assert_eq!(flat, alloc::vec![0, -1, 1, -2, 2]);
        assert_eq!(freq_box(2, 3).len(), 49);
    }

    #[test]
    fn euclidean_norm_matches_components() {
        let j = FreqIndex::new([3i64, -4]);
        assert!((j.euclidean_norm() - 5.0).abs() < 1e-15);
        assert_eq!(j.linf(), 4);
    }
}
