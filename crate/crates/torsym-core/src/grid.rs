//! The uniform tensor grid on `T^n = R^n / (2 pi Z)^n`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{CoreError, CoreResult};

/// Uniform grid with `N` points per dimension, nodes `x_k = 2 pi k / N`.
///
/// `N` must be even and at least 4; the associated quadrature weight
/// `(2 pi / N)^n` integrates trigonometric polynomials of degree `< N/2`
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    dimension: usize,
    points_per_dim: usize,
}

impl TorusGrid {
    pub fn new(dimension: usize, points_per_dim: usize) -> CoreResult<Self> {
        if dimension == 0 {
            return Err(CoreError::InvalidArgument("dimension must be >= 1".into()));
        }
        if points_per_dim < 4 || points_per_dim % 2 != 0 {
            return Err(CoreError::InvalidArgument(alloc::format!(
                "points_per_dim must be even and >= 4, got {points_per_dim}"
            )));
        }
        Ok(TorusGrid { dimension, points_per_dim })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn total_nodes(&self) -> usize {
        self.points_per_dim.pow(self.dimension as u32)
    }

    /// Quadrature weight `(2 pi / N)^n`.
    pub fn weight(&self) -> f64 {
        libm::pow(2.0 * PI / self.points_per_dim as f64, self.dimension as f64)
    }

    /// Same dimension, `factor * N` points per dimension.
    pub fn refine(&self, factor: usize) -> TorusGrid {
        TorusGrid {
            dimension: self.dimension,
            points_per_dim: self.points_per_dim * factor,
        }
    }

    /// Coordinates of the node with row-major flat index `flat`.
    pub fn node(&self, flat: usize) -> Vec<f64> {
        let n = self.dimension;
        let nn = self.points_per_dim;
        let step = 2.0 * PI / nn as f64;
        let mut out = alloc::vec![0.0; n];
        let mut rem = flat;
        for d in (0..n).rev() {
            out[d] = (rem % nn) as f64 * step;
            rem /= nn;
        }
        out
    }

    /// Iterate node coordinates in row-major order.
    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.total_nodes()).map(move |i| self.node(i))
    }

    pub fn check_same(&self, other: &TorusGrid) -> CoreResult<()> {
        if self != other {
            return Err(CoreError::DimensionMismatch {
                expected: alloc::format!("grid n={} N={}", self.dimension, self.points_per_dim),
                got: alloc::format!("grid n={} N={}", other.dimension, other.points_per_dim),
            });
        }
        Ok(())
    }

    pub fn check_len(&self, len: usize) -> CoreResult<()> {
        if len != self.total_nodes() {
            return Err(CoreError::DimensionMismatch {
                expected: self.total_nodes().to_string(),
                got: len.to_string(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_tiny_n() {
        assert!(TorusGrid::new(1, 7).is_err());
        assert!(TorusGrid::new(1, 2).is_err());
        assert!(TorusGrid::new(0, 8).is_err());
        assert!(TorusGrid::new(2, 8).is_ok());
    }

    #[test]
    fn node_coordinates_row_major() {
        let g = TorusGrid::new(2, 4).unwrap();
        assert_eq!(g.total_nodes(), 16);
        let x = g.node(5); // k = (1, 1)
        assert!((x[0] - PI / 2.0).abs() < 1e-15);
        assert!((x[1] - PI / 2.0).abs() < 1e-15);
    }
}
