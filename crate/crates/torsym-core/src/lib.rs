//! Discrete-symbol pseudodifferential calculus on the torus `T^n`.
//!
//! A bounded operator on `L^2(T^n)` with a well-behaved discrete symbol
//! `a_j = e_{-j} (A e_j)` can be studied entirely through the family
//! `(a_j)`: quantization, translation conjugation, derivative growth, and
//! the factorial estimates that decide whether the translation orbit
//! `y -> T_y A T_{-y}` is smooth or real-analytic. This crate provides the
//! desk-scale (truncated) versions of all of those objects:
//!
//! * [`periodic`] — truncated Fourier representation of functions on `T^n`,
//!   spectral differentiation, translation, anti-aliased products;
//! * [`symbol`] — discrete-symbol families, the order-`m` test and the
//!   uniform-analyticity fit;
//! * [`quantize`] — dense matrix realization on the modes `|k|_inf <= K`,
//!   symbol extraction, the `C_p` norm bound;
//! * [`orbit`] — finite-difference checks of the derivative identity
//!   `d^a_y (T_y A T_{-y}) = (-1)^|a| T_y A^a T_{-y}` and orbit growth tables;
//! * [`lbeta`] — the `L^beta` multiplier machinery, symbol recovery, and
//!   the shifted-factorial constants.
//!
//! Everything is a pure function of its inputs; all types are immutable
//! after construction. The crate is `no_std`-compatible (`alloc` required).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod catalog;
pub mod error;
pub mod expr;
pub mod fft;
pub mod fit;
pub mod grid;
pub mod index;
pub mod lattice;
pub mod lbeta;
pub mod matrix;
pub mod orbit;
pub mod periodic;
pub mod quantize;
pub mod rng;
pub mod symbol;

pub use error::CoreError;
pub use grid::TorusGrid;
pub use index::{FreqIndex, MultiIndex};
pub use matrix::CMatrix;
pub use periodic::PeriodicFunction;
pub use quantize::TruncatedOperator;
pub use symbol::DiscreteSymbol;

/// Default cap on the spectral differentiation order. Beyond this the
/// `(ij)^alpha` amplification exceeds what double precision can carry.
pub const DEFAULT_DERIVATIVE_CAP: u32 = 20;

/// Default oversampling factor for grid sup-norms.
pub const DEFAULT_OVERSAMPLE: usize = 4;
