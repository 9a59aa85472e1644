//! Shipped symbol families used by the test suites and the CLI.
//!
//! Four families are plain expressions in the symbol DSL; the bump and
//! random trigonometric-polynomial families are built in (the bump needs
//! a guarded evaluation at its flat point, the random family a seeded
//! coefficient draw).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};
use crate::expr::parse_symbol_spec;
use crate::grid::TorusGrid;
use crate::index::freq_box;
use crate::periodic::PeriodicFunction;
use crate::rng::SplitMix64;
use crate::symbol::DiscreteSymbol;

/// Band limit of the random trigonometric-polynomial family.
pub const RANDOM_TRIG_BANDWIDTH: i64 = 3;

/// All shipped family names, in catalog order.
pub const CATALOG_NAMES: [&str; 6] = [
    "constant",
    "multiplication",
    "analytic-pole",
    "jdecay",
    "bump",
    "random-trig",
];

/// Static description of one family at a given dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// DSL source, when the family is expression-backed.
    pub expression: Option<String>,
    /// Symbol order of the family (all shipped families have order <= 0).
    pub order: f64,
    /// Whether the family is uniformly analytic (the bump is the one
    /// smooth-but-not-analytic member).
    pub uniformly_analytic: bool,
}

/// Look up a family by name for dimension `n`.
pub fn catalog_entry(name: &str, n: usize) -> CoreResult<CatalogEntry> {
    if n == 0 {
        return Err(CoreError::InvalidArgument("dimension must be >= 1".into()));
    }
    let entry = match name {
        "constant" => CatalogEntry {
            name: "constant",
            summary: "a_j = 1 for every j",
            expression: Some("1".into()),
            order: 0.0,
            uniformly_analytic: true,
        },
        "multiplication" => {
            let mut src = String::from("exp(cos(x1)");
            for i in 2..=n {
                src.push_str(&format!("+cos(x{i})"));
            }
            src.push(')');
            CatalogEntry {
                name: "multiplication",
                summary: "multiplication by exp(sum_i cos(x_i)), same for every j",
                expression: Some(src),
                order: 0.0,
                uniformly_analytic: true,
            }
        }
        "analytic-pole" => CatalogEntry {
            name: "analytic-pole",
            summary: "a_j = 1/(2-exp(i*x1)), pole off the real torus",
            expression: Some("1/(2-exp(i*x1))".into()),
            order: 0.0,
            uniformly_analytic: true,
        },
        "jdecay" => CatalogEntry {
            name: "jdecay",
            summary: "a_j = exp(i*x1)/(1+|j|), decaying in j",
            expression: Some("exp(i*x1)/(1+abs(j))".into()),
            order: 0.0,
            uniformly_analytic: true,
        },
        "bump" => CatalogEntry {
            name: "bump",
            summary: "multiplication by the periodized bump exp(-1/sin^2(x1/2)), smooth but not analytic",
            expression: None,
            order: 0.0,
            uniformly_analytic: false,
        },
        "random-trig" => CatalogEntry {
            name: "random-trig",
            summary: "multiplication by a seeded random trigonometric polynomial of band 3",
            expression: None,
            order: 0.0,
            uniformly_analytic: true,
        },
        other => {
            return Err(CoreError::InvalidArgument(format!(
                "unknown catalog family \"{other}\" (known: {})",
                CATALOG_NAMES.join(", ")
            )))
        }
    };
    Ok(entry)
}

/// The periodized bump value at a single point, guarded at the flat point
/// `x1 = 0` where `exp(-1/sin^2)` underflows to exactly zero anyway.
pub fn bump_value(x1: f64) -> f64 {
    let s = libm::sin(0.5 * x1);
    let s2 = s * s;
    if s2 < 1e-12 {
        0.0
    } else {
        libm::exp(-1.0 / s2)
    }
}

/// The random trigonometric polynomial for a seed: band-limited to
/// `|k|_inf <= 3` with coefficients drawn from the seeded generator,
/// damped by `1/(1+|k|^2)`.
pub fn random_trig_function(grid: TorusGrid, seed: u64) -> PeriodicFunction {
    let mut rng = SplitMix64::new(seed);
    let mut f = PeriodicFunction::zero(grid);
    for k in freq_box(grid.dimension(), RANDOM_TRIG_BANDWIDTH) {
        let damp = 1.0 / (1.0 + k.euclidean_norm() * k.euclidean_norm());
        let c = Complex64::new(rng.next_sym(), rng.next_sym()) * damp;
        let e = PeriodicFunction::exponential(grid, &k).expect("box index fits the grid");
        f.accumulate(&e, c).expect("same grid");
    }
    f
}

/// Build a catalog family on a grid. `seed` only affects "random-trig".
pub fn build_catalog_symbol(
    name: &str,
    grid: TorusGrid,
    cutoff: i64,
    seed: u64,
) -> CoreResult<DiscreteSymbol> {
    let entry = catalog_entry(name, grid.dimension())?;
    if let Some(src) = &entry.expression {
        let spec = parse_symbol_spec(src)?;
        return crate::symbol::build_symbol(&spec, grid, cutoff);
    }
    match name {
        "bump" => {
            let mut values = Vec::with_capacity(grid.total_nodes());
            for x in grid.nodes() {
                values.push(Complex64::new(bump_value(x[0]), 0.0));
            }
            let phi = PeriodicFunction::analyze(grid, &values)?;
            DiscreteSymbol::from_fn(grid, cutoff, |_| Ok(phi.clone()))
        }
        "random-trig" => {
            let phi = random_trig_function(grid, seed);
            DiscreteSymbol::from_fn(grid, cutoff, |_| Ok(phi.clone()))
        }
        _ => unreachable!("expression-backed families handled above"),
    }
}
