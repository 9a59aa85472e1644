//! Experiment configuration: a single TOML file, strictly validated.
//! Unknown keys are errors, so a misspelled field can never fall back to
//! a silent default.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Power-iteration residual target for operator norms.
    pub norm: f64,
    /// Entrywise bound for round-trip comparisons.
    pub round_trip: f64,
    /// Scale below which an orbit identity error counts as zero.
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { norm: 1e-7, round_trip: 1e-11, identity: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// JSON report file name (relative to the output directory).
    pub json: Option<String>,
    /// CSV table file name (relative to the output directory).
    pub csv: Option<String>,
    /// Binary dump of the command's dense operator, when it builds one
    /// (`invert`: the inverse; `recover`: the B^beta realization).
    pub matrix: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Torus dimension n.
    pub dimension: usize,
    /// Grid points per coordinate N (power of two, >= 8).
    pub grid_points: usize,
    /// Symbol cutoff J: entries a_j for |j|_inf <= J.
    pub symbol_cutoff: i64,
    /// Matrix cutoff K: dense realization on |k|_inf <= K.
    pub matrix_cutoff: i64,
    /// Largest derivative order in growth tables.
    pub a_max: u32,
    /// Smoothing exponents p for the norm bound.
    #[serde(default = "default_p_values")]
    pub p_values: Vec<u32>,
    /// Multi-index beta for the recovery pipeline (defaults to (2,...,2)).
    #[serde(default)]
    pub beta: Option<Vec<u32>>,
    /// Catalog symbol name (exclusive with `expression`).
    #[serde(default)]
    pub catalog: Option<String>,
    /// Symbol expression in the x/j DSL (exclusive with `catalog`).
    #[serde(default)]
    pub expression: Option<String>,
    /// Diagonal shift lambda in the invertibility construction.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Perturbation scale epsilon in the invertibility construction.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// RNG seed; the --seed flag overrides it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "Tolerances::default")]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Option<OutputPaths>,
}

fn default_p_values() -> Vec<u32> {
    vec![1]
}

fn default_lambda() -> f64 {
    4.0
}

fn default_epsilon() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// `parse(emit(config)) = config`; every envelope re-checks this so a
    /// report can always be reproduced from its own echo.
    pub fn round_trips(&self) -> bool {
        matches!(ExperimentConfig::from_toml(&self.to_toml()), Ok(ref c) if c == self)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(1..=3).contains(&self.dimension) {
            return Err(invalid("dimension", format!("must be 1, 2, or 3, got {}", self.dimension)));
        }
        if self.grid_points < 8 || !self.grid_points.is_power_of_two() {
            return Err(invalid(
                "grid_points",
                format!("must be a power of two >= 8, got {}", self.grid_points),
            ));
        }
        let quarter = (self.grid_points / 4) as i64;
        if self.symbol_cutoff > quarter {
            return Err(invalid(
                "symbol_cutoff",
                format!("J = {} exceeds N/4 = {quarter}", self.symbol_cutoff),
            ));
        }
        if self.matrix_cutoff < 1 || self.matrix_cutoff > self.symbol_cutoff {
            return Err(invalid(
                "matrix_cutoff",
                format!(
                    "need 1 <= K <= J, got K = {}, J = {}",
                    self.matrix_cutoff, self.symbol_cutoff
                ),
            ));
        }
        if self.a_max < 4 {
            return Err(invalid("a_max", format!("must be >= 4, got {}", self.a_max)));
        }
        for (name, t) in [
            ("tolerances.norm", self.tolerances.norm),
            ("tolerances.round_trip", self.tolerances.round_trip),
            ("tolerances.identity", self.tolerances.identity),
        ] {
            if !(t > 0.0) {
                return Err(ConfigError::Invalid {
                    field: "tolerances",
                    message: format!("{name} must be > 0, got {t}"),
                });
            }
        }
        if let Some(beta) = &self.beta {
            if beta.len() != self.dimension {
                return Err(invalid(
                    "beta",
                    format!("expected {} components, got {}", self.dimension, beta.len()),
                ));
            }
        }
        match (&self.catalog, &self.expression) {
            (Some(_), Some(_)) => {
                Err(invalid("catalog", "catalog and expression are mutually exclusive"))
            }
            (None, None) => Err(invalid("catalog", "one of catalog or expression is required")),
            _ => Ok(()),
        }
    }
}
