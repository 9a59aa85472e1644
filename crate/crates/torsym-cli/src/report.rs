//! Report envelopes and deterministic serialization.
//!
//! JSON output is byte-identical across re-runs of the same (config, seed):
//! object keys are sorted, floats are printed with 17 significant digits,
//! and wall-clock data lives in a `.meta.json` sidecar that is excluded
//! from any comparison. Files are written atomically (temp + rename).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::{Map, Value};

use crate::config::ExperimentConfig;

/// Schema version of the JSON reports.
pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Internally inconsistent or inconclusive result worth inspection.
    Finding,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Finding => "finding",
        }
    }

    pub fn exit_code(self, strict: bool) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Finding => {
                if strict {
                    1
                } else {
                    2
                }
            }
        }
    }

    /// Combine: fail dominates, then finding.
    pub fn merge(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Finding, _) | (_, Status::Finding) => Status::Finding,
            _ => Status::Pass,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportEnvelope {
    pub command: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub records: Value,
    pub status: Status,
    /// Rows for the optional CSV table: fixed header + data rows.
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    /// Dense operator produced by the command, if it materialized one.
    pub matrix: Option<torsym_core::TruncatedOperator>,
}

impl ReportEnvelope {
    pub fn to_json_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("artifact_version".into(), Value::from(ARTIFACT_VERSION));
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert(
            "config".into(),
            serde_json::to_value(&self.config).expect("config serializes"),
        );
        root.insert("config_round_trips".into(), Value::Bool(self.config.round_trips()));
        root.insert("seed".into(), Value::from(self.seed));
        root.insert("records".into(), self.records.clone());
        root.insert("status".into(), Value::String(self.status.as_str().into()));
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, &self.to_json_value(), 0);
        out.push('\n');
        out
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = self.csv_header.join(",");
        out.push('\n');
        for row in &self.csv_rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Format a float with 17 significant digits; the result is a valid JSON
/// number and round-trips to the same f64.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no non-finite numbers; keep them greppable
        format!("\"{x}\"")
    }
}

fn write_indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| !n.is_i64() && !n.is_u64()) {
                out.push_str(&format_f64(f));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", Value::String(s.clone()));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                write_indent(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            write_indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's map preserves insertion order only with a
            // feature flag; sort explicitly so output never depends on it
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                write_indent(out, depth + 1);
                let _ = write!(out, "{}: ", Value::String((*key).clone()));
                write_value(out, &map[*key], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            write_indent(out, depth);
            out.push('}');
        }
    }
}

/// Write `content` to `path` atomically: temp file in the same directory,
/// then rename over the target.
pub fn write_atomic(path: &Path, content: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let file_name = path.file_name().context("output path has no file name")?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp", file_name.to_string_lossy()));
    {
        let mut f = std::fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(content)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
        .with_context(|| format!("renaming into place: {}", path.display()))?;
    Ok(())
}

/// Write the JSON report, its timestamp sidecar, and (optionally) the CSV
/// table. Returns the JSON path.
pub fn write_report(
    envelope: &ReportEnvelope,
    out_dir: &Path,
    json_name: &str,
    csv_name: Option<&str>,
) -> anyhow::Result<PathBuf> {
    let json_path = out_dir.join(json_name);
    write_atomic(&json_path, envelope.to_json_string().as_bytes())?;

    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = format!(
        "{{\n  \"report\": {},\n  \"written_unix_seconds\": {stamp}\n}}\n",
        Value::String(json_name.into())
    );
    write_atomic(&json_path.with_extension("meta.json"), meta.as_bytes())?;

    if let Some(name) = csv_name {
        write_atomic(&out_dir.join(name), envelope.to_csv_string().as_bytes())?;
    }
    Ok(json_path)
}

/// Shorthand for building `records` objects.
pub fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_config() -> ExperimentConfig {
        ExperimentConfig::from_toml(
            "dimension = 1\ngrid_points = 64\nsymbol_cutoff = 8\nmatrix_cutoff = 6\n\
             a_max = 8\ncatalog = \"constant\"\n",
        )
        .unwrap()
    }

    #[test]
    fn json_output_is_deterministic() {
        let env = ReportEnvelope {
            command: "classify".into(),
            config: sample_config(),
            seed: 7,
            records: obj(vec![("b", num(0.1)), ("a", num(2.0))]),
            status: Status::Pass,
            csv_header: vec!["x"],
            csv_rows: vec![],
            matrix: None,
        };
        let a = env.to_json_string();
        let b = env.to_json_string();
        assert_eq!(a, b);
        // keys sorted regardless of insertion order
        assert!(a.find("\"a\"").unwrap() < a.find("\"b\"").unwrap());
    }

    #[test]
    fn floats_have_17_significant_digits() {
        assert_eq!(format_f64(core::f64::consts::PI), "3.1415926535897931e0");
        let x: f64 = format_f64(0.1).parse().unwrap();
        assert_eq!(x, 0.1);
    }

    #[test]
    fn status_merge_and_exit_codes() {
        assert_eq!(Status::Pass.merge(Status::Finding), Status::Finding);
        assert_eq!(Status::Finding.merge(Status::Fail), Status::Fail);
        assert_eq!(Status::Pass.exit_code(false), 0);
        assert_eq!(Status::Fail.exit_code(false), 1);
        assert_eq!(Status::Finding.exit_code(false), 2);
        assert_eq!(Status::Finding.exit_code(true), 1);
    }

    #[test]
    fn atomic_write_creates_parents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/report.json");
        write_atomic(&path, b"{}\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"{}\n");
    }
}
