//! Exit-code behavior of the `torsym` binary.

use std::process::Command;

fn torsym() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torsym"))
}

#[test]
fn malformed_config_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "dimension = 4\ngrid_points = 64\n").unwrap();
    let out = torsym().args(["classify", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_config_exits_3() {
    let out = torsym().args(["norms", "--config", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn passing_run_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ok.toml");
    std::fs::write(
        &path,
        "dimension = 1\ngrid_points = 64\nsymbol_cutoff = 8\nmatrix_cutoff = 6\n\
         a_max = 8\ncatalog = \"analytic-pole\"\n",
    )
    .unwrap();
    let out = torsym()
        .args(["norms", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("norms.json").exists());
    assert!(dir.path().join("norms.meta.json").exists());
}

#[test]
fn unsupported_exponent_exits_3() {
    // norms requires 2p > n; p = 0 is a usage error, not a check failure
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p0.toml");
    std::fs::write(
        &path,
        "dimension = 1\ngrid_points = 64\nsymbol_cutoff = 8\nmatrix_cutoff = 6\n\
         a_max = 8\np_values = [0]\ncatalog = \"constant\"\n",
    )
    .unwrap();
    let out = torsym()
        .args(["norms", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
