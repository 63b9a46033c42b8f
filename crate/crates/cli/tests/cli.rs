//! End-to-end checks of the binary: exit codes, file outputs, determinism.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_convmap"))
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .unwrap()
        .to_path_buf()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("convmap-test-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Load a shipped config and point its outputs at a scratch directory.
fn patched_config(name: &str, dir: &Path, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let text = std::fs::read_to_string(workspace_root().join("configs").join(name)).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let outputs = value["outputs"].as_object().unwrap().clone();
    for (key, _) in outputs {
        value["outputs"][&key] =
            serde_json::Value::String(dir.join(format!("out.{key}")).display().to_string());
    }
    edit(&mut value);
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    path
}

/// Small tube config for fast exit-code checks.
fn fast_family_edit(value: &mut serde_json::Value) {
    value["family"]["nodes"] = 256.into();
    value["family"]["j_range"] = serde_json::json!([1, 3]);
    value["convergence"]["interior_grid"] = 9.into();
    value["convergence"]["boundary_grid"] = 32.into();
    value["convergence"]["boundary_offset"] = 1e-3.into();
    value["kernel_grid"] = 16.into();
}

#[test]
fn family_small_run_exits_zero_with_outputs() {
    let dir = temp_dir("family-small");
    let config = patched_config("family_tube.json", &dir, fast_family_edit);
    let out = bin()
        .arg("family")
        .arg(&config)
        .arg("--quiet")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4, "header plus one row per index");
    assert!(dir.join("out.json").exists());
    assert!(dir.join("out.svg").exists());
}

#[test]
fn malformed_config_exits_2_and_names_the_field() {
    let dir = temp_dir("malformed");
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{ "seed": 1, "outputs": {}, "wobble": true }"#).unwrap();
    let out = bin().arg("family").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("wobble"),
        "stderr should name the field: {stderr}"
    );
}

#[test]
fn compact_overlapping_tube_exits_3() {
    let dir = temp_dir("overlap");
    let config = patched_config("family_tube.json", &dir, |value| {
        fast_family_edit(value);
        // Park the compact arc on top of the tube attachment.
        value["convergence"]["boundary_compact"]["center_angle"] = std::f64::consts::PI.into();
        value["family"]["arcspec"]["center_angle"] = std::f64::consts::PI.into();
    });
    let out = bin().arg("family").arg(&config).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn oracle_passes_on_a_fresh_build() {
    let out = bin()
        .arg("oracle")
        .arg("--nodes")
        .arg("128,256")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("disk oracle"), "missing table: {stdout}");
}

#[test]
fn oracle_refuses_tiny_node_counts() {
    let out = bin()
        .arg("oracle")
        .arg("--nodes")
        .arg("8,128")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_detects_injected_bug() {
    let out = bin()
        .arg("oracle")
        .arg("--nodes")
        .arg("64,128")
        .arg("--inject-oracle-bug")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(5),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn lindelof_shipped_config_passes() {
    let dir = temp_dir("lindelof");
    let config = patched_config("lindelof.json", &dir, |value| {
        // Keep the integration run light; the acceptance suite runs the full
        // trial count.
        value["lindelof"][0]["wos"]["trials"] = 20_000.into();
    });
    let out = bin()
        .arg("lindelof")
        .arg(&config)
        .arg("--quiet")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out.json")).unwrap()).unwrap();
    assert_eq!(report["all_pass"], serde_json::Value::Bool(true));
}

#[test]
fn lindelof_short_arc_exits_3() {
    let dir = temp_dir("lindelof-short");
    let config = patched_config("lindelof.json", &dir, |value| {
        // Demand the full circle: the notch arc cannot satisfy m = 1.
        value["lindelof"][0]["m"] = 1.into();
        value["lindelof"][0]["wos"] = serde_json::Value::Null;
    });
    let out = bin().arg("lindelof").arg(&config).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn lindelof_invalid_notch_exits_2() {
    let dir = temp_dir("lindelof-badnotch");
    let config = patched_config("lindelof.json", &dir, |value| {
        value["lindelof"][0]["domain"]["notch_hi"] = (-3.0).into();
    });
    let out = bin().arg("lindelof").arg(&config).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn lindelof_tiny_trials_warn_but_run() {
    let dir = temp_dir("lindelof-warn");
    let config = patched_config("lindelof.json", &dir, |value| {
        value["lindelof"][0]["wos"]["trials"] = 10.into();
    });
    let out = bin()
        .arg("lindelof")
        .arg(&config)
        .arg("--quiet")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("warning"),
        "expected a warning, got: {stderr}"
    );
}
