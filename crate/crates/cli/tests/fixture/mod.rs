//! Shared fixtures for the binary-level tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use persifold::grid::GridDims;
use persifold::synth;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_persifold")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn write_f64_volume(dir: &Path, name: &str, dims: &[usize], values: &[f64]) -> PathBuf {
    let payload: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    let path = dir.join(name);
    std::fs::write(&path, payload).unwrap();
    let header = serde_json::json!({
        "dims": dims,
        "scalar_type": "f64",
        "name": name,
    });
    std::fs::write(
        dir.join(format!("{name}.json")),
        serde_json::to_string_pretty(&header).unwrap(),
    )
    .unwrap();
    path
}

pub fn write_f32_volume(dir: &Path, name: &str, dims: &[usize], values: &[f32]) -> PathBuf {
    let payload: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    let path = dir.join(name);
    std::fs::write(&path, payload).unwrap();
    let header = serde_json::json!({
        "dims": dims,
        "scalar_type": "f32",
        "name": name,
    });
    std::fs::write(
        dir.join(format!("{name}.json")),
        serde_json::to_string_pretty(&header).unwrap(),
    )
    .unwrap();
    path
}

/// Deterministic 9x9 f32 field used by the golden-file tests.
pub fn golden_field() -> Vec<f32> {
    let dims = GridDims::new(&[9, 9]).unwrap();
    synth::bump_noise(dims, 7, 0.3)
        .into_iter()
        .map(|v| v as f32)
        .collect()
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}
