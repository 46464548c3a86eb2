//! Drives the built binary.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_macroscopality"))
        .args(args)
        .output()
        .unwrap();
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

/// Value of `key` in `measure`/`peaks` output.
pub fn field(stdout: &str, key: &str) -> Option<f64> {
    stdout.lines().find_map(|line| {
        let mut parts = line.split_whitespace();
        (parts.next() == Some(key))
            .then(|| parts.next()?.parse().ok())
            .flatten()
    })
}

/// Table rows of `paper`, without the header and note lines.
pub fn paper_rows(stdout: &str) -> Vec<Vec<String>> {
    stdout
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

/// `(theta, overlap)` rows of a scan CSV.
pub fn parse_csv(text: &str) -> Vec<(f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,overlap"));
    lines
        .map(|l| {
            let (t, o) = l.split_once(',').unwrap();
            (t.parse().unwrap(), o.parse().unwrap())
        })
        .collect()
}

pub const BRUNE: &str = "type = \"coherent_cat\"\nalpha = 3.1\nphi = 0.5\n";
pub const QUBITS: &str = "type = \"qubit\"\nn = 100\neps = 0.3\n";
