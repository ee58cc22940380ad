#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use glasd::corr::CorrelationMatrix;
use glasd::data::DataMatrix;
use glasd::io::{read_corr_csv, write_data_csv};

pub fn glasd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glasd"))
        .args(args)
        .output()
        .expect("failed to launch glasd")
}

/// Runs `glasd` and panics with its stderr unless it exits with `code`.
pub fn expect_code(args: &[&str], code: i32) -> Output {
    let out = glasd(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "glasd {args:?}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn ok(args: &[&str]) -> Output {
    expect_code(args, 0)
}

pub fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

pub fn write_csv(path: &Path, x: &DataMatrix) {
    write_data_csv(fs::File::create(path).unwrap(), x).unwrap();
}

pub fn corr(path: &Path) -> CorrelationMatrix {
    read_corr_csv(path).unwrap().0
}

/// Every file in `a` other than timing output has a byte-identical twin in `b`.
pub fn assert_same_artifacts(a: &Path, b: &Path) -> usize {
    let mut checked = 0;
    for entry in fs::read_dir(a).unwrap() {
        let name = entry.unwrap().file_name();
        if name.to_string_lossy().starts_with("timing") {
            continue;
        }
        let left = fs::read(a.join(&name)).unwrap();
        let right = fs::read(b.join(&name)).unwrap_or_default();
        assert!(left == right, "{} differs", name.to_string_lossy());
        checked += 1;
    }
    checked
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}
