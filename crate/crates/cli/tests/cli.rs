use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use transcend::exactnum::NumberField;
use transcend::specfile::{system, RawSystem};
use transcend::systems::companion;

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transcend")).args(args).output().expect("spawn transcend")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn diagnostic(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON diagnostic")
}

#[test]
fn fredholm_is_regular() {
    let s = spec("fredholm.json");
    let out = run(&["regular", s.to_str().unwrap(), "--require"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["regular"], true);
    assert_eq!(v["result"]["witness"], "no-singular-points");
}

#[test]
fn pole_requires_exit_two() {
    let s = spec("pole_half.json");
    let out = run(&["regular", s.to_str().unwrap(), "--require"]);
    assert_eq!(out.status.code(), Some(2));
    let d = diagnostic(&out);
    assert_eq!(d["schema"], 1);
    assert_eq!(d["exit_code"], 2);
    assert_eq!(json(&out)["result"]["regular"], false);

    let out = run(&["regular", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["regular"], false);
    assert_eq!(v["result"]["n"], 0);
}

#[test]
fn pade_valuation() {
    let s = spec("exp.json");
    let out = run(&["pade", s.to_str().unwrap(), "--n", "2", "--vstar", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["summary"]["valuation"], "5");
    assert_eq!(v["parameters"]["n"], 2);
}

#[test]
fn streamed_csv_has_every_record() {
    let s = spec("fredholm.json");
    let out = run(&["scan", s.to_str().unwrap(), "--h-max", "64", "--records", "all", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "coeffs");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), (129 * 129 - 1) / 2);
    assert!(rows.iter().all(|r| &r[6] == "nonzero"));
}

#[test]
fn bad_input_exits_one() {
    let dir = std::env::temp_dir().join(format!("transcend-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "functions": [], "unexpected": 1}"#).unwrap();
    for args in [
        vec!["series", bad.to_str().unwrap()],
        vec!["series", "/nonexistent/instance.json"],
        vec!["series", "--no-such-flag"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(diagnostic(&out)["exit_code"], 1);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn short_truncation_exits_three() {
    let s = spec("cossin.json");
    let out = run(&["relations", s.to_str().unwrap(), "--order", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(diagnostic(&out)["error"], "truncation-too-small");
}

#[test]
fn reports_are_reproducible() {
    let s = spec("cossin.json");
    for cmd in ["series", "ledger", "multiplicity", "eval"] {
        let a = run(&[cmd, s.to_str().unwrap(), "--seed", "5"]);
        let b = run(&[cmd, s.to_str().unwrap(), "--seed", "5"]);
        assert_eq!(a.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let v = json(&a);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], cmd);
    }
}

#[test]
fn system_output_round_trips() {
    let s = spec("fredholm.json");
    let out = run(&["system", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let raw: RawSystem = serde_json::from_value(v["result"]["companions"][0]["system"].clone()).unwrap();
    let q = NumberField::rationals();
    let parsed = system(&q, &raw).unwrap();
    let text = std::fs::read_to_string(&s).unwrap();
    let file = transcend::specfile::SpecFile::from_json(&text).unwrap();
    assert_eq!(parsed, companion(&file.functions[0]).unwrap());
}

#[test]
fn output_file_matches_stdout() {
    let s = spec("exp.json");
    let path = std::env::temp_dir().join(format!("transcend-out-{}.json", std::process::id()));
    let a = run(&["series", s.to_str().unwrap()]);
    let b = run(&["series", s.to_str().unwrap(), "--out", path.to_str().unwrap()]);
    assert_eq!(b.status.code(), Some(0));
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_file(&path).ok();
}
