//! End-to-end tests of the command-line binary: output schemas, byte-exact
//! JSON round-trips, format parity, exit codes, and the seed override.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn latlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latlab"))
        .args(args)
        .env_remove("LATLAB_SEED")
        .output()
        .expect("binary runs")
}

fn latlab_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latlab"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 output")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("latlab-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file written");
    path
}

const U_JSON: &str = r#"{"label":"U","gram":[[0,1],[1,0]]}"#;
const GLUE_SUB_JSON: &str =
    r#"{"ambient":{"gram":[[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]},"basis":[[1,-1,0,0]]}"#;

#[test]
fn moduli_report_matches_published_shape() {
    let out = latlab(&["k3-moduli", "--genus", "3", "--mukai", "0,1,-2", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out).trim_end(),
        r#"{"n":3,"div":2,"crs":2,"disc_T":4,"gluing_order":2,"disc_ns":4,"fine":false}"#
    );
}

#[test]
fn json_reports_round_trip_byte_identically() {
    let sub = write_temp("roundtrip-sub.json", GLUE_SUB_JSON);
    for args in [
        vec!["glue", "--in", sub.to_str().unwrap()],
        vec!["lattice-ortho", "--in", sub.to_str().unwrap()],
        vec!["k3-moduli", "--genus", "5", "--mukai", "1,1,1"],
        vec!["k3-counterexample", "--g-min", "2", "--g-max", "6"],
        vec!["k3-compare", "--genus", "2", "--v", "0,1,-1", "--u", "0,1,0"],
    ] {
        let out = latlab(&args);
        assert!(out.status.success(), "{args:?}: {}", stderr_str(&out));
        let text = stdout_str(&out);
        let text = text.trim_end();
        let parsed: Value = serde_json::from_str(text).expect("valid JSON");
        let reserialized = serde_json::to_string(&parsed).unwrap();
        assert_eq!(reserialized, text, "round trip changed bytes for {args:?}");
    }
}

#[test]
fn markdown_and_json_carry_identical_values() {
    let json_out = latlab(&["k3-compare", "--genus", "4", "--v", "0,1,-3", "--u", "0,1,0"]);
    let md_out = latlab(&[
        "k3-compare", "--genus", "4", "--v", "0,1,-3", "--u", "0,1,0", "--format", "md",
    ]);
    assert!(json_out.status.success() && md_out.status.success());
    let parsed: Value = serde_json::from_str(stdout_str(&json_out).trim_end()).unwrap();
    let object = parsed.as_object().unwrap();

    let md = stdout_str(&md_out);
    let lines: Vec<&str> = md.lines().collect();
    assert_eq!(lines.len(), 3, "header, rule, one row: {md}");
    let headers: Vec<&str> = lines[0].trim_matches('|').split('|').map(str::trim).collect();
    let cells: Vec<&str> = lines[2].trim_matches('|').split('|').map(str::trim).collect();
    assert_eq!(headers.len(), cells.len());
    assert_eq!(headers.len(), object.len(), "markdown mirrors JSON fields");
    for (header, cell) in headers.iter().zip(&cells) {
        let value = &object[*header];
        let expected = match value {
            Value::Array(items) => items
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        assert_eq!(*cell, expected, "column {header}");
    }
}

#[test]
fn counterexample_table_has_uniform_verdict() {
    let out = latlab(&["k3-counterexample", "--g-min", "2", "--g-max", "5", "--format", "md"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row.contains("NOT_L_EQUIVALENT"), "{row}");
    }

    let empty = latlab(&["k3-counterexample", "--g-min", "5", "--g-max", "2"]);
    assert!(empty.status.success());
    assert_eq!(stdout_str(&empty).trim_end(), "[]");
}

#[test]
fn divisibility_example() {
    let lattice = write_temp("u.json", U_JSON);
    let out = latlab(&["lattice-div", "--in", lattice.to_str().unwrap(), "--vector", "1,0"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim_end(), r#"{"div":1}"#);

    let disc = latlab(&["lattice-disc", "--in", lattice.to_str().unwrap()]);
    assert_eq!(stdout_str(&disc).trim_end(), r#"{"disc":1}"#);
}

#[test]
fn determinants_beyond_the_number_limit_become_strings() {
    // 2^54 exceeds the 2^53 wire limit for JSON numbers, so the
    // discriminant must come back as a decimal string; the input is
    // accepted in either form.
    let lattice = write_temp("big.json", r#"{"gram":[["18014398509481984"]]}"#);
    let out = latlab(&["lattice-disc", "--in", lattice.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    assert_eq!(
        stdout_str(&out).trim_end(),
        r#"{"disc":"18014398509481984"}"#
    );

    let as_number = write_temp("big-num.json", r#"{"gram":[[18014398509481984]]}"#);
    let out = latlab(&["lattice-disc", "--in", as_number.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out).trim_end(),
        r#"{"disc":"18014398509481984"}"#
    );
}

#[test]
fn glue_report_fields_are_stable() {
    let sub = write_temp("glue-sub.json", GLUE_SUB_JSON);
    let out = latlab(&["glue", "--in", sub.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out).trim_end(),
        r#"{"order":2,"invariant_factors":[2],"disc_N":2,"disc_T":2,"disc_H":1,"identity_holds":true,"anti_isometry_holds":true}"#
    );
}

#[test]
fn malformed_json_exits_2_with_position() {
    let bad = write_temp("bad.json", "{\"gram\": [[0,1],\n [1,0]");
    let out = latlab(&["lattice-disc", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_str(&out);
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn schema_violations_exit_2_naming_the_field() {
    let odd = write_temp("odd.json", r#"{"gram":[[1,0],[0,2]]}"#);
    let out = latlab(&["lattice-disc", "--in", odd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let float = write_temp("float.json", r#"{"gram":[[2.5,0],[0,2]]}"#);
    let out = latlab(&["lattice-disc", "--in", float.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("gram"), "{}", stderr_str(&out));

    let extra = write_temp("extra.json", r#"{"gram":[[0,1],[1,0]],"rank":2}"#);
    let out = latlab(&["lattice-disc", "--in", extra.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("rank"), "{}", stderr_str(&out));
}

#[test]
fn imprimitive_mukai_vector_exits_2() {
    let out = latlab(&["k3-moduli", "--genus", "3", "--mukai", "0,2,-4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("primitive"));
}

#[test]
fn ineffective_vector_gate_and_override() {
    let gated = latlab(&["k3-moduli", "--genus", "2", "--mukai", "-1,0,1"]);
    assert_eq!(gated.status.code(), Some(2));
    assert!(stderr_str(&gated).contains("effective"));

    let allowed = latlab(&["k3-moduli", "--genus", "2", "--mukai", "-1,0,1", "--allow-ineffective"]);
    assert!(allowed.status.success(), "{}", stderr_str(&allowed));
}

#[test]
fn unknown_flags_are_rejected() {
    let out = latlab(&["k3-moduli", "--genus", "3", "--mukai", "0,1,-2", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_env_var_overrides_flag() {
    let args = ["oracle-verify", "--trials", "8", "--max-rank", "3", "--seed", "7"];
    let via_env = latlab_with_env(&args, "LATLAB_SEED", "12345");
    assert!(via_env.status.success(), "{}", stderr_str(&via_env));
    let report: Value = serde_json::from_str(stdout_str(&via_env).trim_end()).unwrap();
    assert_eq!(report["seed"], Value::from(12345));
    assert_eq!(report["passed"], Value::Bool(true));

    let via_flag = latlab(&["oracle-verify", "--trials", "8", "--max-rank", "3", "--seed", "12345"]);
    assert_eq!(
        stdout_str(&via_flag).trim_end(),
        stdout_str(&via_env).trim_end(),
        "same seed must reproduce the identical report"
    );

    let bad_env = latlab_with_env(&args, "LATLAB_SEED", "not-a-number");
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn compare_flags_dimension_mismatch() {
    let out = latlab(&["k3-compare", "--genus", "2", "--v", "1,0,-1", "--u", "1,0,-2"]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let report: Value = serde_json::from_str(stdout_str(&out).trim_end()).unwrap();
    assert_eq!(report["dimension_mismatch"], Value::Bool(true));

    let matched = latlab(&["k3-compare", "--genus", "2", "--v", "1,0,-1", "--u", "-1,0,1"]);
    let report: Value = serde_json::from_str(stdout_str(&matched).trim_end()).unwrap();
    assert!(report.get("dimension_mismatch").is_none());
    assert_eq!(report["verdict"], Value::String("INCONCLUSIVE".into()));
}
