use std::process::{Command, Output};

use serde_json::Value;

fn hyperjac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperjac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = hyperjac(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn count_with_oracle_agrees() {
    let o = hyperjac(&[
        "count", "--family", "additive", "--d", "9", "--c", "1", "--p", "19", "--oracle",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("p=19 formula=12 oracle=12 agree"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn count_linear_twist_trivial_branch() {
    let o = hyperjac(&[
        "count", "--family", "linear", "--d", "7", "--c", "1", "--p", "7",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("p=7 count=8"));
}

#[test]
fn validation_errors_exit_one() {
    let o = hyperjac(&["count", "--family", "linear", "--d", "8", "--p", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("d must be odd"));

    for args in [
        vec!["count", "--d", "9", "--p", "3"],
        vec!["count", "--d", "9", "--p", "21"],
        vec!["count", "--d", "9", "--c", "0", "--p", "19"],
        vec!["split", "--g", "1"],
        vec!["split", "--g", "5", "--refine", "--c", "x"],
        vec!["lockwood", "--g", "4"],
        vec!["frobnicate"],
        vec!["count", "--d", "9"],
    ] {
        let o = hyperjac(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(hyperjac(&["--help"]).status.code(), Some(0));
    assert_eq!(hyperjac(&["--version"]).status.code(), Some(0));
}

#[test]
fn matrix_grid() {
    let o = hyperjac(&[
        "matrix", "--family", "additive", "--d", "10", "--p", "11", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "k,1,2,3,4,6,7,8,9\n\
         1,0,0,0,0,1,1,1,1\n\
         3,0,1,1,0,1,0,0,1\n\
         7,1,0,0,1,0,1,1,0\n\
         9,1,1,1,1,0,0,0,0\n"
    );
}

#[test]
fn non_generic_prime_is_flagged() {
    let o = hyperjac(&["matrix", "--d", "9", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("not generic"));
    let o = hyperjac(&["matrix", "--d", "9", "--p", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no contributing characters"));
}

#[test]
fn kernel_relations_are_annotated() {
    let v = json(&["kernel", "--family", "additive", "--d", "9", "--p", "19"]);
    assert_eq!(v["rank"], 4);
    assert_eq!(v["saturated"], true);
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 4);
    for r in rels {
        let kind = r["relation"]["kind"].as_str().unwrap();
        assert!(kind == "exact" || kind == "torsion", "{r}");
    }
}

#[test]
fn st0_names() {
    for (d, name) in [
        ("10", "U(1)_2 x U(1)_2"),
        ("8", "U(1)_2 x U(1)"),
        ("24", "U(1)_4 x U(1)_3 x U(1)_2 x U(1)_2"),
    ] {
        let o = hyperjac(&["st0", "--family", "additive", "--d", d]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).lines().next(), Some(name));
    }
    let v = json(&["st0", "--curve", "x^12+c"]);
    assert_eq!(v["name"], "U(1)_3 x U(1)_2");
    assert_eq!(v["primes_used"].as_array().unwrap().len(), 3);
}

#[test]
fn split_output() {
    let o = hyperjac(&["split", "--g", "5"]);
    assert_eq!(
        stdout(&o).trim(),
        "Jac(y^2 = x^12 + c) ~ (y^2 = x^3 + c)^2 x (y^2 = x^7 + cx)"
    );
    let o = hyperjac(&["split", "--g", "5", "--refine"]);
    let text = stdout(&o);
    assert!(
        text.contains("(y^2 = x^3 + c)^2 x [(E: y^2 = x^3 + cx) x (C_0:"),
        "{text}"
    );

    let v = json(&["split", "--g", "11", "--refine"]);
    let factors = v["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 3);
    // x^13 + cx has even genus 6, x^7 + cx has genus 3 and splits further
    assert!(factors[1].get("refinement").is_none());
    assert!(factors[2]["refinement"].is_object());
}

#[test]
fn sweep_csv_respects_weil_bound() {
    let o = hyperjac(&[
        "sweep", "--family", "additive", "--d", "6", "--c", "1", "--pmax", "1000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["p", "count", "t_p", "x_p"]
    );
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let x: f64 = rec[3].parse().unwrap();
        assert!(x.abs() <= 4.0);
        rows += 1;
    }
    assert!(rows > 160);
    assert!(stderr(&o).contains("moments"));
}

#[test]
fn json_outputs_round_trip() {
    for args in [
        vec!["count", "--d", "9", "--pmax", "60", "--oracle"],
        vec!["matrix", "--d", "10", "--p", "11"],
        vec!["kernel", "--d", "10", "--p", "11"],
        vec!["st0", "--d", "6"],
        vec!["split", "--g", "7"],
        vec!["sweep", "--curve", "x^7+cx", "--pmax", "100"],
        vec!["lockwood", "--g", "5", "--i", "0", "--c", "2"],
    ] {
        let v = json(&args);
        let text = serde_json::to_string(&v).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v, "{args:?}");
    }
    let m: hyperjac::CarryMatrix =
        serde_json::from_value(json(&["matrix", "--d", "9", "--p", "19"])).unwrap();
    assert_eq!(m.entries.len(), 6);
    let id: hyperjac::TorusId = serde_json::from_value(json(&["st0", "--d", "10"])).unwrap();
    assert_eq!(id.dimension, 2);
}

#[test]
fn out_file_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.json");
    let o = hyperjac(&[
        "split",
        "--g",
        "9",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["source"]["degree"], 20);

    let a = json(&["lockwood", "--g", "9", "--seed", "7"]);
    let b = json(&["lockwood", "--g", "9", "--seed", "7"]);
    assert_eq!(a, b);
    assert_eq!(a["holds"], true);
    assert_eq!(a["seed"], 7);
}
