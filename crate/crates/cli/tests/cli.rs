use std::process::{Command, Output};

use serde_json::Value;
use tautring::charclass::{bso_ring, pontryagin_table};
use tautring::taut::{Flavor, TautPresentation};
use tautring::GradedPoly;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tautring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> (i32, String, String) {
    let out = run(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn lclass_tables() {
    let tsv = stdout(&["lclass", "--n", "2", "--max-i", "2", "--format", "tsv"]);
    assert!(tsv.contains("\t1/3*p1\t"));
    assert!(tsv.contains("\t7/180*p2 - 1/180*p1^2\t"));
    assert!(!tsv.contains("MISMATCH"));
    assert!(stdout(&["lclass", "--n", "1", "--max-i", "1"]).contains("1/6*p1"));
    let tsv = stdout(&["lclass", "--n", "3", "--max-i", "0", "--format", "tsv"]);
    assert_eq!(tsv.lines().nth(1).unwrap().split('\t').nth(2), Some("8"));
}

#[test]
fn lclass_cap() {
    let (c, out, _) = code(&["lclass", "--n", "3", "--max-i", "7"]);
    assert_eq!(c, 3);
    assert!(out.is_empty());
    assert!(stdout(&["lclass", "--n", "3", "--max-i", "7", "--allow-large", "--format", "tsv"]).contains("\n7\t3\t"));
}

#[test]
fn normal_form_examples() {
    let nf = |e: &str, g: &str, fl: &str| {
        stdout(&["normal-form", "--expr", e, "--n", "3", "--genus", g, "--flavor", fl])
            .trim()
            .to_string()
    };
    assert_eq!(nf("k[e*p1*p2]", "2", "closed"), "-1/2*K[e*p1]*K[e*p2]");
    assert_eq!(nf("k[p1]^5 + k[e*p1]", "2", "closed"), "K[e*p1]");
    assert_eq!(nf("c[e]", "1", "pointed"), "0");
    assert_eq!(nf("c[p1]", "5", "pointed"), "-1/8*K[e*p1]");
    assert_eq!(nf("k[e^3]", "0", "closed"), "K[e*p3]");
}

#[test]
fn exit_codes() {
    let (c, out, err) = code(&["normal-form", "--expr", "k[e*", "--n", "3", "--genus", "2"]);
    assert_eq!((c, out.is_empty()), (1, true));
    assert!(err.contains("offset 4"));
    let (c, out, _) = code(&["normal-form", "--expr", "k[e]", "--n", "4", "--genus", "2"]);
    assert_eq!((c, out.is_empty()), (2, true));
    let (c, _, _) = code(&["normal-form", "--expr", "c[e]", "--n", "3", "--genus", "0", "--flavor", "pointed"]);
    assert_eq!(c, 2);
    let (c, _, _) = code(&["normal-form", "--expr", "k[e*p1]^30", "--n", "3", "--genus", "0"]);
    assert_eq!(c, 3);
    let (c, out, _) = code(&["independence", "--n", "3", "--genus", "1"]);
    assert_eq!((c, out.is_empty()), (2, true));
    let (c, _, _) = code(&["basis", "--n", "x"]);
    assert_eq!(c, 2);
}

#[test]
fn audit_streams() {
    let out = stdout(&["audit", "--n", "3", "--genus", "2"]);
    let records: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!records.is_empty());
    for r in &records {
        let fam = r["family"].as_str().unwrap();
        let expect = if fam == "kappa-product-exp-|I|" { "refuted" } else { "verified" };
        assert_eq!(r["verdict"], expect, "{r}");
        for key in ["relation", "model", "n", "g", "verdict", "witness"] {
            assert!(r.get(key).is_some());
        }
    }

    let out = stdout(&["audit", "--n", "3", "--genus", "0"]);
    let hit = out
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|r| r["relation"] == "2*c[e] - k[e^2]")
        .unwrap();
    assert_eq!(hit["verdict"], "refuted");
    assert_eq!(hit["witness"], "2*e");
    assert_eq!(hit["model"], "pointed_sphere(3)");
    assert!(hit["note"].as_str().unwrap().contains("not nilpotent"));
}

#[test]
fn adhoc_audit_and_model_eval() {
    let out = stdout(&[
        "audit", "--n", "3", "--genus", "0", "--model", "sphere", "--expr",
        "4*k[e*p1*p2] - k[e*p1]*k[e*p2]",
    ]);
    let r: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(r["verdict"], "refuted");
    assert_eq!(r["witness"], "4*p1*p2");

    let v = stdout(&["model-eval", "--model", "sphere", "--n", "3", "--expr", "k[e^5]"]);
    assert_eq!(v.trim(), "2*p3^2");
    let v = stdout(&["model-eval", "--model", "pointed-liegroup", "--n", "3", "--genus", "2", "--expr", "c[p2]"]);
    assert_eq!(v.trim(), "p1'*p1''");
}

#[test]
fn independence_verdicts() {
    for g in ["2", "0"] {
        let out = stdout(&["independence", "--n", "3", "--genus", g, "--max-degree", "24"]);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["verdict"], "independent");
        assert_eq!(v["kernel"], Value::Array(vec![]));
        assert_eq!(v["max_degree"], 24);
    }
    let v: Value = serde_json::from_str(stdout(&["independence", "--n", "2", "--genus", "2"]).trim()).unwrap();
    assert_eq!(v["max_degree"], 16);
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
}

#[test]
fn json_round_trips() {
    let out = stdout(&["lclass", "--n", "3", "--max-i", "4", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_str(&out).unwrap();
    let t = pontryagin_table(3);
    for r in &rows {
        let p = GradedPoly::parse(r["polynomial"].as_str().unwrap(), &t).unwrap();
        assert_eq!(p.to_string(), r["polynomial"]);
    }

    let pres = TautPresentation::new(3, 0, Flavor::Closed).unwrap();
    let out = stdout(&[
        "normal-form", "--expr", "(k[e*p1] - 3*k[e^5])^2 + 1/7*k[e*p1*p2]", "--n", "3", "--genus", "0",
        "--format", "json",
    ]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    let text = v["normal_form"].as_str().unwrap();
    let p = GradedPoly::parse(text, pres.table()).unwrap();
    assert_eq!(p.to_string(), text);
    assert_eq!(v["krull_dimension"], 3);

    let out = stdout(&["model-eval", "--model", "pointed-sphere", "--n", "3", "--expr", "c[e]*k[e^2*p1] + k[e^3]", "--format", "json"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    let ring = bso_ring(6).unwrap();
    let p = GradedPoly::parse(v["value"].as_str().unwrap(), ring.table()).unwrap();
    assert_eq!(p, GradedPoly::parse("2*e^2", ring.table()).unwrap());
}

#[test]
fn deterministic_output() {
    let args = ["audit", "--n", "3", "--genus", "3", "--format", "tsv"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn basis_listing() {
    let out = stdout(&["basis", "--n", "3", "--max-degree", "12", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[2]["monomial"], "e");
    assert_eq!(rows[2]["kappa_degree"], 0);
}
