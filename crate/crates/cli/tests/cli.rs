use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ratfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratfact")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = ratfact(&all);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn finite_zeros(factor: &Value) -> Vec<(f64, f64)> {
    factor["zeros"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|z| z.get("re").is_some())
        .map(|z| (z["re"].as_f64().unwrap(), z["im"].as_f64().unwrap()))
        .collect()
}

fn factor<'a>(rep: &'a Value, name: &str) -> &'a Value {
    rep["factors"].as_array().unwrap().iter().find(|f| f["name"] == name).expect("factor present")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn minimal_range_of_example1() {
    let ex1 = fixture("ex1.json");
    let rep = ok_json(&["range", path(&ex1), "--zeros", "none"]);
    assert_eq!(rep["schema_version"], 1);
    let r = factor(&rep, "R");
    assert_eq!(r["mcmillan_degree"], 1);
    assert_eq!(r["zero_count"], 0);
    assert_eq!(rep["details"]["rank"], 2);
}

#[test]
fn text_report_for_range() {
    let out = ratfact(&["range", path(&fixture("ex1.json")), "--zeros", "none"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("McMillan degree 1"), "{text}");
    assert!(text.contains("zeros (0): none"), "{text}");
}

#[test]
fn quasi_outer_zeros_of_example2() {
    let rep = ok_json(&["iofac", path(&fixture("ex2.json"))]);
    let go = factor(&rep, "Go");
    assert_eq!(go["mcmillan_degree"], 2);
    let mut z: Vec<f64> = finite_zeros(go)
        .iter()
        .map(|&(re, im)| {
            assert!(im.abs() < 1e-8);
            re
        })
        .collect();
    z.sort_by(f64::total_cmp);
    assert_eq!(z.len(), 2);
    assert!(z[0].abs() < 1e-8 && (z[1] - 1.0).abs() < 1e-8, "{z:?}");
    assert!(rep["residuals"]["inner_defect"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn evaluation_at_zero() {
    let rep = ok_json(&["eval", path(&fixture("ex1.json")), "--point", "0"]);
    let want = [[-0.5, 0.0, 0.5], [0.0, -2.0, -2.0], [-0.5, -1.0, -0.5]];
    let got = rep["details"]["value"].as_array().unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((got[i][j].as_f64().unwrap() - want[i][j]).abs() < 1e-14);
        }
    }
    let out = ratfact(&["eval", path(&fixture("ex1.json")), "--point", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[[-0.5, 0, 0.5], [0, -2, -2], [-0.5, -1, -0.5]]"), "{text}");
}

#[test]
fn evaluation_at_complex_point_and_pole() {
    let rep = ok_json(&["eval", path(&fixture("ex1.json")), "--point", "-1+2i"]);
    assert!(rep["details"]["value"][0][0]["im"].is_number());
    let out = ratfact(&["eval", path(&fixture("ex1.json")), "--point", "-2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_frf_output_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = fixture("ex1.json");
    let rep = ok_json(&["frf", path(&ex1), "--out", path(dir.path())]);
    assert_eq!(rep["output_files"].as_array().unwrap().len(), 2);
    let (r, x) = (dir.path().join("R.json"), dir.path().join("X.json"));
    let v = ok_json(&["verify", path(&ex1), path(&r), path(&x)]);
    assert!(v["residuals"]["max_relative_residual"].as_f64().unwrap() <= 1e-7);
    assert_eq!(v["residuals"]["passed"], true);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&x).unwrap()).unwrap();
    for key in ["C", "D"] {
        for row in doc[key].as_array_mut().unwrap() {
            for v in row.as_array_mut().unwrap() {
                *v = Value::from(v.as_f64().unwrap() * 2.0);
            }
        }
    }
    let x2 = write(dir.path(), "X2.json", &doc.to_string());
    let out = ratfact(&["verify", path(&ex1), path(&r), path(&x2), "--json"]);
    assert_eq!(out.status.code(), Some(4));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    let res = rep["residuals"]["max_relative_residual"].as_f64().unwrap();
    assert!((res - 1.0).abs() < 1e-6, "{res}");
    assert_eq!(rep["residuals"]["passed"], false);
}

#[test]
fn verify_inner_outer_of_example2() {
    let dir = tempfile::tempdir().unwrap();
    let ex2 = fixture("ex2.json");
    ok_json(&["iofac", path(&ex2), "--out", path(dir.path())]);
    let (gi, go) = (dir.path().join("Gi.json"), dir.path().join("Go.json"));
    let v = ok_json(&["verify", path(&ex2), path(&gi), path(&go), "--inner", "--grid", "128"]);
    assert!(v["residuals"]["inner_defect"].as_f64().unwrap() <= 1e-7);
    assert_eq!(v["residuals"]["grid"], 128);
    // The cofactor is not inner.
    let out = ratfact(&["verify", path(&ex2), path(&go), path(&gi), "--inner"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn truncated_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("ex1.json")).unwrap();
    let p = write(dir.path(), "t.json", &text[..text.len() / 2]);
    let out = ratfact(&["info", path(&p)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("parse error") && err.contains("line"), "{err}");
}

#[test]
fn malformed_fields_report_context() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "a.json", r#"{"ts":"continuous","A":[[1,"x"]],"E":null,"B":[[1]],"C":[[1]],"D":[[0]]}"#);
    let out = ratfact(&["info", path(&p)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("A[0][1]"));

    let p = write(
        dir.path(),
        "b.json",
        r#"{"ts":"continuous","A":[[1,0],[0,1]],"E":null,"B":[[1]],"C":[[1,0]],"D":[[0]]}"#,
    );
    let out = ratfact(&["info", path(&p)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`B`"));

    let p = write(dir.path(), "c.json", r#"{"ts":"hybrid","A":[],"E":null,"B":[],"C":[],"D":[]}"#);
    assert_eq!(ratfact(&["info", path(&p)]).status.code(), Some(2));

    let p = write(dir.path(), "d.json", r#"{"ts":"discrete","A":[[1e999]],"E":null,"B":[[1]],"C":[[1]],"D":[[0]]}"#);
    assert_eq!(ratfact(&["info", path(&p)]).status.code(), Some(2));

    assert_eq!(ratfact(&["info", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn info_of_fixtures() {
    let rep = ok_json(&["info", path(&fixture("ex1.json"))]);
    let g = factor(&rep, "G");
    assert_eq!(g["normal_rank"], 2);
    assert_eq!(rep["input"]["descriptor"], false);
    assert_eq!(rep["input"]["order"], 4);
    let rep = ok_json(&["info", path(&fixture("ex2.json"))]);
    let g = factor(&rep, "G");
    assert_eq!(g["mcmillan_degree"], 2);
    assert_eq!(g["poles"], serde_json::json!([{"value": "inf", "multiplicity": 2}]));
}

#[test]
fn factorization_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // s / (s + 1) has a zero on the imaginary axis.
    let p = write(dir.path(), "g.json", r#"{"ts":"continuous","A":[[-1]],"E":null,"B":[[1]],"C":[[-1]],"D":[[1]]}"#);
    let out = ratfact(&["range", path(&p), "--boundary-offset", "1e-6"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(ratfact(&["range", path(&p)]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ratfact(&["bogus"]).status.code(), Some(2));
    assert_eq!(ratfact(&["range", path(&fixture("ex1.json")), "--zeros", "some"]).status.code(), Some(2));
    assert_eq!(ratfact(&["range", path(&fixture("ex1.json")), "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(ratfact(&["eval", path(&fixture("ex1.json")), "--point", "1+x"]).status.code(), Some(2));
    assert_eq!(ratfact(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic() {
    let ex2 = fixture("ex2.json");
    let a = ratfact(&["nrcf", path(&ex2), "--json"]);
    let b = ratfact(&["nrcf", path(&ex2), "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = ok_json(&["nrcf", path(&ex2), "--seed", "7"]);
    assert_eq!(c["residuals"]["seed"], 7);
}

#[test]
fn every_subcommand_runs_on_the_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for ex in ["ex1.json", "ex2.json"] {
        let f = fixture(ex);
        for cmd in ["info", "klf", "sklf", "range", "frf", "dual-frf", "nrcf", "pinv", "iofac"] {
            let out_dir = dir.path().join(format!("{ex}-{cmd}"));
            let rep = ok_json(&[cmd, path(&f), "--out", path(&out_dir)]);
            for file in rep["output_files"].as_array().unwrap() {
                assert!(Path::new(file.as_str().unwrap()).exists());
            }
            if let Some(r) = rep.get("residuals") {
                assert_eq!(r["passed"], true, "{cmd} {ex}");
            }
        }
    }
}

#[test]
fn range_options_are_honoured() {
    let ex1 = fixture("ex1.json");
    let all = ok_json(&["range", path(&ex1), "--zeros", "all"]);
    assert_eq!(factor(&all, "R")["zero_count"], 3);
    let inner = ok_json(&["range", path(&ex1), "--zeros", "none", "--inner"]);
    assert!(inner["residuals"]["inner_defect"].as_f64().unwrap() <= 1e-8);
    let st = ok_json(&["frf", path(&ex1), "--zeros", "none", "--stabilize"]);
    for p in factor(&st, "R")["poles"].as_array().unwrap() {
        assert!(p["re"].as_f64().unwrap() < 0.0);
    }
    let disc = ok_json(&["range", path(&ex1), "--region", "disc-stab", "--stabilize"]);
    for p in factor(&disc, "R")["poles"].as_array().unwrap() {
        let (re, im) = (p["re"].as_f64().unwrap(), p["im"].as_f64().unwrap());
        assert!(re.hypot(im) <= 1.0 + 1e-6);
    }
    // The zero at 1 is on the unit circle and counts as good; 2 and infinity are kept.
    let z = finite_zeros(factor(&disc, "R"));
    assert_eq!(z.len(), 1);
    assert!((z[0].0 - 2.0).abs() < 1e-8);
    assert_eq!(factor(&disc, "R")["zero_count"], 2);
}

#[test]
fn sklf_reports_dimensions() {
    let rep = ok_json(&["sklf", path(&fixture("ex1.json")), "--zeros", "none"]);
    let d = &rep["details"]["dims"];
    assert_eq!(d["r"], 2);
    assert_eq!(d["n_bl"], 1);
    assert!(rep["details"]["checks"]["zero_blocks"].as_f64().unwrap() < 1e-12);
}
