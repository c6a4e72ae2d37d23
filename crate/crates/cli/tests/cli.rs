use std::process::{Command, Output};

use barbell_core::classes::{delta, twist_class};
use barbell_core::hexagon::basis_change_13_to_12;
use barbell_core::{GClass, LaurentPoly};

fn barbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barbell"))
        .args(args)
        .env_remove("BARBELL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[track_caller]
fn ok(args: &[&str]) -> String {
    let o = barbell(args);
    assert_eq!(o.status.code(), Some(0), "{:?}: {}", args, stderr(&o));
    stdout(&o)
}

#[test]
fn delta_expand_json_has_eight_terms() {
    let out = ok(&["delta", "--k", "4", "--expand", "--format", "json"]);
    let x: GClass = serde_json::from_str(&out).unwrap();
    assert_eq!(x.len(), 8);
    assert_eq!(x, delta(4).unwrap());
}

#[test]
fn fk_skew_report() {
    assert_eq!(ok(&["fk", "--k", "6", "--check-skew"]), "skew: OK\n");
}

#[test]
fn independence_report() {
    assert_eq!(ok(&["independence", "--kmin", "4", "--kmax", "10", "--n", "3"]), "rank 7 / 7: independent\n");
}

#[test]
fn fk_sum_vanishes() {
    assert!(ok(&["fk", "--k", "7", "--sum"]).contains("sum: 0"));
}

#[test]
fn validation_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["no-such-command"],
        &["fk", "--k", "1"],
        &["fk"],
        &["delta", "--k", "2"],
        &["twist", "--k", "4", "--v", "1,2", "--w", "1,2,3"],
        &["twist", "--k", "4", "--v", "1,x,2", "--w", "1,2,3"],
        &["lambda", "reduce", "--w0", "1", "--n", "2", "--poly", r#"{"terms":[]}"#],
        &["lambda", "reduce", "--w0", "1", "--n", "3", "--poly", "not json"],
        &["lambda", "structure", "--w0", "1", "--n", "3", "--window", "5,-5"],
        &["lambda", "structure", "--w0", "4", "--n", "3", "--window", "-2,2"],
        &["cover", "apply", "--m", "0", "--alpha", r#"{"terms":[]}"#],
        &["cover", "apply", "--m", "2", "--alpha", r#"{"terms":[{"i":0,"c":"1"}]}"#],
        &["whitehead", "facet", "--facet", "t2=0", "--alpha", "1", "--beta", "0", "--n", "3"],
        &["hex", "change-basis", "--dir", "sideways", "--poly", r#"{"terms":[]}"#],
        &["orbit"],
        &["independence", "--kmin", "10", "--kmax", "4"],
        &["delta", "--k", "4", "--format", "csv"],
        &["selfcheck", "--inject-fault", "nonsense"],
    ];
    for args in cases {
        let o = barbell(args);
        assert_eq!(o.status.code(), Some(2), "{:?} -> {}", args, stderr(&o));
        assert!(!stderr(&o).is_empty(), "{:?} printed no reason", args);
    }
}

#[test]
fn bad_thread_count_exits_2() {
    let o = Command::new(env!("CARGO_BIN_EXE_barbell"))
        .args(["fk", "--k", "4"])
        .env("BARBELL_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selfcheck_passes() {
    let out = ok(&["selfcheck"]);
    assert!(out.trim_end().ends_with("checks passed"), "{}", out);
}

#[test]
fn selfcheck_kmax_20_passes() {
    ok(&["selfcheck", "--kmax", "20", "--format", "json"]);
}

#[test]
fn injected_relator_fault_exits_3() {
    let o = barbell(&["selfcheck", "--inject-fault", "relator-table"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("relator orbit-locality"), "{}", stderr(&o));
}

#[test]
fn output_is_deterministic() {
    let runs: &[&[&str]] = &[
        &["fk", "--k", "9", "--per-level", "--format", "json"],
        &["fk", "--k", "9", "--format", "csv"],
        &["independence", "--kmin", "4", "--kmax", "14", "--format", "json"],
        &["whitehead", "relators", "--n", "4", "--window", "-3,3", "--format", "json"],
        &["delta", "--k", "9", "--w3", "--n", "4", "--format", "json"],
        &["selfcheck", "--kmax", "6", "--format", "json"],
    ];
    for args in runs {
        let a = barbell(args);
        let b = Command::new(env!("CARGO_BIN_EXE_barbell"))
            .args(*args)
            .args(["--seed", "99"])
            .env("BARBELL_THREADS", "3")
            .output()
            .unwrap();
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fk.json");
    let args = ["fk", "--k", "5", "--format", "json"];
    let printed = ok(&args);
    let silent = ok(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(silent.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn json_round_trips() {
    let out = ok(&["twist", "--k", "5", "--v", "1,-2,0,3", "--w", "2,0,-1,1", "--format", "json"]);
    let x: GClass = serde_json::from_str(&out).unwrap();
    assert_eq!(x, twist_class(5, &[1, -2, 0, 3], &[2, 0, -1, 1]).unwrap());

    let poly = r#"{"terms":[{"e1":3,"e2":-1,"c":"2"},{"e1":0,"e2":4,"c":-5}]}"#;
    let out = ok(&["hex", "change-basis", "--dir", "13to12", "--poly", poly, "--format", "json"]);
    let LaurentPoly::Two(p) = LaurentPoly::from_json(&out).unwrap() else { panic!("arity") };
    let LaurentPoly::Two(src) = LaurentPoly::from_json(poly).unwrap() else { panic!("arity") };
    assert_eq!(p, basis_change_13_to_12(&src));
    let back = ok(&["hex", "change-basis", "--dir", "12to13", "--poly", out.trim(), "--format", "json"]);
    assert_eq!(LaurentPoly::from_json(&back).unwrap(), LaurentPoly::Two(src));

    let out = ok(&["cover", "apply", "--m", "3", "--alpha", r#"{"terms":[{"i":6,"c":"1"},{"i":7,"c":"4"}]}"#, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v, serde_json::json!({"terms": [{"i": 2, "c": "3"}]}));
}

#[test]
fn hex_reduce_of_relator_is_zero() {
    let poly = serde_json::to_string(&barbell_core::hexagon::hex_relator(4, 1, 3)).unwrap();
    let out = ok(&["hex", "reduce", "--n", "3", "--poly", &poly, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["orbits"], serde_json::json!([]), "{}", out);
}

#[test]
fn text_reports() {
    assert_eq!(ok(&["lambda", "reduce", "--w0", "1", "--n", "3", "--poly", r#"{"terms":[{"e":0,"c":1},{"e":-2,"c":1}]}"#]), "t^2\n");
    assert!(ok(&["orbit", "--alpha", "0", "--beta", "0"]).contains("type origin"));
    assert!(ok(&["orbit", "structure", "--alpha", "1", "--beta", "2", "--n", "3"]).contains("Z^3 + Z_2"));
    assert!(ok(&["cover", "kernel", "--m", "2", "--depth", "1", "--alpha", r#"{"terms":[{"i":3,"c":1}]}"#]).starts_with("annihilated"));
}
