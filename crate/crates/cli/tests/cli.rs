use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use diffcoh::bundled::standard_files;
use diffcoh::problem::{parse, serialize};
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffcoh")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn corpus_files_match_generator() {
    for (name, p) in standard_files().unwrap() {
        let on_disk = fs::read_to_string(corpus(&name)).unwrap();
        assert_eq!(on_disk, serialize(&p), "{name} is stale; rerun the export_corpus example");
    }
}

#[test]
fn corpus_files_are_canonical() {
    for (name, _) in standard_files().unwrap() {
        let text = fs::read_to_string(corpus(&name)).unwrap();
        assert_eq!(serialize(&parse(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn every_corpus_file_validates() {
    for (name, _) in standard_files().unwrap() {
        let out = run(&["validate", path(&corpus(&name))]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn ground_field_first_cohomology() {
    let out = run(&["cohomology", path(&corpus("ground_field.json")), "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let h1 = r["groups"].as_array().unwrap().iter().find(|g| g["complex"] == "diff" && g["degree"] == 1).unwrap();
    assert_eq!(h1["dim"], 1);
}

#[test]
fn les_flag_reports_exactness() {
    let out = run(&["cohomology", path(&corpus("dual_numbers_weighted.json")), "--max-degree", "2", "--les", "--reduced"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["les"]["exact"], true);
}

#[test]
fn representatives_are_listed() {
    let out = run(&["cohomology", path(&corpus("swap_difference.json")), "--max-degree", "0", "--representatives"]);
    let r = report(&out);
    let h0 = r["groups"].as_array().unwrap().iter().find(|g| g["complex"] == "diff").unwrap();
    assert_eq!(h0["representatives"], serde_json::json!([["1", "1"]]));
}

#[test]
fn perturbed_pair_fails_with_witness() {
    let out = run(&["cocycle-check", path(&corpus("dual_numbers.json")), "--cochain", "perturbed"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["cocycle"], false);
    assert!(!r["violation"]["witness"].as_array().unwrap().is_empty());
}

#[test]
fn representative_is_a_cocycle() {
    let out = run(&["cocycle-check", path(&corpus("dual_numbers.json")), "--cochain", "class_0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["class"], serde_json::json!(["1"]));
}

#[test]
fn extend_then_extract_returns_the_cocycle() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["dual_numbers", "dual_numbers_weighted", "nonunital_truncated"] {
        let src = corpus(&format!("{name}.json"));
        let ext = dir.path().join(format!("{name}_ext.json"));
        let out = run(&["extend", path(&src), "--cocycle", "class_0", "-o", path(&ext)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(run(&["validate", path(&ext)]).status.code(), Some(0));

        let back = report(&run(&["extract-cocycle", path(&ext), "--section", "canonical"]));
        let original: Value = serde_json::from_str(&fs::read_to_string(&src).unwrap()).unwrap();
        assert_eq!(back["cocycle"], original["cochains"]["class_0"], "{name}");
    }
}

#[test]
fn extend_refuses_non_cocycle() {
    let dir = tempfile::tempdir().unwrap();
    let ext = dir.path().join("x.json");
    let out = run(&["extend", path(&corpus("dual_numbers.json")), "--cocycle", "perturbed", "-o", path(&ext)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!ext.exists());
}

#[test]
fn shifted_representative_is_equivalent() {
    for name in ["dual_numbers.json", "matrix_inner.json", "swap_difference.json"] {
        let out = run(&["equivalent", path(&corpus(name)), "--c1", "shifted", "--c2", "zero"]);
        let expect = if name == "swap_difference.json" { 0 } else { 1 };
        assert_eq!(out.status.code(), Some(expect), "{name}");
    }
    let out = run(&["equivalent", path(&corpus("dual_numbers.json")), "--c1", "class_0", "--c2", "shifted"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["equivalent"], true);
}

#[test]
fn deformations_check_and_trivialize() {
    for (name, _) in standard_files().unwrap() {
        let file = corpus(&name);
        let out = run(&["deform-check", path(&file), "--deformation", "gauged_trivial"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(report(&out)["infinitesimal_closed"], true);
        let out = run(&["trivialize", path(&file), "--deformation", "gauged_trivial"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(report(&out)["trivial_through_order"], 2);
    }
}

#[test]
fn obstructed_deformations_exit_one() {
    for (file, def) in [
        ("dual_numbers.json", "derivation_family"),
        ("matrix_inner_weight_zero.json", "derivation_family"),
        ("nonunital_truncated.json", "seeded"),
        ("matrix_inner.json", "seeded"),
    ] {
        let out = run(&["trivialize", path(&corpus(file)), "--deformation", def]);
        assert_eq!(out.status.code(), Some(1), "{file}");
        assert_eq!(report(&out)["obstructed_at_order"], 1);
    }
}

#[test]
fn budget_exit_code() {
    let out = run(&["cohomology", path(&corpus("ground_field.json")), "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["cohomology", path(&corpus("ground_field.json")), "--max-degree", "6", "--budget", "7"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = fs::read_to_string(corpus("ground_field.json")).unwrap().replace("\"dim\": 1", "\"dim\": 2");
    fs::write(&bad, text).unwrap();
    let out = run(&["validate", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("algebra.mult"));

    assert_eq!(run(&["validate", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let out = run(&["trivialize", path(&corpus("dual_numbers.json")), "--deformation", "missing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_algebra_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // x·x = x breaks the Leibniz rule for d(x) = x at weight 0
    let mut v: Value = serde_json::from_str(&fs::read_to_string(corpus("dual_numbers.json")).unwrap()).unwrap();
    v["algebra"]["mult"][1][1] = serde_json::json!(["0", "1"]);
    fs::write(&bad, v.to_string()).unwrap();
    let out = run(&["validate", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["algebra"]["passed"], false);
}

#[test]
fn reports_are_byte_identical() {
    let file = corpus("matrix_inner.json");
    let args = ["cohomology", path(&file), "--max-degree", "2", "--reduced", "--representatives"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
