use std::path::Path;
use std::process::{Command, Output};

use k3cover_core::{Classification, FamilyTable, TranscendentalForm};
use serde_json::Value;

fn k3cover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3cover")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scan(dir: &Path, name: &str, a_max: i64, b_max: i64, c_min: i64, c_max: i64) -> (Output, String) {
    let path = dir.join(name);
    let o = k3cover(&[
        "scan",
        "--a-max",
        &a_max.to_string(),
        "--b-max",
        &b_max.to_string(),
        "--c-min",
        &c_min.to_string(),
        "--c-max",
        &c_max.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    (o, text)
}

/// Rebuilds a core classification from a record and replays it.
fn replay(record: &Value) {
    let input = &record["input"];
    let t = TranscendentalForm::new(
        input["a"].as_i64().unwrap(),
        input["b"].as_i64().unwrap(),
        input["c"].as_i64().unwrap(),
    )
    .unwrap();
    let mut k = record.clone();
    k.as_object_mut().unwrap().remove("input");
    let k: Classification = serde_json::from_str(&k.to_string()).unwrap();
    k.verify(&t).unwrap();
}

#[test]
fn all_odd_form_does_not_cover() {
    let o = k3cover(&["classify", "--a", "1", "--b", "1", "--c", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("case IV: does not cover"), "{}", stdout(&o));
}

#[test]
fn invalid_inputs_exit_one() {
    for args in [
        &["classify", "--a", "1", "--b", "0", "--c", "0"][..],
        &["classify", "--a", "-1", "--b", "2", "--c", "0"],
        &["classify", "--a", "1", "--b", "1", "--c", "2"],
        &["classify", "--gram", "3,1,4"],
        &["classify", "--gram", "2,1"],
        &["classify", "--a", "x", "--b", "1", "--c", "1"],
        &["classify"],
        &["no-such-command"],
    ] {
        assert_eq!(code(&k3cover(args)), 1, "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&k3cover(&["--help"])), 0);
}

#[test]
fn json_output_has_witness_and_round_trips() {
    let o = k3cover(&["classify", "--a", "1", "--b", "3", "--c", "0", "--json", "--verify"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["case"], "III-2");
    assert_eq!(v["covers"], true);
    assert_eq!(v["delta"], 12);
    let w = &v["certificate"]["vinberg_witness"];
    assert_eq!(w["norm"], 3);
    assert_eq!(w["vector"].as_array().unwrap().len(), 11);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    replay(&v);
}

#[test]
fn gram_flag_matches_coefficients() {
    let by_coeffs = k3cover(&["classify", "--a", "1", "--b", "2", "--c", "-1", "--json"]);
    let by_gram = k3cover(&["classify", "--gram=2,-1,4", "--json"]);
    assert_eq!(code(&by_gram), 0);
    assert_eq!(stdout(&by_coeffs), stdout(&by_gram));
}

#[test]
fn scan_count_matches_recount() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = scan(dir.path(), "s.jsonl", 2, 2, 0, 2);
    assert_eq!(code(&o), 0);
    let mut expected = Vec::new();
    for a in 1i64..=2 {
        for b in 1i64..=2 {
            for c in 0i64..=2 {
                if 4 * a * b - c * c > 0 {
                    expected.push((a, b, c));
                }
            }
        }
    }
    assert_eq!(expected.len(), 11);
    let got: Vec<(i64, i64, i64)> = text
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            replay(&v);
            let i = &v["input"];
            (i["a"].as_i64().unwrap(), i["b"].as_i64().unwrap(), i["c"].as_i64().unwrap())
        })
        .collect();
    assert_eq!(got, expected);
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("11 forms"), "{stderr}");
}

#[test]
fn scan_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (_, first) = scan(dir.path(), "a.jsonl", 6, 6, -7, 7);
    let path = dir.path().join("b.jsonl");
    let o = Command::new(env!("CARGO_BIN_EXE_k3cover"))
        .env("K3COVER_THREADS", "1")
        .args(["scan", "--a-max", "6", "--b-max", "6", "--c-min", "-7", "--c-max", "7", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(!first.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), first.as_bytes());
}

#[test]
fn all_even_sub_box_covers() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = scan(dir.path(), "e.jsonl", 6, 6, -6, 6);
    assert_eq!(code(&o), 0);
    let mut even = 0;
    for l in text.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        let i = &v["input"];
        if ["a", "b", "c"].iter().all(|k| i[k].as_i64().unwrap() % 2 == 0) {
            even += 1;
            assert_eq!(v["covers"], true, "{l}");
            assert_eq!(v["case"], "I", "{l}");
        }
    }
    assert!(even > 0);
}

#[test]
fn scan_rejects_empty_range_and_bad_path() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&scan(dir.path(), "x.jsonl", 0, 2, 0, 2).0), 1);
    assert_eq!(code(&scan(dir.path(), "x.jsonl", 2, 2, 3, 2).0), 1);
    let missing = dir.path().join("missing");
    assert_eq!(code(&scan(&missing, "x.jsonl", 2, 2, 0, 2).0), 1);
}

#[test]
fn verify_lemmas_defaults_pass() {
    let o = k3cover(&["verify-lemmas"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_lemmas_small_and_bad_ranges() {
    assert_eq!(code(&k3cover(&["verify-lemmas", "--n-max", "10"])), 0);
    assert_eq!(code(&k3cover(&["verify-lemmas", "--slice-max", "30"])), 1);
    assert_eq!(code(&k3cover(&["verify-lemmas", "--n-max", "0"])), 1);
}

#[test]
fn tampered_family_table_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = FamilyTable::standard();
    table.families[3].coords[2].1 += 1;
    let path = dir.path().join("table.json");
    std::fs::write(&path, serde_json::to_string(&table).unwrap()).unwrap();
    let o = k3cover(&["verify-lemmas", "--n-max", "30", "--family-table", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));

    let honest = dir.path().join("honest.json");
    std::fs::write(&honest, serde_json::to_string(&FamilyTable::standard()).unwrap()).unwrap();
    assert_eq!(code(&k3cover(&["verify-lemmas", "--n-max", "30", "--family-table", honest.to_str().unwrap()])), 0);
}

#[test]
fn bad_thread_count_is_invalid() {
    let o = Command::new(env!("CARGO_BIN_EXE_k3cover"))
        .env("K3COVER_THREADS", "zero")
        .args(["classify", "--a", "1", "--b", "1", "--c", "1"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}
