use std::path::PathBuf;
use std::process::{Command, Output};

use ncg::{parse_workspace, serialize_workspace, WorkspaceError};
use proptest::prelude::*;
use serde_json::Value;

fn ncg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncg")).args(args).output().expect("spawn ncg")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ncg-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn hilbert_match_passes_and_mismatch_fails() {
    let out = ncg(&["hilbert", "A", "--match", "(1+t)/(1-t)^2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["checks"][0]["evidence"]["dims"][3], 7);
    let out = ncg(&["hilbert", "A", "--match", "1/(1-t)^3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "fail");
}

#[test]
fn clifford_and_quiver() {
    let out = ncg(&["clifford", "A", "--central", "x^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["checks"][0]["evidence"]["structure"], "k^4");
    let out = ncg(&["quiver", "X"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["checks"][0]["evidence"]["arrows"], 4);
}

#[test]
fn mcm_verdicts() {
    assert_eq!(ncg(&["mcm", "X1"]).status.code(), Some(0));
    assert_eq!(ncg(&["mcm", "k"]).status.code(), Some(1));
}

#[test]
fn field_without_fourth_root_is_an_error() {
    let out = ncg(&["--field", "GF(7)", "verify-example"]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert!(r["error"].as_str().unwrap().contains("fixture setup"));
}

#[test]
fn small_window_is_inconclusive() {
    let out = ncg(&["--window=-6,6,1,8", "verify-example"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["verdict"], "inconclusive");
}

#[test]
fn unknown_names_and_bad_files() {
    assert_eq!(ncg(&["hilbert", "Nope"]).status.code(), Some(3));
    assert_eq!(ncg(&["hilbert"]).status.code(), Some(3));
    let bad = temp_file("bad.nws", "[algebra T]\ngenerators = [x]\ndegrees = [1]\nrelations = [\"x^2 + x\"]\n");
    let out = ncg(&["--workspace", bad.to_str().unwrap(), "hilbert", "T"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn json_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("ncg-cli-{}-report.json", std::process::id()));
    let out = ncg(&["--json", path.to_str().unwrap(), "points", "A", "--poly", "x*y + z^2", "--poly", "x^2 - y^2"]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, out.stdout);
    assert_eq!(report(&out)["checks"][0]["evidence"]["count"], 4);
}

#[test]
fn custom_workspace() {
    let text = "[field]\nname = \"GF(5)\"\n\n[algebra P]\ngenerators = [u, v]\ndegrees = [1, 1]\nrelations = [\"u*v - v*u\"]\n";
    let path = temp_file("plane.nws", text);
    let out = ncg(&["--workspace", path.to_str().unwrap(), "hilbert", "P", "--match", "1/(1-t)^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["field"], "GF(5)");
}

#[test]
fn parse_errors_carry_positions() {
    match parse_workspace("[algebra A]\nbase = \"T\"\n") {
        Err(WorkspaceError::UnknownReference { line, name }) => {
            assert_eq!((line, name.as_str()), (2, "T"));
        }
        other => panic!("{other:?}"),
    }
}

fn linear_form() -> impl Strategy<Value = String> {
    (0i64..13, 0i64..13, 1i64..13).prop_map(|(a, b, c)| format!("{a}*x + {b}*y + {c}*z"))
}

fn workspace_text() -> impl Strategy<Value = String> {
    (
        proptest::collection::vec(linear_form(), 1..4),
        proptest::collection::vec(-3i64..4, 1..4),
        proptest::option::of((-8i64..0, 1i64..8, 1usize..5, 2i64..10)),
    )
        .prop_map(|(forms, shifts, window)| {
            let mut t = String::from("[field]\nname = \"GF(13)\"\n\n[algebra S]\ngenerators = [x, y, z]\ndegrees = [1, 1, 1]\n");
            t.push_str("relations = [\"x*y - y*x\", \"x*z - z*x\", \"y*z - z*y\"]\n\n");
            t.push_str("[algebra A]\nbase = \"S\"\nextra_relations = [\"x^2 + y^2 + z^2\"]\n\n");
            for (i, f) in forms.iter().enumerate() {
                t.push_str(&format!("[module M{i}]\nalgebra = \"A\"\nkind = cyclic\nof = [\"{f}\"]\n\n"));
            }
            let parts: Vec<String> = shifts
                .iter()
                .enumerate()
                .map(|(i, s)| format!("\"M{}({s})\"", i % forms.len()))
                .collect();
            t.push_str(&format!("[module F]\nalgebra = \"A\"\nkind = free\nshifts = {shifts:?}\n\n"));
            t.push_str(&format!("[module X]\nalgebra = \"A\"\nkind = sum\nof = [A, {}]\n\n", parts.join(", ")));
            if let Some((lo, hi, h, cap)) = window {
                t.push_str(&format!("[window]\nlo = {lo}\nhi = {hi}\nhomological_max = {h}\ndegree_cap = {cap}\n"));
            }
            t
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn workspaces_round_trip(text in workspace_text()) {
        let ws = parse_workspace(&text).unwrap();
        let again = parse_workspace(&serialize_workspace(&ws)).unwrap();
        prop_assert_eq!(&again, &ws);
        prop_assert_eq!(serialize_workspace(&again), serialize_workspace(&ws));
    }
}
