use std::process::{Command, Output};

use serde_json::Value;

fn tlsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlsym")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON error")
}

fn b_file(name: &str, json: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("tlsym-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, json).unwrap();
    path
}

const RANDOM_B: &str = r#"{"n": 3, "entries": [[[0.3,0.1],[1.2,0],[-0.4,0.5]],[[0.7,0],[0.2,-0.3],[0.9,0]],[[-0.5,0.2],[0.1,0],[1.1,0.4]]]}"#;

#[test]
fn verify_kls_passes() {
    let out = tlsym(&["verify", "--family", "kls", "--p", "2", "--n", "3", "--N", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["exit"], 0);
    assert_eq!(r["config"]["seed"], 42);
    let checks = r["checks"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    assert!(checks.iter().all(|c| c["pass"] == true));
    for name in [
        "tl.quadratic",
        "braid",
        "pair4.spectral_ybe",
        "cubic.constant_121",
        "antisymmetrizer",
        "rll",
        "centralizer.H",
        "casimir.scalar",
        "weight_symmetry",
    ] {
        assert!(checks.iter().any(|c| c["name"] == name), "missing {name}");
    }
    assert_eq!(r["tables"]["antisymmetrizer"]["winner"], "q_inverse_cubed");
}

#[test]
fn decompose_table() {
    let out = tlsym(&["decompose", "--n", "3", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let t = &report(&out)["tables"]["decomposition"];
    let rows: Vec<(u64, u64, u64)> = t["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["k"].as_u64().unwrap(), r["p_k"].as_u64().unwrap(), r["nu_k"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, vec![(0, 1, 2), (2, 8, 3), (4, 55, 1)]);
    assert_eq!(t["checks"]["sum_pk_nuk"], 81);
}

#[test]
fn degenerate_q_is_a_config_error() {
    let out = tlsym(&["verify", "--family", "xxz", "--q", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "DegenerateParameter");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--family", "file"],
        vec!["verify", "--family", "kls", "--q", "3"],
        vec!["verify", "--n", "2"],
        vec!["spectrum", "--p", "not-a-number"],
        vec!["bogus"],
        vec!["spectrum", "--N", "9"],
        vec!["rmatrix", "--u", "0"],
    ] {
        let out = tlsym(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_json(&out)["error"].is_string());
    }
}

#[test]
fn failed_checks_exit_1() {
    let path = b_file("strict", RANDOM_B);
    let out = tlsym(&["verify", "--family", "file", "--b-file", path.to_str().unwrap(), "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["exit"], 1);
}

#[test]
fn file_family_verifies() {
    let path = b_file("ok", RANDOM_B);
    let out = tlsym(&["verify", "--family", "file", "--b-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn spectrum_reports_clusters() {
    let out = tlsym(&["spectrum", "--N", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let clusters = r["tables"]["spectrum"]["clusters"].as_array().unwrap();
    let mults: Vec<u64> = clusters.iter().map(|c| c["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mults, vec![21, 3, 3]);
    let csv = tlsym(&["spectrum", "--N", "2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("value_re,value_im,multiplicity\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn other_commands_pass() {
    for args in [
        vec!["rmatrix", "--u", "-1+0.5i", "--v", "2i"],
        vec!["casimir"],
        vec!["casimir", "--family", "xxz", "--q", "3"],
        vec!["centralizer", "--N", "4"],
        vec!["centralizer", "--family", "xxz", "--N", "5"],
        vec!["poincare", "--n", "4", "--N", "8"],
        vec!["symmetrizer", "--N", "3"],
    ] {
        let out = tlsym(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v["wall_time_ms"] = Value::Null;
        v
    };
    let a = strip(report(&tlsym(&["verify", "--seed", "7"])));
    let b = strip(report(&tlsym(&["verify", "--seed", "7"])));
    assert_eq!(a, b);
}
