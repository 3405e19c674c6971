use std::path::Path;
use std::process::{Command, Output};

fn mcolour(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcolour"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (serde_json::Value, i32) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = mcolour(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("invalid JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (value, out.status.code().unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_random_is_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = mcolour(&["gen-random", "--n", "20", "--m", "3", "--seed", seed, "--out", path_str(path)]);
        assert!(out.status.success());
    }
    let bytes = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(bytes(&a), bytes(&b));
    assert_ne!(bytes(&a), bytes(&c));
}

#[test]
fn gen_random_empty_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = mcolour(&["gen-random", "--n", "0", "--m", "4", "--out", path_str(&path)]);
    assert!(out.status.success());
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file["n"], 0);
    assert_eq!(file["colours"], serde_json::json!([]));
}

#[test]
fn gen_random_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    let out = mcolour(&["gen-random", "--n", "3", "--m", "2", "--dot", path_str(&path)]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 3);
}

#[test]
fn complement_both_parities_succeed() {
    let (odd, code) = report(&["complement", "--m", "3", "--orbits", "3"]);
    assert_eq!(code, 0);
    assert_eq!(odd["outcome"], "complement verified");
    assert_eq!(odd["data"]["vertices"], 18);

    for m in ["2", "4"] {
        let (even, code) = report(&["complement", "--m", m]);
        assert_eq!(code, 0, "{even}");
        assert_eq!(even["outcome"], "obstruction verified");
    }
    let (two, _) = report(&["complement", "--m", "2"]);
    assert_eq!(two["citations"][0], "element 1 acts as (1 2)");
}

#[test]
fn supplement_exit_codes() {
    let (ok, code) = report(&["supplement", "--m", "2", "--cover", "tilde"]);
    assert_eq!(code, 0);
    assert_eq!(ok["data"]["kernel"].as_array().unwrap().len(), 2);

    let (blocked, code) = report(&["supplement", "--m", "2", "--cover", "hat"]);
    assert_eq!(code, 1);
    assert_eq!(blocked["outcome"], "supplement blocked");
    assert!(blocked["citations"][0].as_str().unwrap().contains("(1 2)"));
}

#[test]
fn cover_table_m8_cites_both_covers() {
    for cover in ["tilde", "hat"] {
        let (value, code) = report(&["cover-table", "--m", "8", "--cover", cover]);
        assert_eq!(code, 0);
        let rows = value["data"]["rows"].as_array().unwrap();
        let r4 = rows.iter().find(|row| row["r"] == 4).unwrap();
        assert_eq!(r4["expected_order"], 2);
        assert!(value["citations"]
            .as_array()
            .unwrap()
            .iter()
            .any(|c| c == "no supplement from either cover"));
    }
}

#[test]
fn cover_table_exports_cover() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cover.json");
    let out = mcolour(&["cover-table", "--m", "3", "--cover", "hat", "--out", path_str(&path)]);
    assert!(out.status.success());
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file["elements"].as_array().unwrap().len(), 12);
    assert_eq!(file["group"]["size"], 12);
}

#[test]
fn saturate_then_obstruction_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    let sat = dir.path().join("sat.json");
    assert!(mcolour(&["gen-random", "--n", "3", "--m", "2", "--seed", "4", "--out", path_str(&seed)])
        .status
        .success());
    let (value, code) = report(&[
        "saturate", "--input", path_str(&seed), "--k", "2", "--out", path_str(&sat),
    ]);
    assert_eq!(code, 0, "{value}");
    assert_eq!(value["data"]["achieved"], true);

    let small = dir.path().join("small.json");
    assert!(mcolour(&["gen-random", "--n", "6", "--m", "2", "--seed", "1", "--out", path_str(&small)])
        .status
        .success());
    let (value, code) = report(&["obstruction", "--input", path_str(&small)]);
    assert_eq!(code, 0, "{value}");
}

#[test]
fn reports_are_deterministic() {
    let args = ["complement", "--m", "5", "--seed", "11"];
    let first = mcolour(&[&args[..], &["--json"]].concat());
    let second = mcolour(&[&args[..], &["--json"]].concat());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn invalid_parameters_fail() {
    let out = mcolour(&["gen-random", "--n", "4", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = mcolour(&["supplement", "--m", "4", "--cover", "spin"]);
    assert!(!out.status.success());
}

#[test]
fn coset_bound_sweep() {
    let (value, code) = report(&["coset-bound", "--m", "10", "--k", "10"]);
    assert_eq!(code, 0);
    assert_eq!(value["data"]["grid"]["10"].as_array().unwrap().len(), 10);
}
