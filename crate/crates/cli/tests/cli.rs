use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiholo"))
        .args(args)
        .env("HOLO_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_rank_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["classify", "-g", "Z^1 x Z4"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["t_order"], 4);
    assert_eq!(v["case"], "T4-rank1");
    assert_eq!(v["group"], "Z^1 x Z4");
    assert_eq!(v["rings"].as_array().unwrap().len(), 4);
}

#[test]
fn text_output_uses_product_notation() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--format", "text", "classify", "-g", "Z8"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x1*x1 = t1"), "{text}");
    assert!(text.contains("T2-cyclic"));
}

#[test]
fn rings_with_k_flags_the_extra_ring() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(&["rings", "-g", "Z4", "--include-k"], dir.path()));
    let rings = v["rings"].as_array().unwrap();
    assert_eq!(rings.len(), 2);
    assert_eq!(rings.iter().filter(|r| r["k_only"] == true).count(), 1);
    let v = json(&run(&["rings", "-g", "Z4"], dir.path()));
    assert_eq!(v["rings"].as_array().unwrap().len(), 1);
}

#[test]
fn theta_tables() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(&["theta", "-g", "Z8", "--ring", "1"], dir.path()));
    assert_eq!(v["theta"]["2*x1"], "6*x1");
    assert_eq!(v["theta"]["x1"], "x1");
    assert_eq!(v["gamma"]["x1"]["x1"], "5*x1");
    let out = run(&["theta", "-g", "Z8", "--ring", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_certificate_is_cached_and_stable() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(&["oracle", "-g", "Z8"], dir.path());
    assert_eq!(first.status.code(), Some(0));
    let v = json(&first);
    assert_eq!(
        (v["k_count"].as_u64(), v["h_count"].as_u64()),
        (Some(2), Some(2))
    );
    assert_eq!(v["symmetric_normalizer"]["t_order"], 2);
    assert!(v["members"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m["theta"].is_array()));
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let second = run(&["oracle", "-g", "Z8"], dir.path());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["classify", "-g", "Z1"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["classify", "-g", "Z8xZ2"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(run(&["classify"], dir.path()).status.code(), Some(2));
    assert_eq!(
        run(&["oracle", "-g", "Z128"], dir.path()).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["oracle", "-g", "Z^1 x Z2"], dir.path()).status.code(),
        Some(3)
    );
}

#[test]
fn verify_small_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--max-order", "16"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ok"], true);
    assert!(v["first_failure"].is_null());
}
