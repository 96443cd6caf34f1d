use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stable-pieces"))
        .args(args)
        .env_remove("STABLE_PIECES_GUARD")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn descriptor_count(v: &Value) -> usize {
    v["pairs"].as_array().unwrap().iter().map(|p| p["descriptors"].as_array().unwrap().len()).sum()
}

#[test]
fn pieces_of_single_pairs() {
    let v = json(&["pieces", "--type", "A2", "--J", "2", "--y", "e", "--json"]);
    assert_eq!(descriptor_count(&v), 3);
    let d = &v["pairs"][0]["descriptors"][2];
    assert_eq!(d["w"], serde_json::json!([1, 2]));
    assert_eq!(d["dim"], 8);

    let v = json(&["pieces", "--type", "A1", "--J", "", "--y", "s1", "--json"]);
    assert_eq!(descriptor_count(&v), 2);
}

#[test]
fn pieces_sweep_covers_every_pair() {
    let v = json(&["pieces", "--type", "A1", "--json"]);
    // (J, y) in {({1}, e), ({}, e), ({}, s1)}
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    assert_eq!(descriptor_count(&v), 1 + 2 + 2);
}

#[test]
fn rejects_bad_input() {
    assert_eq!(run(&["pieces", "--type", "A2", "--J", "1", "--y", "s1"]).status.code(), Some(2));
    assert_eq!(run(&["pieces", "--type", "Q7"]).status.code(), Some(2));
    assert_eq!(run(&["pieces", "--type", "A2", "--J", "3"]).status.code(), Some(2));
    assert_eq!(run(&["pieces", "--type", "A2", "--delta", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--type", "A2", "--csv"]).status.code(), Some(2));
    assert_eq!(run(&["wonderful", "--type", "A1", "--torus-rank", "2"]).status.code(), Some(2));
    assert_eq!(run(&["glcheck", "--d", "2", "--q", "4", "--mode", "10.2"]).status.code(), Some(2));
}

#[test]
fn verify_passes() {
    for args in [
        &["verify", "--type", "A2"][..],
        &["verify", "--type", "B2"],
        &["verify", "--type", "A2", "--delta", "2,1"],
    ] {
        let mut a = args.to_vec();
        a.push("--json");
        assert_eq!(json(&a)["verdict"], "pass", "{args:?}");
    }
}

#[test]
fn wonderful_a1() {
    let v = json(&["wonderful", "--type", "A1", "--json"]);
    assert_eq!(v["total"], "1+q+q^2+q^3");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["cs_index"].as_array().unwrap().len(), 3);
}

#[test]
fn wonderful_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atlas.csv");
    let out = run(&["wonderful", "--type", "A2", "--csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let mut rd = csv::Reader::from_path(&path).unwrap();
    let headers = rd.headers().unwrap().clone();
    assert_eq!(&headers[0], "J");
    assert_eq!(&headers[7], "count_factored");
    assert!(rd.records().count() > 4);
}

#[test]
fn glcheck_plane() {
    let v = json(&["glcheck", "--d", "2", "--q", "2", "--mode", "10.2", "--json"]);
    let sizes: Vec<u64> = v["buckets"].as_array().unwrap().iter().map(|b| b["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [3, 6]);
    assert_eq!(v["verdict"], "pass");

    let v = json(&["glcheck", "--d", "2", "--q", "3", "--mode", "line-hyperplane", "--json"]);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn glcheck_single_full_config() {
    let v = json(&["glcheck", "--d", "3", "--q", "2", "--mode", "full", "--blocks", "1,2", "--sigma", "2,1", "--json"]);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["config"], "full(blocks=[1, 2],sigma=[2, 1])");
}

#[test]
fn glcheck_guard() {
    assert_eq!(run(&["glcheck", "--d", "4", "--q", "3", "--mode", "full"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_stable-pieces"))
        .args(["glcheck", "--d", "2", "--q", "2", "--mode", "10.2"])
        .env("STABLE_PIECES_GUARD", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_stable-pieces"))
        .args(["glcheck", "--d", "2", "--q", "2", "--mode", "10.2"])
        .env("STABLE_PIECES_GUARD", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["pieces", "--type", "B2", "--json"][..],
        &["wonderful", "--type", "G2", "--csv"],
        &["glcheck", "--d", "3", "--q", "2", "--mode", "10.3"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
