use std::process::{Command, Output};

use serde_json::Value;

fn hg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypergrass")).args(args).env_remove("HYPERGRASS_THREADS").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn axioms_on_s_pass() {
    let o = hg(&["axioms", "--field", "S"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn bad_chirotope_fails_with_witness() {
    let o = hg(&["check-gp", "--field", "S", "--r", "2", "--n", "4", "--chirotope", "+-++++"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["valid"], false);
    assert_eq!(v["witness"]["I"], serde_json::json!([2, 3, 4]));
    assert_eq!(v["witness"]["J"], serde_json::json!([1]));
    let ok = hg(&["check-gp", "--field", "TR", "--r", "2", "--n", "3", "--coords", "12:3,13:-2,23:1", "--naive"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["naive"], true);
}

#[test]
fn gp_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("v.json");
    std::fs::write(&p, r#"{"field":"TR","r":2,"n":4,"coords":{"12":"3","13":"1","14":"1","23":"1","24":"1","34":"3"}}"#).unwrap();
    let o = hg(&["check-gp", "--in", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
    std::fs::write(&p, r#"{"field":"TR","r":2,"n":4,"coords":{"12":"1","13":"1","14":"1/2","23":"1/2","24":"1","34":"1"}}"#).unwrap();
    assert_eq!(hg(&["check-gp", "--in", p.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn enumerate_small() {
    let o = hg(&["enumerate", "--field", "K", "--r", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "\"01\"\n\"10\"\n\"11\"\n");
    let c = hg(&["enumerate", "--field", "S", "--r", "2", "--n", "4", "--count"]);
    assert_eq!(json(&c)["count"], 146);
}

#[test]
fn output_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for t in ["1", "4", "7"] {
        let p = dir.path().join(format!("p{t}.jsonl"));
        let o = hg(&["--threads", t, "enumerate", "--field", "S", "--r", "2", "--n", "5", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        files.push(std::fs::read(&p).unwrap());
    }
    assert!(files.windows(2).all(|w| w[0] == w[1]));
    let via_env = Command::new(env!("CARGO_BIN_EXE_hypergrass"))
        .args(["enumerate", "--field", "S", "--r", "2", "--n", "5"])
        .env("HYPERGRASS_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, files[0]);
    let bad = Command::new(env!("CARGO_BIN_EXE_hypergrass"))
        .args(["enumerate", "--field", "S", "--r", "2", "--n", "5"])
        .env("HYPERGRASS_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn poset_and_homology_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("points.jsonl");
    let dot = dir.path().join("hasse.dot");
    hg(&["enumerate", "--field", "S", "--r", "1", "--n", "3", "--out", pts.to_str().unwrap()]);
    let o = hg(&["poset", "--in", pts.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["field"], "S");
    assert_eq!(v["points"], 13);
    let d = std::fs::read_to_string(&dot).unwrap();
    assert!(d.starts_with("digraph hasse {"));
    assert!(d.contains("[label=\"+00\"]"));
    assert_eq!(d.matches("->").count() as u64, v["hasseEdges"].as_u64().unwrap());
    let h = hg(&["homology", "--in", pts.to_str().unwrap(), "--field", "S", "--r", "1", "--n", "3"]);
    assert_eq!(json(&h)["betti"], serde_json::json!([1, 1, 1]));
    let k = hg(&["homology", "--field", "K", "--r", "2", "--n", "4"]);
    assert_eq!(json(&k)["betti"], serde_json::json!([1, 0, 0, 0, 0]));
}

#[test]
fn realize_and_dressian() {
    let f = hg(&["realize", "--hom", "kappa", "--field", "S", "--r", "3", "--n", "7", "--matroid", "fano"]);
    assert_eq!(f.status.code(), Some(1));
    let v = json(&f);
    assert_eq!(v["count"], 0);
    assert!(v["elapsed"].is_number());
    let nf = hg(&["realize", "--field", "S", "--r", "3", "--n", "7", "--matroid", "non-fano"]);
    assert_eq!(nf.status.code(), Some(0));
    assert!(json(&nf)["count"].as_u64().unwrap() >= 1);
    let m = hg(&["dressian", "--r", "2", "--n", "4", "--values", "12:2,13:1,14:1,23:2,24:4,34:3"]);
    assert_eq!(m.status.code(), Some(0));
    assert!(String::from_utf8(m.stdout).unwrap().starts_with("member\n"));
    let n = hg(&["dressian", "--r", "2", "--n", "4", "--values", "12:2,13:1,14:1,23:2,24:3,34:3", "--json"]);
    assert_eq!(n.status.code(), Some(1));
    assert_eq!(json(&n)["result"], "nonmember");
}

#[test]
fn dequantize_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("fig1.csv");
    let o = hg(&["dequantize", "--h", "1/5", "--grid", "-2:2:0.05", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = std::fs::read_to_string(&p).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("x,y,z"));
    assert_eq!(s.lines().count(), 1 + 81 * 81);
    let row = s.lines().find(|l| l.starts_with("1.0000000000000000000,1.0000000000000000000,")).unwrap();
    assert!(row.ends_with(",1.1486983549970350068"), "{row}");
    let pair = hg(&["dequantize", "--pair", "2,-2"]);
    assert_eq!(pair.status.code(), Some(0));
    assert_eq!(json(&pair)["kind"], "cancellation");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hg(&["axioms", "--field", "S", "--bogus"]).status.code(), Some(2));
    assert_eq!(hg(&["axioms", "--field", "Q"]).status.code(), Some(2));
    assert_eq!(hg(&["enumerate", "--field", "TR", "--r", "1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(hg(&["enumerate", "--field", "S", "--r", "3", "--n", "9"]).status.code(), Some(2));
    assert_eq!(hg(&["check-hom", "--from", "R", "--to", "TR", "--map", "id"]).status.code(), Some(1));
    assert_eq!(hg(&["check-hom", "--from", "TR", "--to", "S"]).status.code(), Some(0));
    let help = hg(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8(help.stdout).unwrap().contains("JSONL"));
}
