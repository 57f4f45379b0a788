use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SQUARE: &str = r#"{"dim":2,"vertices":[["0","0"],["1","0"],["1","1"],["0","1"]]}"#;
const ORIGIN: &str = r#"{"dim":2,"vertices":[["0","0"]]}"#;
const TRIANGLE_BODY: &str = r#"{"ambient":{"dim":2,"rays":[[1,0],[-1,0],[0,1],[0,-1]],"coeffs":["0","1","0","1"]},
  "body":{"dim":2,"vertices":[["0","0"],["1","0"],["1","1/2"]]}}"#;
const SQUARE_DATA: &str = r#"{"dim":2,"rays":[[1,0],[-1,0],[0,1],[0,-1]],"coeffs":["0","1","0","1"]}"#;

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, contents).unwrap();
        p
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toriclab")).args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn volume_of_square() {
    let d = Dir::new();
    let sq = d.file("square.json", SQUARE);
    let o = run(&["volume", sq.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), r#"{"volume":"1"}"#);
}

#[test]
fn volume_from_halfspaces() {
    let d = Dir::new();
    let p = d.file(
        "tri.json",
        r#"{"dim":2,"halfspaces":[{"normal":[1,0],"offset":"0"},{"normal":[0,1],"offset":"0"},{"normal":[-1,-1],"offset":"-1"}]}"#,
    );
    assert_eq!(stdout_json(&run(&["volume", p.to_str().unwrap()]))["volume"], "1/2");
}

#[test]
fn mixed_volume_and_measure() {
    let d = Dir::new();
    let sq = d.file("square.json", SQUARE);
    let s = sq.to_str().unwrap();
    assert_eq!(stdout_json(&run(&["mixed-volume", s, s]))["mixed_volume"], "1");
    let m = stdout_json(&run(&["area-measure", s]));
    assert_eq!(m["dim"], 2);
    assert_eq!(m["atoms"].as_array().unwrap().len(), 4);
    assert!(m["atoms"].as_array().unwrap().iter().all(|a| a["weight"] == "1"));
}

#[test]
fn minkowski_check_holds() {
    let d = Dir::new();
    let sq = d.file("square.json", SQUARE);
    let o = d.file("origin.json", ORIGIN);
    let out = run(&["minkowski-check", "--q", o.to_str().unwrap(), "--q-prime", sq.to_str().unwrap(), sq.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["schema"], "1");
    assert_eq!(r["holds"], true);
    assert_eq!(r["lhs"], "1");
}

#[test]
fn containment_violation_is_infeasible() {
    let d = Dir::new();
    let sq = d.file("square.json", SQUARE);
    let o = d.file("origin.json", ORIGIN);
    let out = run(&["minkowski-check", "--q", sq.to_str().unwrap(), "--q-prime", o.to_str().unwrap(), sq.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_json_exits_2() {
    let d = Dir::new();
    let bad = d.file("bad.json", "{\"dim\": 2, \"vertices\": [[\"0\", ");
    assert_eq!(run(&["volume", bad.to_str().unwrap()]).status.code(), Some(2));
    let bad = d.file("bad2.json", r#"{"dim":2,"vertices":[["0","x"]]}"#);
    assert_eq!(run(&["volume", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["volume", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn unbounded_halfspaces_exit_3() {
    let d = Dir::new();
    let p = d.file("half.json", r#"{"dim":2,"halfspaces":[{"normal":[1,0],"offset":"0"}]}"#);
    assert_eq!(run(&["volume", p.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn toric_subcommands() {
    let d = Dir::new();
    let body = d.file("body.json", TRIANGLE_BODY);
    let data = d.file("data.json", SQUARE_DATA);
    let b = body.to_str().unwrap();
    assert_eq!(stdout_json(&run(&["toric", "lelong", b, "--ray", "0"]))["lelong"], "0");
    assert_eq!(stdout_json(&run(&["toric", "lelong", b, "--ray", "2"]))["lelong"], "0");
    let w = stdout_json(&run(&["toric", "width", data.to_str().unwrap(), "--ray", "0"]));
    assert_eq!((w["nu"].as_str(), w["nu_max"].as_str(), w["width"].as_str()), (Some("0"), Some("1"), Some("1")));
    let r = stdout_json(&run(&["toric", "restricted-volume", b, "--ray", "0", "--t", "1/2"]));
    assert_eq!(r["restricted_volume"], "1/4");
    assert_eq!(r["out_of_range"], false);
    let r = stdout_json(&run(&["toric", "restricted-volume", b, "--ray", "0", "--t", "3"]));
    assert_eq!(r["out_of_range"], true);
    assert_eq!(run(&["toric", "lelong", b, "--ray", "9"]).status.code(), Some(2));
}

#[test]
fn verify_minkowski_batch() {
    let o = run(&["verify", "minkowski", "--dim", "2", "--seeds", "0..99"]);
    assert_eq!(o.status.code(), Some(0));
    let reports = lines(&o);
    assert_eq!(reports.len(), 100);
    assert!(reports.iter().all(|r| r["holds"] == true && r["exact"] == true));
    assert!(String::from_utf8_lossy(&o.stderr).contains("100 of 100"));
}

#[test]
fn verify_is_deterministic_and_csv() {
    let a = run(&["verify", "loss-single", "--dim", "3", "--seeds", "0..4"]);
    let b = run(&["verify", "loss-single", "--dim", "3", "--seeds", "0..4"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "res-vol", "--dim", "2", "--seeds", "0..2", "--format", "csv"]);
    let text = String::from_utf8_lossy(&c.stdout);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("schema,statement_id,inputs_digest,lhs,rhs,exact,holds,slack,notes"));
    assert_eq!(rows.count(), 3);
}

#[test]
fn verify_manifest_and_errors() {
    let d = Dir::new();
    let m = d.file("m.json", r#"{"entries":[{"statement":"rs","dim":1,"seeds":"0..9"},{"statement":"width-shift","dim":2,"seeds":"0..4"}]}"#);
    let o = run(&["verify", "--manifest", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o).len(), 15);
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "minkowski", "--seeds", "x"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
}

#[test]
fn reproduce_count_su() {
    let o = run(&["reproduce", "count-su", "--n", "2", "--eps", "1/2", "--t", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = lines(&o);
    assert_eq!(r[0]["statement_id"], "count-su");
    assert_eq!(r[0]["lhs"], "1/16");
    assert_eq!(r[0]["rhs"], "1/16");
    assert_eq!(r[1]["lhs"], "1/4");
    let o = run(&["reproduce", "count-su", "--n", "3", "--eps", "1", "--t", "1/10,1/2"]);
    assert_eq!(lines(&o).len(), 4);
    assert_eq!(run(&["reproduce", "count-su", "--n", "9", "--eps", "1", "--t", "1/2"]).status.code(), Some(3));
}

#[test]
fn monte_carlo_oracle() {
    let d = Dir::new();
    let sq = d.file("square.json", SQUARE);
    let o = run(&["oracle", "mc-volume", sq.to_str().unwrap(), "--samples", "200000", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["exact"], "1");
    assert_eq!(v["within_4_sigma"], true);
}

#[test]
fn emitted_objects_round_trip() {
    let d = Dir::new();
    let sq = d.file("square.json", SQUARE);
    let m = run(&["area-measure", sq.to_str().unwrap()]);
    let parsed: toriclab::area_measure::MeasureJson = serde_json::from_slice(&m.stdout).unwrap();
    let again = serde_json::to_value(toriclab::area_measure::MeasureJson::from(&parsed.to_measure().unwrap())).unwrap();
    assert_eq!(again, stdout_json(&m));
}
