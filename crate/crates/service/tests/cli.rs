use serde_json::Value;
use std::process::{Command, Output};

fn mg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mg"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .env_remove("MG_TIMEOUT_MS")
        .output()
        .unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn missing_file_exits_1() {
    let o = mg(&["prove", "corpus/no_such_file.geo"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("file not found"));
    assert_eq!(stdout_json(&o)["error"]["kind"], "file");
}

#[test]
fn parse_errors_report_their_position() {
    let dir = std::env::temp_dir().join(format!("mg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.geo");
    std::fs::write(&file, "point A free\npoint B = mystery(A)\n").unwrap();
    let o = mg(&["prove", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn prove_clough() {
    let o = mg(&["prove", "corpus/clough.geo", "--statement", "main"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["verdict"], "TRUE");
}

#[test]
fn relate_clough() {
    let o = mg(&["relate", "corpus/clough.geo", "--expr1", "feet", "--expr2", "length(A, B)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["ratio"], "3/2");
    assert_eq!(v["certified"], true);
}

#[test]
fn exhausted_budget_exits_2() {
    let o = mg(&["--timeout-ms", "0", "prove", "corpus/tetrahedron.geo", "--statement", "concurrent"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn instance_with_pins() {
    let o = mg(&["instance", "corpus/midsegment.geo", "--pins", "A=0,0;B=2,0;C=0,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["objects"]["A"]["coordinates"], serde_json::json!([0.0, 0.0]));
}

#[test]
fn seeds_change_instances_not_verdicts() {
    let a = stdout_json(&mg(&["--seed", "1", "prove", "corpus/varignon.geo"]));
    let b = stdout_json(&mg(&["--seed", "99", "prove", "corpus/varignon.geo"]));
    let verdicts = |v: &Value| v["results"].as_array().unwrap().iter().map(|r| r["verdict"].clone()).collect::<Vec<_>>();
    assert_eq!(verdicts(&a), verdicts(&b));
}
