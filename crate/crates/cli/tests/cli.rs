use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toric-hdi"))
        .args(args)
        .env_remove("TORIC_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str]) -> Value {
    let out = run(args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn variety_check() {
    let v = ok(&["variety-check", "--builtin", "hirzebruch:1"]);
    assert_eq!((v["smooth"].clone(), v["complete"].clone(), v["classRank"].clone()), (true.into(), true.into(), 2.into()));
    let single = r#"{"dim": 2, "rays": [[1, 0], [0, 1]], "maxCones": [[0, 1]]}"#;
    let out = run(&["variety-check", "--fan", "-"], Some(single));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["complete"], false);
}

#[test]
fn malformed_input_is_a_structured_error() {
    let out = run(&["variety-check", "--fan", "-"], Some("{\"dim\": 2, \"rays\": ["));
    assert!(!out.status.success());
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "input");

    let bad = r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, "x"]], "maxCones": [[0, 1]]}"#;
    let out = run(&["variety-check", "--fan", "-"], Some(bad));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["pointer"], "/rays/2/1");
}

#[test]
fn hirzebruch_projection() {
    let args = ["hdi", "--map", &data("phi.json"), "--divisor=0,-1,-2,-3", "--degree", "1", "--oracle"];
    let v = ok(&args);
    assert_eq!(v["splitting"]["degrees"], serde_json::json!([-2, -3, -4]));
    assert_eq!(v["oracle"]["agree"], true);
    let v = ok(&["hdi", "--map", &data("phi.json"), "--divisor=0,-1,-2,-3", "--degree", "0"]);
    assert_eq!(v["rank"], 0);
}

#[test]
fn eigencharacters_of_the_blowup_family() {
    let v = ok(&[
        "hdi",
        "--source",
        "blowup(product(hirzebruch:1,projective:1);1,5)",
        "--target",
        "hirzebruch:1",
        "--matrix",
        "1,0,0;0,1,0",
        "--divisor-on-rays",
        "0,0,1=-2;0,1,-1=-2",
        "--degree",
        "1",
        "--eigenchars",
    ]);
    let keys: Vec<Value> = v["eigencharacters"].as_array().unwrap().iter().map(|e| e["character"].clone()).collect();
    assert_eq!(keys, vec![serde_json::json!([-1]), serde_json::json!([0]), serde_json::json!([1])]);
    assert_eq!(v["rank"], 1);
}

#[test]
fn frobenius_commands() {
    let v = ok(&["frobenius", "--builtin", "projective:1", "-p", "2", "--divisor=0,0", "--oracle"]);
    let classes: Vec<Value> = v["summands"].as_array().unwrap().iter().map(|s| s["class"].clone()).collect();
    assert_eq!(classes, vec![serde_json::json!([0]), serde_json::json!([-1])]);

    let v = ok(&["frobenius", "--builtin", "hirzebruch:1", "-p", "2", "--presentation", &data("cotangent_f1.json"), "--oracle"]);
    assert_eq!(v["matrix"]["entries"].as_array().unwrap().len(), 12);
    assert_eq!(v["hilbert"].as_array().unwrap().len(), 25);
    assert_eq!(v["oracle"]["agree"], true);

    let input: Value = serde_json::from_str(&std::fs::read_to_string(data("cotangent_f1.json")).unwrap()).unwrap();
    let v = ok(&["frobenius", "--builtin", "hirzebruch:1", "-p", "1", "--presentation", &data("cotangent_f1.json")]);
    assert_eq!(v["matrix"], input);
}

#[test]
fn contractions() {
    let v = ok(&["contract", "--builtin", "hirzebruch:1"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
    let v = ok(&["contract", "--builtin", "projective:2"]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["isIsomorphism"], true);
    let v = ok(&["contract", "--builtin", "product(projective:1,projective:1)", "--oracle"]);
    let dims: Vec<Value> = v["contractions"].as_array().unwrap().iter().map(|c| c["target"]["dim"].clone()).collect();
    assert_eq!(dims, vec![Value::from(1), Value::from(1)]);
}

#[test]
fn output_is_deterministic() {
    let args = ["frobenius", "--builtin", "hirzebruch:1", "-p", "2", "--presentation", &data("cotangent_f1.json")];
    let a = run(&args, None).stdout;
    let b = run(&["--threads", "1", args[0], args[1], args[2], args[3], args[4], args[5], args[6]], None).stdout;
    assert_eq!(a, b);
    let pretty = run(&["--output", "pretty", "contract", "--builtin", "projective:2"], None).stdout;
    assert!(String::from_utf8(pretty).unwrap().contains("\n  "));
}
