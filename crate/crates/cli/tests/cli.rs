use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn ffsum(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ffsum")).args(args).output().expect("run ffsum");
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (code, json)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ffsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const WORKED: &str = "q=5;f=0,1,0,1";

#[test]
fn zeta_of_worked_curve() {
    let (code, v) = ffsum(&["zeta", "--curve", WORKED]);
    assert_eq!(code, 0);
    assert_eq!(v["L"], serde_json::json!(["1", "-2", "5"]));
    assert_eq!(v["h"], "4");
    assert_eq!(v["g"], 1);
}

#[test]
fn summatory_matches_oracle() {
    for kind in ["kfree", "totient"] {
        let (code, _) = ffsum(&["summatory", "--curve", WORKED, "--kind", kind, "--xmax", "8", "--oracle"]);
        assert_eq!(code, 0, "{kind}");
    }
}

#[test]
fn stochastic_commands_need_a_seed() {
    let (code, v) = ffsum(&["distribution", "--curve", WORKED]);
    assert_eq!(code, 1);
    assert!(v["error"].is_object() || v["error"].is_string(), "{v}");
    let (code, _) = ffsum(&["haar", "--g", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn help_and_bad_input() {
    let status = Command::new(env!("CARGO_BIN_EXE_ffsum")).arg("--help").output().unwrap().status;
    assert_eq!(status.code(), Some(0));
    assert_eq!(ffsum(&["nonsense"]).0, 1);
    assert_eq!(ffsum(&["summatory", "--curve", WORKED, "--xmax", "5000"]).0, 1);
    assert_eq!(ffsum(&["zeta", "--curve", "q=4;f=0,1,0,1"]).0, 1);
    assert_eq!(ffsum(&["zeta", "--curve", "q=5;f=1,0,1"]).0, 1);
    assert_eq!(ffsum(&["haar", "--g", "1", "--seed", "1", "--threads", "0"]).0, 1);
}

#[test]
fn out_and_csv_files_are_written() {
    let out = tmp("explicit.json");
    let csv = tmp("explicit.csv");
    let (code, v) = ffsum(&[
        "explicit",
        "--curve",
        WORKED,
        "--kind",
        "totient",
        "--xmax",
        "30",
        "--sup-n",
        "1000",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v, Value::Null, "report goes to the file, not stdout");
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved["main_term"]["d"], "1/29");
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("X,r_tilde_exact,e_model,residual"));
    assert_eq!(lines.count(), 30);
}

#[test]
fn haar_is_reproducible() {
    let args = ["haar", "--g", "2", "--samples", "20000", "--seed", "9"];
    let (c1, a) = ffsum(&args);
    let (c2, b) = ffsum(&[&args[..], &["--threads", "2"]].concat());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn injected_fault_is_reported() {
    let (code, v) = ffsum(&["selftest", "--seed", "1", "--only", "2", "--inject-fault"]);
    assert_eq!(code, 2);
    let c = v["criteria"].as_array().unwrap().iter().find(|c| c["id"] == 2).unwrap();
    assert_eq!(c["status"], "FAIL");
}
