//! The binary end to end: job files, flags, exit codes, DOT output, batch mode.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skeleta"))
}

fn job(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/jobs").join(name)
}

fn with_stdin(mut cmd: Command, input: &str) -> Output {
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn every_sample_job_succeeds() {
    for entry in std::fs::read_dir(job("")).unwrap() {
        let path = entry.unwrap().path();
        let out = bin().arg(&path).output().unwrap();
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["schema"], 1);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = bin().arg(job("cubic_s3.json")).output().unwrap();
    let b = bin().arg(job("cubic_s3.json")).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["routes_agree"], true);
    assert_eq!(v["ledger_ok"], true);
    assert_eq!(v["genus"], 3);
}

#[test]
fn flags_override_the_job() {
    let out = bin().arg(job("cubic_s3.json")).args(["--route", "inertia", "--field-char", "37"]).output().unwrap();
    assert!(out.status.success());
    let v = json(&out);
    assert!(v.get("quadratic_subfield").is_none());
    assert!(v.get("inertia").is_some());
    let out = bin().arg(job("septree.json")).args(["--point-leaves", "1"]).output().unwrap();
    let plain = bin().arg(job("septree.json")).output().unwrap();
    let n = |o: &Output| json(o)["tree"]["vertices"].as_array().unwrap().len();
    assert_eq!(n(&out), n(&plain) + 5);
}

#[test]
fn exit_codes_follow_error_classes() {
    let cases = [
        (r#"{"schema":1,"kind":"cubic","p":"x^3","q":"x^3+"}"#, 2),
        (r#"{"schema":2,"kind":"jacobian","graph":{"vertices":[],"edges":[]}}"#, 2),
        (r#"{"schema":1,"kind":"cubic","p":"x","q":"x^2+x"}"#, 2),
        (r#"{"schema":1,"kind":"cubic","p":"x","q":"0"}"#, 4),
        (r#"{"schema":1,"kind":"superelliptic","n":13,"f":"x*(x-1)"}"#, 4),
    ];
    for (input, code) in cases {
        let out = with_stdin(bin(), input);
        assert_eq!(out.status.code(), Some(code), "{input}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(json(&out)["error"]["message"].is_string());
    }
}

#[test]
fn dot_files_are_written() {
    let dir = std::env::temp_dir().join(format!("skeleta-dot-{}", std::process::id()));
    let out = bin().arg(job("cubic_s3.json")).arg("--emit-dot").arg(&dir).output().unwrap();
    assert!(out.status.success());
    for name in ["d", "closure", "quotient", "skeleton"] {
        let text = std::fs::read_to_string(dir.join(format!("{name}.dot"))).unwrap();
        assert!(text.starts_with("graph "), "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn batch_mode_reports_each_job() {
    let input = r#"[
        {"schema":1,"kind":"septree","points":["0","pi","inf"]},
        {"schema":1,"kind":"elliptic","a":"1","b":"1","field":{"precision":24}},
        {"schema":1,"kind":"cubic","p":"x","q":"0"}
    ]"#;
    let mut cmd = bin();
    cmd.arg("--batch");
    let out = with_stdin(cmd, input);
    let v = json(&out);
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 3);
    assert_eq!(items[0]["kind"], "septree");
    assert_eq!(items[1]["reduction"]["type"], "good");
    assert!(items[2]["error"].is_object());
    assert_eq!(out.status.code(), Some(4));
}
