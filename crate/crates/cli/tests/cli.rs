use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wittext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittext")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn h1_small_degrees() {
    let out = wittext(&["h1", "--alpha", "1", "--beta", "0", "--degree", "2"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["h1_dim"], 2);
    assert_eq!(v["representatives"].as_array().unwrap().len(), 2);

    let out = wittext(&["h1", "--alpha", "5/3", "--beta", "-1/3", "--degree", "3"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["h1_dim"], 1);
}

#[test]
fn h1_degree_seven_roots() {
    let on_line = wittext(&["h1", "--alpha", "(7-sqrt(19))/2", "--beta", "(-5-sqrt(19))/2", "--degree", "7"]);
    let v: Value = serde_json::from_str(&stdout(&on_line)).unwrap();
    assert_eq!(v["h1_dim"], 1);
    // β as printed next to this α lies off the line α − β = 6
    let printed = wittext(&["h1", "--alpha", "(7-sqrt(19))/2", "--beta", "-(5-sqrt(19))/2", "--degree", "7"]);
    let v: Value = serde_json::from_str(&stdout(&printed)).unwrap();
    assert_eq!(v["h1_dim"], 0);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&wittext(&["h1", "--alpha", "1/0", "--beta", "0", "--degree", "2"])), 2);
    assert_eq!(code(&wittext(&["h1", "--alpha", "x", "--beta", "0", "--degree", "2"])), 2);
    assert_eq!(code(&wittext(&["tables", "--which", "table4"])), 2);
    assert_eq!(code(&wittext(&["verify", "/nonexistent/cocycle.json"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"alpha\": 1");
    assert_eq!(code(&wittext(&["verify", &bad])), 2);
    let unknown = write(dir.path(), "unknown.json", r#"{"alpha":"0","beta":"1","gamma":"0","kind":"poly","poly":"k","extra":1}"#);
    assert_eq!(code(&wittext(&["verify", &unknown])), 2);
}

#[test]
fn tables_row_counts_and_status() {
    let out = wittext(&["tables", "--which", "poly-M", "--format", "json"]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert!(!v["discrepancies"].as_array().unwrap().is_empty());

    let out = wittext(&["tables", "--which", "poly-theta", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0]["class"], "k*θ(0)");
    assert_eq!(rows[0]["status"], "matches");
    let findings: Vec<&Value> = v["discrepancies"].as_array().unwrap().iter().filter(|d| d["degree"] == 6).collect();
    assert_eq!(findings.len(), 2);

    let out = wittext(&["tables", "--which", "nonpoly"]);
    assert_eq!(code(&out), 0);
    let md = stdout(&out);
    assert!(md.contains("m^-1*k^3 + k^2"));
    assert_eq!(md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| n ")).count(), 10);
}

#[test]
fn tables_csv_has_header_and_rows() {
    let out = wittext(&["tables", "--which", "nonpoly", "--format", "csv"]);
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().get(0), Some("degree"));
    assert_eq!(reader.records().count(), 10);
}

#[test]
fn verify_accepts_cocycles_and_rejects_others() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"alpha":"2","beta":"0","gamma":"0","kind":"poly","poly":"k^3 + 2*k^2*m"}"#);
    assert_eq!(code(&wittext(&["verify", &good])), 0);
    let inv = write(dir.path(), "inv.json", r#"{"alpha":"2","beta":"1","gamma":"1/2","kind":"inv_m","mu":"k^3","poly":"k^2"}"#);
    assert_eq!(code(&wittext(&["verify", &inv])), 0);
    let bad = write(dir.path(), "bad.json", r#"{"alpha":"2","beta":"0","gamma":"0","kind":"poly","poly":"k^3 + 2*k^2*m + m^2"}"#);
    let out = wittext(&["verify", &bad]);
    assert_eq!(code(&out), 1);
    assert!(!stdout(&out).is_empty());
    let integral = write(dir.path(), "integral.json", r#"{"alpha":"0","beta":"1","gamma":"0","kind":"inv_m","mu":"k"}"#);
    assert_eq!(code(&wittext(&["verify", &integral])), 1);
}

#[test]
fn dualize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "w22.json", r#"{"alpha":"0","beta":"-1","gamma":"0","kind":"delta_km","f":"k^3"}"#);
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    assert_eq!(code(&wittext(&["dualize", &src, "-o", once.to_str().unwrap()])), 0);
    let dual: Value = serde_json::from_str(&fs::read_to_string(&once).unwrap()).unwrap();
    assert_eq!(dual["kind"], "delta_m0");
    assert_eq!((dual["alpha"].as_str(), dual["beta"].as_str()), (Some("2"), Some("1")));
    assert_eq!(code(&wittext(&["verify", once.to_str().unwrap()])), 0);
    assert_eq!(code(&wittext(&["dualize", once.to_str().unwrap(), "-o", twice.to_str().unwrap()])), 0);
    let back: Value = serde_json::from_str(&fs::read_to_string(&twice).unwrap()).unwrap();
    let orig: Value = serde_json::from_str(&fs::read_to_string(&src).unwrap()).unwrap();
    assert_eq!(back, orig);
}

#[test]
fn current_algebra_presets() {
    for preset in ["w22", "twisted-hv", "beta1-const", "beta1-k"] {
        assert_eq!(code(&wittext(&["check-current-algebra", "--preset", preset])), 0, "{preset}");
    }
    assert_eq!(code(&wittext(&["check-current-algebra", "--preset", "heisenberg-beta1"])), 1);
    assert_eq!(code(&wittext(&["check-current-algebra", "--beta", "0", "--mu", "k^2", "--heisenberg"])), 0);
}

#[test]
fn scan_low_degrees() {
    let out = wittext(&["scan", "--max-degree", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let degrees = v.as_array().unwrap();
    assert_eq!(degrees.len(), 4);
    assert!(degrees.iter().all(|d| d["nontrivial"] == true));
}
