use std::path::Path;
use std::process::{Command, Output};

fn aperiodic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aperiodic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, size: &str, origin: &str) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap();
    let o = aperiodic(&["gen", "--origin", origin, "--size", size, "--out", p]);
    assert!(o.status.success());
    p.to_string()
}

#[test]
fn generated_windows_verify_clean() {
    let dir = tempfile::tempdir().unwrap();
    let w = gen(dir.path(), "w.json", "27x27", "-13,40");
    let report = dir.path().join("r.json");
    let o = aperiodic(&["verify", "--window", &w, "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 violation(s)"));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["format"], "aperiodic-report/1");
    assert_eq!(r["result"], serde_json::json!([]));
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn corrupted_window_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let w = gen(dir.path(), "w.json", "9x9", "0,0");
    let text = std::fs::read_to_string(&w).unwrap();
    // blank out the first cell, which is a corner in the canonical window
    let first = text.find(r#""cells":["#).unwrap() + 9;
    let end = first + text[first..].find("},{").unwrap() + 1;
    let broken = format!("{}{{}}{}", &text[..first], &text[end..]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, broken).unwrap();
    let o = aperiodic(&["verify", "--window", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stdout(&o).contains(" 0 violation(s)"));
}

#[test]
fn bad_input_exits_three_and_bad_usage_two() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{").unwrap();
    assert_eq!(
        aperiodic(&["verify", "--window", junk.to_str().unwrap()]).status.code(),
        Some(3)
    );
    assert_eq!(
        aperiodic(&["verify", "--window", "/no/such/file"]).status.code(),
        Some(3)
    );
    assert_eq!(aperiodic(&["gen", "--size", "3by3"]).status.code(), Some(2));
    assert_eq!(aperiodic(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn periods_prints_axis_vectors() {
    let o = aperiodic(&["periods", "--v1", "1,2", "--v2", "-1,1"]);
    assert_eq!(stdout(&o).trim(), "(3,0) (0,3)");
    let o = aperiodic(&["periods", "--v1", "2,4", "--v2", "-1,-2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scan_is_unsat_and_thread_independent() {
    let one = aperiodic(&["--threads", "1", "scan", "--max", "4"]);
    let four = aperiodic(&["--threads", "4", "scan", "--max", "4"]);
    assert!(one.status.success());
    assert_eq!(stdout(&one), stdout(&four));
    assert_eq!(stdout(&one).matches("unsat").count(), 16);
}

#[test]
fn search_timeout_exits_four() {
    let o = aperiodic(&["search", "--size", "8x8", "--budget", "0"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn analyze_and_mutate_on_canonical_window() {
    let dir = tempfile::tempdir().unwrap();
    let w = gen(dir.path(), "w.json", "27x27", "0,0");
    let o = aperiodic(&["analyze", "--window", &w]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("91 closed squares"));
    let o = aperiodic(&["mutate", "--window", &w, "--samples", "100", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("100/100 mutations caught"));
}

#[test]
fn render_writes_one_path_per_square() {
    let dir = tempfile::tempdir().unwrap();
    let w = gen(dir.path(), "w.json", "27x27", "0,0");
    let svg = dir.path().join("w.svg");
    let o = aperiodic(&[
        "render",
        "--window",
        &w,
        "--out",
        svg.to_str().unwrap(),
        "--layers",
        "blue",
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches(" Z\"").count(), 91);
}

#[test]
fn stdin_window_and_byte_stable_generation() {
    let a = aperiodic(&["gen", "--origin", "5,-7", "--size", "30x20"]);
    let b = aperiodic(&["--threads", "4", "gen", "--origin", "5,-7", "--size", "30x20"]);
    assert_eq!(a.stdout, b.stdout);

    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_aperiodic"))
        .args(["verify", "--window", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&a.stdout).unwrap();
    assert!(child.wait_with_output().unwrap().status.success());
}

#[test]
fn tile_export_lists_every_symbol() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tiles.json");
    assert!(aperiodic(&["tiles", "build", "--out", out.to_str().unwrap()])
        .status
        .success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let n = v["symbols"].as_u64().unwrap() as usize;
    assert_eq!(v["alphabet"].as_array().unwrap().len(), n);
    assert_eq!(v["east_allowed"].as_array().unwrap().len(), n);
    assert_eq!(v["alphabet"][0], serde_json::json!({}));
}
