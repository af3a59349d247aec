use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifs-mdim")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

#[test]
fn check_prints_a_versioned_summary() {
    let out = run(&["check", "--gallery", "stray_arrow"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["sections"][0]["result"]["is_ifs"], true);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["entropy", "--gallery", "no_such_system"]).status.code(), Some(1));
    assert_eq!(run(&["gop", "--gallery", "full_shift_2", "--random", "1,2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn broken_triangle_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"space": {"kind": "matrix", "labels": ["a", "b", "c"],
                      "dist": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]},
            "maps": [{"generator": "identity"}]}"#,
    )
    .unwrap();
    let out = run(&["check", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn entropy_writes_tables_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["entropy", "--gallery", "full_shift_2", "--n-grid", "1,2,3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    let mut plots = 0;
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let p = e.unwrap().path();
        let name = p.file_name().unwrap().to_string_lossy().to_string();
        if name.ends_with(".csv") {
            let r = rows(&p);
            assert!(!r.is_empty(), "{name}");
            if name.starts_with("plot_") {
                plots += 1;
                assert!(r.iter().all(|row| row.len() == 2), "{name}");
            }
        }
    }
    assert!(plots > 0);
}

#[test]
fn seeded_runs_repeat() {
    let args = ["gop", "--gallery", "full_shift_2", "--random", "4,2,3", "--m-max", "2", "--seed", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
