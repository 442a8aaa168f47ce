use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn uavplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavplan")).args(args).output().expect("running uavplan")
}

fn config(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fit_markov_prints_fractions() {
    let o = uavplan(&["fit-markov"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("quantity,from,to,value\n"));
    assert!(text.contains("transition,2,2,4/9\n"));
    assert!(text.contains("stationary,,2,9/29\n"));
}

#[test]
fn rank_regions_selects_four() {
    let o = uavplan(&["rank-regions"]);
    assert!(o.status.success());
    let selected: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(3) == Some("true"))
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(selected, ["West and South Gippsland", "East Gippsland", "Central", "North East"]);
}

#[test]
fn rank_regions_reads_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zones.csv");
    std::fs::write(&path, "zone,a,b\nx,1,5\ny,2,1\nz,3,3\n").unwrap();
    let o = uavplan(&[
        "rank-regions", "--table", path.to_str().unwrap(), "--weights", "0.5,0.5", "--orientation", "benefit,cost", "-k", "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("1,y,"));
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"config_version": 9}"#).unwrap();
    let o = uavplan(&["--config", bad.to_str().unwrap(), "plan", "--radius", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = uavplan(&["plan", "--radius", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = uavplan(&["--config", &config("bogong.json"), "plan", "--radius", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = uavplan(&["fit-markov", "--sequence", "1,2,5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strict_infeasible_plan_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let args = ["--config", &config("bogong_reported.json"), "--samples", "5000", "--out", out.to_str().unwrap()];
    let o = uavplan(&[&args[..], &["--strict", "plan", "--radius", "40"]].concat());
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists(), "strict failures must not write output");
    let o = uavplan(&[&args[..], &["plan", "--radius", "40"]].concat());
    assert_eq!(o.status.code(), Some(0));
    for f in ["plan.csv", "plan_ssa_positions.csv", "plan_relay_positions.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

fn files(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let bytes = std::fs::read(&p).unwrap();
            (PathBuf::from(p.file_name().unwrap()), bytes)
        })
        .collect();
    v.sort();
    v
}

#[test]
fn json_format_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = uavplan(&["--format", "json", "--out", dir.path().to_str().unwrap(), "sweep-fig7", "--step", "0.01"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("figure7.json")).unwrap()).unwrap();
    assert_eq!(v["breakpoints"].as_array().unwrap().len(), 6);
}

#[test]
fn growth_output_has_header_and_ticks() {
    let o = uavplan(&["--config", &config("flat.json"), "--samples", "5000", "simulate-growth", "--d0", "1", "--rate", "2", "--horizon", "3", "--tick", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("t_h,radius_km,n_total,m_total,ring_km,time_h,feasible\n"));
}

#[test]
fn repeated_runs_are_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [a.path(), b.path()] {
        let o = uavplan(&[
            "--config", &config("flat.json"), "--samples", "5000", "--seed", "9", "--out", dir.to_str().unwrap(), "plan",
            "--radius", "12",
        ]);
        assert!(o.status.success());
    }
    assert_eq!(files(a.path()), files(b.path()));
}
