use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use glidepath::scenario::golden_scenario;
use glidepath::PlanFile;

fn glidepath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glidepath"))
        .args(args)
        .output()
        .unwrap()
}

fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden.json")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn shipped_golden_file_is_current() {
    let on_disk = std::fs::read_to_string(golden_path()).unwrap();
    assert_eq!(on_disk, golden_scenario().to_json_string().unwrap());
}

#[test]
fn validate_reports_closest_pair() {
    let out = glidepath(&["validate", "--scenario", s(&golden_path())]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("108.2"), "{text}");
}

#[test]
fn plan_then_audit() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    let stats = dir.path().join("stats.json");
    let svg = dir.path().join("plan.svg");
    let out = glidepath(&[
        "plan",
        "--scenario",
        s(&golden_path()),
        "--out",
        s(&plan),
        "--json-stats",
        s(&stats),
        "--svg",
        s(&svg),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let parsed = PlanFile::load(&plan).unwrap();
    assert_eq!(parsed.algorithm, "bnb");
    assert_eq!(parsed.k_u, 0);
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert!(stats["lower_solves"].as_u64().unwrap() > 0);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<?xml"));

    let report = dir.path().join("audit.json");
    let out = glidepath(&[
        "audit",
        "--scenario",
        s(&golden_path()),
        "--plan",
        s(&plan),
        "--out",
        s(&report),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn audit_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    assert_eq!(
        glidepath(&["plan", "--scenario", s(&golden_path()), "--out", s(&plan)])
            .status
            .code(),
        Some(0)
    );
    let mut scenario = golden_scenario();
    scenario.gliders[1].start_height = 1.0;
    let low = dir.path().join("low.json");
    scenario.save(&low).unwrap();
    let out = glidepath(&["audit", "--scenario", s(&low), "--plan", s(&plan)]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = String::from_utf8_lossy(&out.stdout);
    let row = table
        .lines()
        .find(|l| l.starts_with("height_literal"))
        .unwrap();
    assert!(row.contains("FAIL"), "{row}");
}

#[test]
fn unreachable_final_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut scenario = golden_scenario();
    scenario.gliders[0].start_height = 1.0;
    for t in &mut scenario.thermals {
        t.height_gain = 1.0;
    }
    let path = dir.path().join("low.json");
    scenario.save(&path).unwrap();
    let out = glidepath(&["plan", "--scenario", s(&path)]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(
        glidepath(&["validate", "--scenario", s(&garbage)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        glidepath(&["plan", "--scenario", s(&dir.path().join("missing.json"))])
            .status
            .code(),
        Some(1)
    );

    let mut crowded = golden_scenario();
    crowded.thermals[0].position = crowded.interest_points[0].position;
    let path = dir.path().join("crowded.json");
    crowded.save(&path).unwrap();
    assert_eq!(
        glidepath(&["validate", "--scenario", s(&path)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_without_interest_points() {
    let out = glidepath(&[
        "bench",
        "--count",
        "3",
        "--interest-points",
        "0",
        "--no-timing",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    for row in &rows[1..] {
        let cols: Vec<_> = row.split(',').collect();
        assert_eq!(cols[2], "0");
        assert_eq!(cols[4], "0");
        assert_eq!(cols[6], cols[7]);
        assert_eq!(cols[10], "true");
    }
}

#[test]
fn bench_is_reproducible_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = glidepath(&[
            "bench",
            "--seed",
            "7",
            "--count",
            "5",
            "--interest-points",
            "3",
            "--no-timing",
            "--threads",
            threads,
            "--out",
            s(path),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(first).unwrap().starts_with(
        "seed,n_g,n_ip,n_t,k_u,s_u,lower_solves_bnb,lower_solves_brute,time_bnb,time_brute,equivalent\n"
    ));
}

#[test]
fn render_scenario_only() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("map.svg");
    let out = glidepath(&["render", "--scenario", s(&golden_path()), "--svg", s(&svg)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(!std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
}
