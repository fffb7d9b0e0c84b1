use std::path::Path;

use glidepath::geometry::{distance, CurvatureProfile, Pose};
use glidepath::pathcheck::{audit_plan, render_svg, Tolerances};
use glidepath::scenario::golden_scenario;
use glidepath::{solve_bnb, PlanFile, Problem};

fn golden_plan(spacing: Option<f64>) -> PlanFile {
    let problem = Problem::new(golden_scenario()).unwrap();
    let result = solve_bnb(&problem).unwrap();
    PlanFile::from_result(&problem, &result, spacing)
}

#[test]
fn own_golden_plan_passes() {
    let plan = golden_plan(None);
    let report = audit_plan(&golden_scenario(), &plan, &Tolerances::default()).unwrap();
    assert!(report.passed, "{:?}", report.failures());
    for g in &report.gliders {
        let stated = plan.glider(&g.glider).unwrap().s_l;
        assert!((g.s_l_recomputed - stated).abs() < 1e-6 * stated);
        assert!(g.first_negative_literal.is_none());
        assert!(g.legs.iter().all(|l| l.ratio <= report.r_max));
    }
}

#[test]
fn low_start_height_is_reported_with_location() {
    let plan = golden_plan(None);
    let mut scenario = golden_scenario();
    scenario.gliders[0].start_height = 1.0;
    let report = audit_plan(&scenario, &plan, &Tolerances::default()).unwrap();
    assert!(!report.passed);
    let check = report.check("height_literal").unwrap();
    assert!(!check.passed && check.gating);
    let g = &report.gliders[0];
    let at = g
        .first_negative_literal
        .expect("location of first negative height");
    assert!(at > 0.0 && at < g.s_l_recomputed);
    assert!(g.first_negative_strict.unwrap() <= 1.0 / 0.349f64.tan() + 1e-9);
    assert!(report.gliders[1].first_negative_literal.is_none());
}

#[test]
fn straight_chord_breaks_heading_continuity() {
    let mut plan = golden_plan(None);
    let leg = &mut plan.gliders[0].legs[1];
    let from = leg.start.position;
    let chord = distance(from, leg.goal);
    leg.start = Pose::new(from, (leg.goal[1] - from[1]).atan2(leg.goal[0] - from[0]));
    leg.profile = CurvatureProfile::new();
    leg.profile.push(chord, 0.0, 0.0);
    leg.l_cc = 0.0;
    leg.l_f = chord;

    let report = audit_plan(&golden_scenario(), &plan, &Tolerances::default()).unwrap();
    assert!(!report.passed);
    assert!(report.check("endpoint").unwrap().passed);
    assert!(!report.check("heading_continuity").unwrap().passed);
    let bad = &report.gliders[0].legs[1];
    assert!(bad.heading_continuity_error > 1e-3);
}

#[test]
fn tampered_leg_target_is_a_structure_error() {
    let mut plan = golden_plan(None);
    plan.gliders[1].legs[0].goal[0] += 5.0;
    let err = audit_plan(&golden_scenario(), &plan, &Tolerances::default()).unwrap_err();
    assert!(matches!(err, glidepath::Error::Structure(_)), "{err}");
}

#[test]
fn plan_file_round_trips() {
    let plan = golden_plan(Some(5.0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plan.json");
    plan.save(&path).unwrap();
    let back = PlanFile::load(&path).unwrap();
    assert_eq!(
        back.to_json_string().unwrap(),
        plan.to_json_string().unwrap()
    );
    let report = audit_plan(&golden_scenario(), &back, &Tolerances::default()).unwrap();
    assert!(report.passed);
}

#[test]
fn golden_svg_matches_snapshot() {
    let svg = render_svg(&golden_scenario(), Some(&golden_plan(Some(2.0))));
    let snapshot = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots/golden_plan.svg");
    if std::env::var_os("UPDATE_SNAPSHOTS").is_some() {
        std::fs::write(&snapshot, &svg).unwrap();
    }
    let expected = std::fs::read_to_string(&snapshot).unwrap();
    assert!(svg == expected, "SVG differs from {}", snapshot.display());
}
