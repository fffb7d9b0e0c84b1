//! Independent audit of planned paths.
//!
//! Nothing here trusts the planner's arithmetic: positions are re-integrated
//! from the curvature profiles, arclengths re-summed from the segments and
//! heights recomputed from the scenario.

mod svg;

pub use svg::{render_svg, write_svg};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{distance, normalize_angle, CurvatureProfile, Leg, TurnGeometry, Vec2};
use crate::plan::{GliderPlan, PlanFile};
use crate::scenario::{Scenario, WaypointKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub s: f64,
    pub position: Vec2,
    pub heading: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegTrace {
    /// Samples at the integration step, starting at arclength 0.
    pub samples: Vec<TraceSample>,
    /// Endpoint from the half-step pass.
    pub endpoint: Vec2,
    /// Richardson estimate of the endpoint's integration error.
    pub error_estimate: f64,
    pub end_heading: f64,
    pub length: f64,
}

fn heading_at(theta0: f64, kappa0: f64, sigma: f64, u: f64) -> f64 {
    theta0 + u * (kappa0 + 0.5 * sigma * u)
}

/// Composite Simpson over every profile segment with at most `step` per panel.
fn simpson(
    start: Vec2,
    heading: f64,
    profile: &CurvatureProfile,
    step: f64,
    mut record: Option<&mut Vec<TraceSample>>,
) -> (Vec2, f64) {
    let mut p = start;
    let mut theta = heading;
    let mut s = 0.0;
    if let Some(out) = record.as_deref_mut() {
        out.push(TraceSample {
            s,
            position: p,
            heading: normalize_angle(theta),
            curvature: profile.start_curvature(),
        });
    }
    for seg in &profile.segments {
        let n = (seg.length / step).ceil().max(1.0) as usize;
        let h = seg.length / n as f64;
        let f = |u: f64| {
            let t = heading_at(theta, seg.kappa_start, seg.sharpness, u);
            [t.cos(), t.sin()]
        };
        let mut fa = f(0.0);
        for i in 0..n {
            let a = i as f64 * h;
            let fm = f(a + 0.5 * h);
            let fb = f(a + h);
            p[0] += h / 6.0 * (fa[0] + 4.0 * fm[0] + fb[0]);
            p[1] += h / 6.0 * (fa[1] + 4.0 * fm[1] + fb[1]);
            fa = fb;
            if let Some(out) = record.as_deref_mut() {
                let u = a + h;
                out.push(TraceSample {
                    s: s + u,
                    position: p,
                    heading: normalize_angle(heading_at(theta, seg.kappa_start, seg.sharpness, u)),
                    curvature: seg.kappa_start + seg.sharpness * u,
                });
            }
        }
        theta += seg.heading_change();
        s += seg.length;
    }
    (p, theta)
}

/// Forward-integrates a leg from its start pose.
pub fn integrate_leg(leg: &Leg, step: f64) -> LegTrace {
    assert!(step > 0.0, "integration step must be positive");
    let mut samples = Vec::new();
    let (coarse, _) = simpson(
        leg.start.position,
        leg.start.heading,
        &leg.profile,
        step,
        Some(&mut samples),
    );
    let (fine, theta) = simpson(
        leg.start.position,
        leg.start.heading,
        &leg.profile,
        step / 2.0,
        None,
    );
    LegTrace {
        samples,
        endpoint: fine,
        error_estimate: distance(fine, coarse) / 15.0,
        end_heading: normalize_angle(theta),
        length: leg.profile.total_length(),
    }
}

/// Concatenated sample positions of consecutive legs.
pub fn sample_polyline(legs: &[Leg], spacing: f64) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::new();
    for leg in legs {
        let trace = integrate_leg(leg, spacing);
        let skip = usize::from(!out.is_empty());
        out.extend(trace.samples.iter().skip(skip).map(|s| s.position));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Endpoint miss relative to the leg's endpoint distance.
    pub endpoint: f64,
    /// Relative slack on the curvature and sharpness limits.
    pub limits: f64,
    /// Absolute slack on heading and curvature jumps at joints.
    pub continuity: f64,
    /// Stated versus recomputed arclength, relative.
    pub arclength: f64,
    /// Integration step in meters.
    pub step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            endpoint: 1e-6,
            limits: 1e-9,
            continuity: 1e-9,
            arclength: 1e-6,
            step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegAudit {
    pub from: String,
    pub to: String,
    pub l_e: f64,
    pub l_f_stated: f64,
    pub l_f_recomputed: f64,
    pub start_error: f64,
    pub endpoint_error: f64,
    pub error_estimate: f64,
    pub max_abs_curvature: f64,
    pub max_abs_sharpness: f64,
    pub heading_continuity_error: f64,
    pub curvature_continuity_error: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightPoint {
    pub s: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GliderAudit {
    pub glider: String,
    pub legs: Vec<LegAudit>,
    /// Physical height along the path; two points per leg, jumps at thermals.
    pub height_profile: Vec<HeightPoint>,
    /// Smallest leg-end height when every thermal in the order is credited
    /// from the start.
    pub min_height_literal: f64,
    /// Smallest height when a thermal is credited only on arrival.
    pub min_height_strict: f64,
    pub first_negative_literal: Option<f64>,
    pub first_negative_strict: Option<f64>,
    pub s_l_recomputed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value, in the units the limit uses.
    pub worst: f64,
    pub limit: f64,
    /// Whether the check decides the overall verdict.
    pub gating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub r_max: f64,
    pub tolerances: Tolerances,
    pub gliders: Vec<GliderAudit>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl AuditReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.gating && !c.passed)
            .collect()
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

struct Waypoints<'a> {
    scenario: &'a Scenario,
}

impl Waypoints<'_> {
    fn lookup(&self, glider: usize, id: &str) -> Option<(Vec2, f64)> {
        let g = &self.scenario.gliders[glider];
        if id == Scenario::final_id(g) {
            return Some((g.final_position, 0.0));
        }
        self.scenario
            .interest_points
            .iter()
            .chain(&self.scenario.thermals)
            .find(|w| w.id == id)
            .map(|w| match w.kind {
                WaypointKind::Thermal => (w.position, w.height_gain),
                _ => (w.position, 0.0),
            })
    }
}

fn same_point(a: Vec2, b: Vec2) -> bool {
    distance(a, b) <= 1e-9 * (1.0 + a[0].abs().max(a[1].abs()))
}

fn audit_glider(
    scenario: &Scenario,
    glider: usize,
    plan: &GliderPlan,
    tol: &Tolerances,
) -> Result<GliderAudit> {
    let spec = &scenario.gliders[glider];
    let lookup = Waypoints { scenario };
    if plan.order.len() != plan.legs.len() {
        return Err(Error::Structure(format!(
            "glider {}: {} waypoints but {} legs",
            plan.glider,
            plan.order.len(),
            plan.legs.len()
        )));
    }
    if plan.order.last() != Some(&Scenario::final_id(spec)) {
        return Err(Error::Structure(format!(
            "glider {}: order does not end at its final position",
            plan.glider
        )));
    }
    let mut targets = Vec::with_capacity(plan.order.len());
    for (i, id) in plan.order.iter().enumerate() {
        let (pos, gain) = lookup.lookup(glider, id).ok_or_else(|| {
            Error::Structure(format!("glider {}: unknown waypoint `{id}`", plan.glider))
        })?;
        if plan.order[..i].contains(id) {
            return Err(Error::Structure(format!(
                "glider {}: `{id}` visited twice",
                plan.glider
            )));
        }
        if !same_point(plan.legs[i].goal, pos) {
            return Err(Error::Structure(format!(
                "glider {}: leg {} targets {:?}, but `{id}` is at {:?}",
                plan.glider, i, plan.legs[i].goal, pos
            )));
        }
        targets.push((id.as_str(), pos, gain));
    }

    let sink = scenario.sink_rate();
    let total_gain: f64 = targets.iter().map(|t| t.2).sum();
    let mut legs = Vec::with_capacity(plan.legs.len());
    let mut prev_name = spec.id.clone();
    let mut prev_pos = spec.start.position;
    let mut prev_heading = spec.start.heading;
    let mut prev_curvature = 0.0;
    let mut s = 0.0;
    let mut h = spec.start_height;
    let mut height_profile = Vec::new();
    let mut min_literal = f64::INFINITY;
    let mut min_strict = spec.start_height;
    let mut first_literal = None;
    let mut first_strict = None;

    for (leg, (id, goal, gain)) in plan.legs.iter().zip(&targets) {
        let trace = integrate_leg(leg, tol.step);
        let l_f = trace.length;
        let l_e = distance(prev_pos, *goal);
        let heading_jump = normalize_angle(leg.start.heading - prev_heading).abs();
        let curvature_jump = (leg.profile.start_curvature() - prev_curvature)
            .abs()
            .max(leg.profile.max_internal_jump());
        legs.push(LegAudit {
            from: prev_name.clone(),
            to: id.to_string(),
            l_e,
            l_f_stated: leg.l_f,
            l_f_recomputed: l_f,
            start_error: distance(leg.start.position, prev_pos),
            endpoint_error: distance(trace.endpoint, *goal),
            error_estimate: trace.error_estimate,
            max_abs_curvature: leg.profile.max_abs_curvature(),
            max_abs_sharpness: leg.profile.max_abs_sharpness(),
            heading_continuity_error: heading_jump,
            curvature_continuity_error: curvature_jump,
            ratio: l_f / l_e,
        });

        height_profile.push(HeightPoint { s, h });
        let end = h - sink * l_f;
        if end < 0.0 && first_strict.is_none() {
            first_strict = Some(s + h / sink);
        }
        s += l_f;
        height_profile.push(HeightPoint { s, h: end });
        min_strict = min_strict.min(end);
        let literal = spec.start_height + total_gain - sink * s;
        if literal < 0.0 && first_literal.is_none() {
            first_literal = Some((spec.start_height + total_gain) / sink);
        }
        min_literal = min_literal.min(literal);
        h = end + gain;

        prev_name = id.to_string();
        prev_pos = *goal;
        prev_heading = trace.end_heading;
        prev_curvature = leg.profile.end_curvature();
    }

    Ok(GliderAudit {
        glider: plan.glider.clone(),
        legs,
        height_profile,
        min_height_literal: min_literal,
        min_height_strict: min_strict,
        first_negative_literal: first_literal,
        first_negative_strict: first_strict,
        s_l_recomputed: s,
    })
}

fn max_over<'a>(gliders: &'a [GliderAudit], f: impl Fn(&'a LegAudit) -> f64) -> f64 {
    gliders
        .iter()
        .flat_map(|g| g.legs.iter())
        .map(f)
        .fold(0.0, f64::max)
}

/// Audits every glider of `plan` against `scenario`.
pub fn audit_plan(scenario: &Scenario, plan: &PlanFile, tol: &Tolerances) -> Result<AuditReport> {
    let geometry = TurnGeometry::new(scenario.limits)?;
    let r_max = geometry.ratio_bound(scenario.l_min())?;
    if plan.gliders.len() != scenario.gliders.len() {
        return Err(Error::Structure(format!(
            "plan has {} gliders, scenario has {}",
            plan.gliders.len(),
            scenario.gliders.len()
        )));
    }
    let gliders = plan
        .gliders
        .iter()
        .map(|gp| {
            let idx = scenario
                .gliders
                .iter()
                .position(|g| g.id == gp.glider)
                .ok_or_else(|| Error::Structure(format!("unknown glider `{}`", gp.glider)))?;
            audit_glider(scenario, idx, gp, tol)
        })
        .collect::<Result<Vec<_>>>()?;

    let limits = scenario.limits;
    let endpoint_worst = max_over(&gliders, |l| l.endpoint_error.max(l.start_error) / l.l_e);
    let length_worst = max_over(&gliders, |l| {
        (l.l_f_recomputed - l.l_f_stated).abs() / l.l_f_stated
    });
    let s_l_worst = gliders
        .iter()
        .zip(&plan.gliders)
        .map(|(a, p)| (a.s_l_recomputed - p.s_l).abs() / p.s_l.max(1.0))
        .fold(0.0, f64::max);
    let literal = gliders
        .iter()
        .map(|g| g.min_height_literal)
        .fold(f64::INFINITY, f64::min);
    let strict = gliders
        .iter()
        .map(|g| g.min_height_strict)
        .fold(f64::INFINITY, f64::min);

    let check = |name, worst: f64, limit: f64, gating| Check {
        name,
        passed: worst <= limit,
        worst,
        limit,
        gating,
    };
    let floor = |name, worst: f64, gating| Check {
        name,
        passed: worst >= 0.0,
        worst,
        limit: 0.0,
        gating,
    };
    let checks = vec![
        check("endpoint", endpoint_worst, tol.endpoint, true),
        check(
            "curvature",
            max_over(&gliders, |l| l.max_abs_curvature),
            limits.kappa_max * (1.0 + tol.limits),
            true,
        ),
        check(
            "sharpness",
            max_over(&gliders, |l| l.max_abs_sharpness),
            limits.sigma_max * (1.0 + tol.limits),
            true,
        ),
        check(
            "heading_continuity",
            max_over(&gliders, |l| l.heading_continuity_error),
            tol.continuity,
            true,
        ),
        check(
            "curvature_continuity",
            max_over(&gliders, |l| l.curvature_continuity_error),
            tol.continuity,
            true,
        ),
        check(
            "arclength",
            length_worst.max(s_l_worst),
            tol.arclength,
            true,
        ),
        check("ratio_bound", max_over(&gliders, |l| l.ratio), r_max, true),
        floor("height_literal", literal, true),
        floor("height_strict", strict, false),
    ];
    let passed = checks.iter().all(|c| c.passed || !c.gating);
    Ok(AuditReport {
        r_max,
        tolerances: *tol,
        gliders,
        checks,
        passed,
    })
}
