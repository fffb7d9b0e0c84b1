//! Scenario data model, assumption checks and the scenario file format.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, theta_lim, CcConstants, GliderLimits, Pose, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaypointKind {
    InterestPoint,
    Thermal,
    Final,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Waypoint {
    pub id: String,
    pub kind: WaypointKind,
    pub position: Vec2,
    pub height_gain: f64,
}

impl Waypoint {
    pub fn interest_point(id: impl Into<String>, position: Vec2) -> Self {
        Self {
            id: id.into(),
            kind: WaypointKind::InterestPoint,
            position,
            height_gain: 0.0,
        }
    }

    pub fn thermal(id: impl Into<String>, position: Vec2, height_gain: f64) -> Self {
        Self {
            id: id.into(),
            kind: WaypointKind::Thermal,
            position,
            height_gain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GliderSpec {
    pub id: String,
    pub start: Pose,
    pub start_height: f64,
    pub final_position: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub limits: GliderLimits,
    pub gliders: Vec<GliderSpec>,
    pub interest_points: Vec<Waypoint>,
    pub thermals: Vec<Waypoint>,
}

/// Closest pair among all start, final, interest-point and thermal locations.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosestPair {
    pub distance: f64,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoGliders,
    DuplicateId(String),
    InvalidLimits(String),
    /// `κ_max²/σ_max` is not below π.
    TurnLimit {
        theta_lim: f64,
    },
    /// Two locations are too close for a CC leg between them.
    Spacing {
        l_min: f64,
        required: f64,
        a: String,
        b: String,
    },
    StartHeight {
        glider: String,
        value: f64,
    },
    HeightGain {
        id: String,
        value: f64,
    },
    NonFinite {
        id: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoGliders => write!(f, "scenario has no gliders"),
            Violation::DuplicateId(id) => write!(f, "duplicate id `{id}`"),
            Violation::InvalidLimits(msg) => write!(f, "invalid limits: {msg}"),
            Violation::TurnLimit { theta_lim } => write!(
                f,
                "theta_lim = kappa_max^2/sigma_max = {theta_lim} is not below pi"
            ),
            Violation::Spacing { l_min, required, a, b } => write!(
                f,
                "l_min = {l_min} between `{a}` and `{b}` must exceed 2*R_T = {required}"
            ),
            Violation::StartHeight { glider, value } => {
                write!(f, "glider `{glider}` start height {value} must be positive")
            }
            Violation::HeightGain { id, value } => {
                write!(f, "waypoint `{id}` has height gain {value} not allowed for its kind")
            }
            Violation::NonFinite { id } => write!(f, "`{id}` has a non-finite coordinate"),
        }
    }
}

impl Scenario {
    pub fn final_id(glider: &GliderSpec) -> String {
        format!("f:{}", glider.id)
    }

    pub fn sink_rate(&self) -> f64 {
        self.limits.sink_rate()
    }

    pub fn total_thermal_gain(&self) -> f64 {
        self.thermals.iter().map(|t| t.height_gain).sum()
    }

    /// All named locations, in a fixed order: starts, finals, interest points, thermals.
    pub fn locations(&self) -> Vec<(String, Vec2)> {
        let mut out = Vec::new();
        for g in &self.gliders {
            out.push((g.id.clone(), g.start.position));
        }
        for g in &self.gliders {
            out.push((Self::final_id(g), g.final_position));
        }
        for w in self.interest_points.iter().chain(&self.thermals) {
            out.push((w.id.clone(), w.position));
        }
        out
    }

    /// Smallest pairwise distance; ties resolve to the lexicographically
    /// smallest id pair so the result does not depend on list order.
    pub fn closest_pair(&self) -> Option<ClosestPair> {
        let locs = self.locations();
        let mut best: Option<ClosestPair> = None;
        for i in 0..locs.len() {
            for j in (i + 1)..locs.len() {
                let d = distance(locs[i].1, locs[j].1);
                let (a, b) = if locs[i].0 <= locs[j].0 {
                    (&locs[i].0, &locs[j].0)
                } else {
                    (&locs[j].0, &locs[i].0)
                };
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        d < cur.distance || (d == cur.distance && (a, b) < (&cur.a, &cur.b))
                    }
                };
                if better {
                    best = Some(ClosestPair {
                        distance: d,
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
        best
    }

    pub fn l_min(&self) -> f64 {
        self.closest_pair().map_or(f64::INFINITY, |p| p.distance)
    }

    /// Every violated invariant, sorted; empty when the scenario is plannable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.gliders.is_empty() {
            out.push(Violation::NoGliders);
        }

        let mut seen = HashSet::new();
        let ids = self
            .gliders
            .iter()
            .flat_map(|g| [g.id.clone(), Self::final_id(g)])
            .chain(
                self.interest_points
                    .iter()
                    .chain(&self.thermals)
                    .map(|w| w.id.clone()),
            );
        for id in ids {
            if !seen.insert(id.clone()) {
                out.push(Violation::DuplicateId(id));
            }
        }

        for g in &self.gliders {
            if !(g.start_height > 0.0) || !g.start_height.is_finite() {
                out.push(Violation::StartHeight {
                    glider: g.id.clone(),
                    value: g.start_height,
                });
            }
            let coords = [g.start.position, g.final_position];
            if coords.iter().flatten().any(|v| !v.is_finite()) || !g.start.heading.is_finite() {
                out.push(Violation::NonFinite { id: g.id.clone() });
            }
        }
        for w in self.interest_points.iter().chain(&self.thermals) {
            if w.position.iter().any(|v| !v.is_finite()) {
                out.push(Violation::NonFinite { id: w.id.clone() });
            }
            let ok = match w.kind {
                WaypointKind::Thermal => w.height_gain > 0.0 && w.height_gain.is_finite(),
                WaypointKind::InterestPoint | WaypointKind::Final => w.height_gain == 0.0,
            };
            if !ok {
                out.push(Violation::HeightGain {
                    id: w.id.clone(),
                    value: w.height_gain,
                });
            }
        }

        match theta_lim(&self.limits) {
            Ok(_) => {
                let r_t = CcConstants::from_limits(&self.limits).r_t;
                if let Some(pair) = self.closest_pair() {
                    if !(pair.distance > 2.0 * r_t) {
                        out.push(Violation::Spacing {
                            l_min: pair.distance,
                            required: 2.0 * r_t,
                            a: pair.a,
                            b: pair.b,
                        });
                    }
                }
            }
            Err(_) => {
                let l = &self.limits;
                if l.kappa_max > 0.0
                    && l.sigma_max > 0.0
                    && l.gamma_d_min > 0.0
                    && l.gamma_d_min < std::f64::consts::FRAC_PI_2
                {
                    out.push(Violation::TurnLimit {
                        theta_lim: l.kappa_max * l.kappa_max / l.sigma_max,
                    });
                } else {
                    out.push(Violation::InvalidLimits(format!("{l:?}")));
                }
            }
        }

        out.sort_by_key(|v| v.to_string());
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }

    pub fn from_json_str(text: &str, path: &Path) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(file.scenario.into_scenario())
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file = ScenarioFile {
            scenario: ScenarioDoc::from_scenario(self),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json_string()?)
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let scenario = load_scenario_unchecked(path)?;
    scenario.ensure_valid()?;
    Ok(scenario)
}

pub fn load_scenario_unchecked(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::from_json_str(&text, path)
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenario: ScenarioDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    limits: GliderLimits,
    gliders: Vec<GliderSpec>,
    #[serde(default)]
    interest_points: Vec<PointRecord>,
    #[serde(default)]
    thermals: Vec<PointRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRecord {
    id: String,
    position: Vec2,
    #[serde(default)]
    height_gain: f64,
}

impl ScenarioDoc {
    fn into_scenario(self) -> Scenario {
        let convert = |kind: WaypointKind| {
            move |p: PointRecord| Waypoint {
                id: p.id,
                kind,
                position: p.position,
                height_gain: p.height_gain,
            }
        };
        Scenario {
            limits: self.limits,
            gliders: self
                .gliders
                .into_iter()
                .map(|g| GliderSpec {
                    start: Pose::new(g.start.position, g.start.heading),
                    ..g
                })
                .collect(),
            interest_points: self
                .interest_points
                .into_iter()
                .map(convert(WaypointKind::InterestPoint))
                .collect(),
            thermals: self
                .thermals
                .into_iter()
                .map(convert(WaypointKind::Thermal))
                .collect(),
        }
    }

    fn from_scenario(s: &Scenario) -> Self {
        let record = |w: &Waypoint| PointRecord {
            id: w.id.clone(),
            position: w.position,
            height_gain: w.height_gain,
        };
        Self {
            limits: s.limits,
            gliders: s.gliders.clone(),
            interest_points: s.interest_points.iter().map(record).collect(),
            thermals: s.thermals.iter().map(record).collect(),
        }
    }
}

/// The two-glider, four-interest-point, four-thermal demonstration scenario.
pub fn golden_scenario() -> Scenario {
    let glider = |id: &str, p: Vec2, heading: f64, h: f64, f: Vec2| GliderSpec {
        id: id.to_string(),
        start: Pose::new(p, heading),
        start_height: h,
        final_position: f,
    };
    Scenario {
        limits: GliderLimits::new(0.045, 0.001, 0.349),
        gliders: vec![
            glider("g1", [445.0, 709.0], -1.41, 600.0, [765.0, 186.0]),
            glider("g2", [646.0, 754.0], 1.13, 500.0, [795.0, 489.0]),
        ],
        interest_points: vec![
            Waypoint::interest_point("ip1", [97.0, 950.0]),
            Waypoint::interest_point("ip2", [823.0, 34.0]),
            Waypoint::interest_point("ip3", [694.0, 438.0]),
            Waypoint::interest_point("ip4", [317.0, 381.0]),
        ],
        thermals: vec![
            Waypoint::thermal("t1", [743.0, 706.0], 200.0),
            Waypoint::thermal("t2", [392.0, 32.0], 200.0),
            Waypoint::thermal("t3", [655.0, 277.0], 200.0),
            Waypoint::thermal("t4", [171.0, 46.0], 200.0),
        ],
    }
}
