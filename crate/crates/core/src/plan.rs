//! Plan files: the search result in a form the auditor and renderer can read
//! back without re-running any search.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Leg, Vec2};
use crate::lower::{LegHeights, VisitationOrder};
use crate::problem::Problem;
use crate::scenario::write_text;
use crate::upper::{Algorithm, PlanResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GliderPlan {
    pub glider: String,
    pub allocation: Vec<String>,
    /// Waypoint ids in visiting order, ending with the final position.
    pub order: Vec<String>,
    pub s_l: f64,
    pub k_l: usize,
    pub heights: Vec<LegHeights>,
    pub legs: Vec<Leg>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polyline: Vec<Vec2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub algorithm: String,
    pub k_u: usize,
    pub s_u: f64,
    pub v_u: f64,
    pub v_weak: f64,
    pub gliders: Vec<GliderPlan>,
}

/// Spacing of the stored polyline, in meters of arclength.
pub const DEFAULT_SAMPLE_SPACING: f64 = 1.0;

impl GliderPlan {
    pub fn from_order(
        problem: &Problem,
        order: &VisitationOrder,
        allocation: u64,
        spacing: Option<f64>,
    ) -> Self {
        let polyline = match spacing {
            Some(step) => crate::pathcheck::sample_polyline(&order.legs, step),
            None => Vec::new(),
        };
        Self {
            glider: order.glider_id.clone(),
            allocation: problem.allocation_ids(allocation),
            order: order.waypoints.clone(),
            s_l: order.s_l,
            k_l: order.k_l,
            heights: order.heights.clone(),
            legs: order.legs.clone(),
            polyline,
        }
    }
}

impl PlanFile {
    /// `spacing` of `None` leaves the polylines out.
    pub fn from_result(problem: &Problem, result: &PlanResult, spacing: Option<f64>) -> Self {
        let best = &result.best;
        let gliders = best
            .lower
            .iter()
            .zip(&best.allocations)
            .map(|(sol, &mask)| GliderPlan::from_order(problem, &sol.best, mask, spacing))
            .collect();
        Self {
            algorithm: match result.algorithm {
                Algorithm::Bnb => "bnb",
                Algorithm::Brute => "brute",
            }
            .to_string(),
            k_u: best.k_u,
            s_u: best.s_u,
            v_u: best.v_u,
            v_weak: best.v_weak,
            gliders,
        }
    }

    pub fn glider(&self, id: &str) -> Option<&GliderPlan> {
        self.gliders.iter().find(|g| g.glider == id)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json_str(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json_string()?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text, path)
    }
}
