use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::profile::CurvatureProfile;
use super::turn::TurnGeometry;
use super::{distance, normalize_angle, Pose, Vec2};
use crate::error::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

/// Turn deflection (non-negative magnitude) and the side it turns to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSolution {
    pub beta: f64,
    pub side: Side,
}

/// One CC turn followed by a straight segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub start: Pose,
    pub goal: Vec2,
    /// Signed deflection, positive to the left.
    pub beta: f64,
    pub side: Side,
    pub l_cc: f64,
    pub l_f: f64,
    /// Curvature over the whole leg, the closing straight segment included.
    pub profile: CurvatureProfile,
}

impl Leg {
    pub fn euclidean(&self) -> f64 {
        distance(self.start.position, self.goal)
    }

    pub fn line_length(&self) -> f64 {
        self.l_f - self.l_cc
    }

    pub fn end_heading(&self) -> f64 {
        normalize_angle(self.start.heading + self.beta)
    }

    pub fn end_pose(&self) -> Pose {
        Pose::new(self.goal, self.end_heading())
    }
}

/// Finds the deflection after which the straight continuation of the turn
/// passes through `goal`.
///
/// Because every turn ends on the endpoint circle with the same crossing
/// angle, the closing segment is tangent to the inner circle of radius `R_M`;
/// `beta` is the heading of the tangent line from the goal.
pub fn solve_beta(
    start: &Pose,
    goal: Vec2,
    geo: &TurnGeometry,
) -> Result<BetaSolution, GeometryError> {
    let local = start.to_local(goal);
    if !(local[0].is_finite() && local[1].is_finite()) {
        return Err(GeometryError::NoSolution(format!(
            "non-finite goal {goal:?}"
        )));
    }
    let side = if local[1] < 0.0 {
        Side::Right
    } else {
        Side::Left
    };
    let y = local[1].abs();
    if y == 0.0 && local[0] > 0.0 {
        return Ok(BetaSolution {
            beta: 0.0,
            side: Side::Left,
        });
    }
    let cc = &geo.constants;
    let center = cc.center();
    let dx = local[0] - center[0];
    let dy = y - center[1];
    let d = dx.hypot(dy);
    if !(d > cc.r_t) {
        return Err(GeometryError::NoSolution(format!(
            "goal {goal:?} lies within the turn circle of radius {} around the start",
            cc.r_t
        )));
    }
    let mut beta = dy.atan2(dx) + (cc.r_m / d).asin();
    while beta < -PI / 2.0 {
        beta += 2.0 * PI;
    }
    while beta >= 1.5 * PI {
        beta -= 2.0 * PI;
    }
    Ok(BetaSolution {
        beta: beta.max(0.0),
        side,
    })
}

pub fn build_leg(start: &Pose, goal: Vec2, geo: &TurnGeometry) -> Result<Leg, GeometryError> {
    let BetaSolution { beta, side } = solve_beta(start, goal, geo)?;
    let local = start.to_local(goal);
    let mirrored = [local[0], local[1].abs()];

    if beta > 0.0 && beta < geo.theta_lim {
        let sigma = geo.sharpness_for(beta);
        if !(sigma <= geo.limits.sigma_max * (1.0 + 1e-12)) {
            return Err(GeometryError::NoSolution(format!(
                "turn of {beta} rad would need sharpness {sigma} above the limit"
            )));
        }
    }

    let mut profile = geo.profile(beta);
    let l_cc = geo.arclength(beta);
    let line = if beta == 0.0 {
        local[0]
    } else {
        let end = geo.constants.turn_end(beta);
        debug_assert!({
            let (s, c) = beta.sin_cos();
            let (vx, vy) = (mirrored[0] - end[0], mirrored[1] - end[1]);
            (c * vy - s * vx).abs() <= 1e-7 * (1.0 + vx.hypot(vy)) && c * vx + s * vy > 0.0
        });
        distance(end, mirrored)
    };
    profile.push(line, 0.0, 0.0);
    if side == Side::Right {
        profile = profile.mirrored();
    }
    Ok(Leg {
        start: *start,
        goal,
        beta: side.sign() * beta,
        side,
        l_cc,
        l_f: l_cc + line,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GliderLimits;

    fn geo() -> TurnGeometry {
        TurnGeometry::new(GliderLimits::new(0.045, 0.001, 0.349)).unwrap()
    }

    #[test]
    fn straight_ahead_leg() {
        let g = geo();
        let leg = build_leg(&Pose::new([0.0, 0.0], 0.0), [250.0, 0.0], &g).unwrap();
        assert_eq!(leg.beta, 0.0);
        assert_eq!(leg.l_cc, 0.0);
        assert_eq!(leg.l_f, 250.0);
        assert_eq!(leg.profile.segments.len(), 1);
    }

    #[test]
    fn goal_behind_needs_beta_max() {
        let g = geo();
        let l_e = 150.0;
        let sol = solve_beta(&Pose::new([0.0, 0.0], 0.0), [-l_e, 0.0], &g).unwrap();
        let cc = g.constants;
        let expected = PI + 2.0 * (cc.r_m / (l_e + cc.r_t * cc.gamma.sin())).atan();
        assert!(
            (sol.beta - expected).abs() < 1e-12,
            "{} vs {expected}",
            sol.beta
        );
        assert_eq!(sol.side, Side::Left);
    }

    #[test]
    fn right_side_mirrors_left() {
        let g = geo();
        let start = Pose::new([10.0, 20.0], 0.7);
        let left_goal = start.to_world([120.0, 90.0]);
        let right_goal = start.to_world([120.0, -90.0]);
        let left = build_leg(&start, left_goal, &g).unwrap();
        let right = build_leg(&start, right_goal, &g).unwrap();
        assert_eq!(left.side, Side::Left);
        assert_eq!(right.side, Side::Right);
        assert!((left.beta + right.beta).abs() < 1e-12);
        assert!((left.l_f - right.l_f).abs() < 1e-9);
        assert!(right.profile.curvature_at(right.l_cc / 2.0) < 0.0);
    }

    #[test]
    fn goal_inside_turn_circle_is_rejected() {
        let g = geo();
        let r = g.constants.r_t;
        let c = g.constants.center();
        let err = build_leg(&Pose::new([0.0, 0.0], 0.0), [c[0], c[1] + 0.5 * r], &g).unwrap_err();
        assert!(matches!(err, GeometryError::NoSolution(_)));
    }

    #[test]
    fn heading_change_matches_beta() {
        let g = geo();
        let start = Pose::new([0.0, 0.0], -1.2);
        for goal in [
            [300.0, 40.0],
            [-200.0, 150.0],
            [80.0, -260.0],
            [-90.0, -95.0],
        ] {
            let leg = build_leg(&start, goal, &g).unwrap();
            assert!((leg.profile.heading_change() - leg.beta).abs() < 1e-9);
            assert!(leg.profile.start_curvature() == 0.0);
            assert!(leg.profile.end_curvature().abs() < 1e-15);
            assert!(leg.l_f >= leg.euclidean());
        }
    }
}
