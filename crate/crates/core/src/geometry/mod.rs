//! Continuous-curvature leg construction.
//!
//! A leg joins a start pose to a goal position with a continuous-curvature
//! (CC) turn followed by a straight segment. Curvature and sharpness stay
//! within the glider limits by construction and vanish at both ends of the
//! leg, so legs can be chained without curvature jumps.

mod fresnel;
mod leg;
mod profile;
mod turn;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use fresnel::fresnel;
pub use leg::{build_leg, solve_beta, BetaSolution, Leg, Side};
pub use profile::{CurvatureProfile, ProfileSegment};
pub use turn::{
    cc_turn_arclength, curvature_profile, ratio_bound, theta_lim, CcConstants, TurnGeometry,
};

use crate::error::GeometryError;

pub type Vec2 = [f64; 2];

/// Reduces an angle to `(-π, π]`.
pub fn normalize_angle(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

pub fn distance(a: Vec2, b: Vec2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Planar position plus heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec2,
    pub heading: f64,
}

impl Pose {
    pub fn new(position: Vec2, heading: f64) -> Self {
        Self {
            position,
            heading: normalize_angle(heading),
        }
    }

    /// Expresses a world point in this pose's frame (x forward, y to the left).
    pub fn to_local(&self, p: Vec2) -> Vec2 {
        let (s, c) = self.heading.sin_cos();
        let dx = p[0] - self.position[0];
        let dy = p[1] - self.position[1];
        [c * dx + s * dy, -s * dx + c * dy]
    }

    pub fn to_world(&self, p: Vec2) -> Vec2 {
        let (s, c) = self.heading.sin_cos();
        [
            self.position[0] + c * p[0] - s * p[1],
            self.position[1] + s * p[0] + c * p[1],
        ]
    }
}

/// Curvature, sharpness and glide-angle limits shared by all gliders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GliderLimits {
    /// Maximum curvature, 1/m.
    pub kappa_max: f64,
    /// Maximum sharpness (curvature rate), 1/m².
    pub sigma_max: f64,
    /// Best-glide descent angle, rad.
    pub gamma_d_min: f64,
}

impl GliderLimits {
    pub fn new(kappa_max: f64, sigma_max: f64, gamma_d_min: f64) -> Self {
        Self {
            kappa_max,
            sigma_max,
            gamma_d_min,
        }
    }

    /// Height lost per metre of arclength.
    pub fn sink_rate(&self) -> f64 {
        self.gamma_d_min.tan()
    }

    pub(crate) fn check_positive(&self) -> Result<(), GeometryError> {
        let ok = self.kappa_max.is_finite()
            && self.kappa_max > 0.0
            && self.sigma_max.is_finite()
            && self.sigma_max > 0.0
            && self.gamma_d_min > 0.0
            && self.gamma_d_min < PI / 2.0;
        if ok {
            Ok(())
        } else {
            Err(GeometryError::AssumptionViolated(format!(
                "limits must be positive with gamma_d_min in (0, pi/2): {self:?}"
            )))
        }
    }
}
