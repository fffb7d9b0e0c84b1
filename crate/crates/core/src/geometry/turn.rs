use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fresnel::fresnel;
use super::profile::CurvatureProfile;
use super::{GliderLimits, Vec2};
use crate::error::GeometryError;

/// Constants of the CC-turn family for a given pair of limits.
///
/// In the turn's local frame (start at the origin, heading along +x, turning
/// left) every CC turn ends on the circle of radius `r_t` centred at
/// `(r_t·sin γ, r_t·cos γ)`, and its final heading crosses that circle at
/// angle `gamma`. The straight segment leaving the turn is therefore tangent
/// to the concentric circle of radius `r_m = r_t·cos γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CcConstants {
    pub r_t: f64,
    pub r_m: f64,
    pub gamma: f64,
}

impl CcConstants {
    /// Evaluates the full clothoid at `σ_max` up to `κ_max` and locates the
    /// centre of the `κ_max` circle it joins.
    pub fn from_limits(limits: &GliderLimits) -> Self {
        let kappa = limits.kappa_max;
        let sigma = limits.sigma_max;
        let half = kappa * kappa / sigma / 2.0;
        let (c, s) = fresnel(half);
        let scale = 1.0 / (2.0 * sigma).sqrt();
        let (x_i, y_i) = (scale * c, scale * s);
        let x_c = x_i - half.sin() / kappa;
        let y_c = y_i + half.cos() / kappa;
        let r_t = x_c.hypot(y_c);
        let gamma = x_c.atan2(y_c);
        Self {
            r_t,
            r_m: r_t * gamma.cos(),
            gamma,
        }
    }

    /// Centre of the endpoint circle in the turn's local frame.
    pub fn center(&self) -> Vec2 {
        [self.r_t * self.gamma.sin(), self.r_t * self.gamma.cos()]
    }

    /// Local endpoint of a left CC turn of deflection `beta`.
    pub fn turn_end(&self, beta: f64) -> Vec2 {
        let c = self.center();
        let a = beta + self.gamma;
        [c[0] + self.r_t * a.sin(), c[1] - self.r_t * a.cos()]
    }

    /// Largest deflection needed to reach a goal at distance `l_e`
    /// (attained with the goal directly behind the start).
    pub fn beta_max(&self, l_e: f64) -> f64 {
        PI + 2.0 * (self.r_m / (l_e + self.r_t * self.gamma.sin())).atan()
    }
}

/// Limits plus the derived constants, checked once and reused for every leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnGeometry {
    pub limits: GliderLimits,
    pub constants: CcConstants,
    pub theta_lim: f64,
}

impl TurnGeometry {
    pub fn new(limits: GliderLimits) -> Result<Self, GeometryError> {
        let theta_lim = theta_lim(&limits)?;
        Ok(Self {
            limits,
            constants: CcConstants::from_limits(&limits),
            theta_lim,
        })
    }

    fn clothoid_length(&self) -> f64 {
        self.limits.kappa_max / self.limits.sigma_max
    }

    /// Arclength of the symmetric clothoid pair whose endpoint lies on the
    /// endpoint circle. Only meaningful for `0 < beta < theta_lim`.
    fn pair_length(&self, beta: f64) -> f64 {
        let half = beta / 2.0;
        let (c, s) = fresnel(half);
        let chord_factor = half.cos() * c + half.sin() * s;
        let r = self.constants.r_t;
        2.0 * (2.0 * beta).sqrt() * r * (half + self.constants.gamma).sin() / chord_factor
    }

    /// Sharpness used by the turn; equals `σ_max` from `theta_lim` upwards.
    pub fn sharpness_for(&self, beta: f64) -> f64 {
        if beta >= self.theta_lim {
            self.limits.sigma_max
        } else if beta <= 0.0 {
            0.0
        } else {
            let l = self.pair_length(beta);
            4.0 * beta / (l * l)
        }
    }

    pub fn arclength(&self, beta: f64) -> f64 {
        if beta <= 0.0 {
            0.0
        } else if beta < self.theta_lim {
            self.pair_length(beta)
        } else {
            beta / self.limits.kappa_max + self.clothoid_length()
        }
    }

    /// Curvature profile of a left turn (negate for a right turn).
    pub fn profile(&self, beta: f64) -> CurvatureProfile {
        let mut profile = CurvatureProfile::new();
        if beta <= 0.0 {
            return profile;
        }
        if beta < self.theta_lim {
            let l = self.pair_length(beta);
            let sigma = 4.0 * beta / (l * l);
            profile.push(l / 2.0, 0.0, sigma);
            profile.push(l / 2.0, sigma * l / 2.0, -sigma);
        } else {
            let kappa = self.limits.kappa_max;
            let sigma = self.limits.sigma_max;
            let l_cl = self.clothoid_length();
            let l = self.arclength(beta);
            profile.push(l_cl, 0.0, sigma);
            profile.push(l - 2.0 * l_cl, kappa, 0.0);
            profile.push(l_cl, kappa, -sigma);
        }
        profile
    }

    pub fn beta_max(&self, l_e: f64) -> f64 {
        self.constants.beta_max(l_e)
    }

    pub fn ratio_bound(&self, l_min: f64) -> Result<f64, GeometryError> {
        ratio_bound(l_min, &self.constants, &self.limits)
    }
}

/// `κ_max² / σ_max`; the turn needs it below π.
pub fn theta_lim(limits: &GliderLimits) -> Result<f64, GeometryError> {
    limits.check_positive()?;
    let value = limits.kappa_max * limits.kappa_max / limits.sigma_max;
    if value < PI {
        Ok(value)
    } else {
        Err(GeometryError::AssumptionViolated(format!(
            "theta_lim = kappa_max^2/sigma_max = {value} must be below pi"
        )))
    }
}

pub fn cc_turn_arclength(beta: f64, limits: &GliderLimits) -> Result<f64, GeometryError> {
    Ok(TurnGeometry::new(*limits)?.arclength(beta))
}

pub fn curvature_profile(
    beta: f64,
    limits: &GliderLimits,
) -> Result<CurvatureProfile, GeometryError> {
    Ok(TurnGeometry::new(*limits)?.profile(beta))
}

/// Upper bound on `l_f / l_e` for any leg whose endpoints are at least
/// `l_min` apart. Returns `(straight_term, turn_term)`; the bound is their sum.
pub fn ratio_bound_terms(
    l_min: f64,
    constants: &CcConstants,
    limits: &GliderLimits,
) -> Result<(f64, f64), GeometryError> {
    if !(l_min > 2.0 * constants.r_t) {
        return Err(GeometryError::AssumptionViolated(format!(
            "l_min = {l_min} must exceed 2*R_T = {}",
            2.0 * constants.r_t
        )));
    }
    let r_t = constants.r_t;
    let straight = ((l_min + r_t).powi(2) - constants.r_m.powi(2)).sqrt() / l_min;
    let turn_len =
        constants.beta_max(l_min) / limits.kappa_max + limits.kappa_max / limits.sigma_max;
    let turn = (turn_len.max(4.66 * r_t / l_min) + r_t) / l_min;
    Ok((straight, turn))
}

pub fn ratio_bound(
    l_min: f64,
    constants: &CcConstants,
    limits: &GliderLimits,
) -> Result<f64, GeometryError> {
    let (a, b) = ratio_bound_terms(l_min, constants, limits)?;
    Ok(a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_limits() -> GliderLimits {
        GliderLimits::new(0.045, 0.001, 0.349)
    }

    #[test]
    fn theta_lim_examples() {
        assert!((theta_lim(&golden_limits()).unwrap() - 2.025).abs() < 1e-12);
        assert_eq!(theta_lim(&GliderLimits::new(1.0, 1.0, 0.3)).unwrap(), 1.0);
        assert!(matches!(
            theta_lim(&GliderLimits::new(0.1, 0.001, 0.3)),
            Err(GeometryError::AssumptionViolated(_))
        ));
    }

    #[test]
    fn arclength_examples() {
        let g = TurnGeometry::new(golden_limits()).unwrap();
        assert_eq!(g.arclength(0.0), 0.0);
        assert!((g.arclength(2.5) - (2.5 / 0.045 + 45.0)).abs() < 1e-12);
        // Both branch formulas agree at theta_lim.
        let upper = g.theta_lim / 0.045 + 45.0;
        assert!((upper - 90.0).abs() < 1e-12);
        assert!((g.pair_length(g.theta_lim) - upper).abs() < 1e-9);
        assert!((g.sharpness_for(g.theta_lim - 1e-12) - 0.001).abs() < 1e-12);
    }

    #[test]
    fn sharpness_never_exceeds_limit_below_theta_lim() {
        let g = TurnGeometry::new(golden_limits()).unwrap();
        for i in 1..2000 {
            let beta = g.theta_lim * i as f64 / 2000.0;
            let sigma = g.sharpness_for(beta);
            assert!(
                sigma > 0.0 && sigma <= 0.001 * (1.0 + 1e-12),
                "beta={beta} sigma={sigma}"
            );
            let peak = (sigma * beta).sqrt();
            assert!(peak <= 0.045 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn plateau_profile_shape() {
        let g = TurnGeometry::new(golden_limits()).unwrap();
        let p = g.profile(2.5);
        assert_eq!(p.segments.len(), 3);
        assert_eq!(p.segments[0].sharpness, 0.001);
        assert_eq!(p.segments[1].kappa_start, 0.045);
        assert_eq!(p.segments[1].sharpness, 0.0);
        assert_eq!(p.segments[2].sharpness, -0.001);
        assert!(p.end_curvature().abs() < 1e-15);
        assert!(g.profile(0.0).is_empty());
    }

    #[test]
    fn degenerate_constants_give_unit_straight_term() {
        let zero = CcConstants {
            r_t: 0.0,
            r_m: 0.0,
            gamma: 0.0,
        };
        let (straight, _) = ratio_bound_terms(100.0, &zero, &golden_limits()).unwrap();
        assert!((straight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_bound_requires_assumption_two() {
        let g = TurnGeometry::new(golden_limits()).unwrap();
        assert!(g.ratio_bound(2.0 * g.constants.r_t).is_err());
        assert!(g.ratio_bound(2.0 * g.constants.r_t + 1e-6).is_ok());
    }
}
