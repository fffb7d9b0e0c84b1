//! Seeded random scenarios for benchmarks and property tests.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{build_leg, GliderLimits, Pose, TurnGeometry};
use crate::scenario::{GliderSpec, Scenario, Waypoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub n_gliders: usize,
    pub n_interest: usize,
    pub n_thermals: usize,
    /// Side of the square area, meters.
    pub area: f64,
    pub start_height: (f64, f64),
    pub thermal_gain: (f64, f64),
    pub limits: GliderLimits,
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_gliders: 2,
            n_interest: 4,
            n_thermals: 3,
            area: 1000.0,
            start_height: (300.0, 700.0),
            thermal_gain: (100.0, 300.0),
            limits: GliderLimits::new(0.045, 0.001, 0.349),
            max_attempts: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub seed: u64,
    pub scenario: Scenario,
    /// Draws discarded before this one was accepted.
    pub rejections: usize,
}

fn round(x: f64, places: i32) -> f64 {
    let k = 10f64.powi(places);
    (x * k).round() / k
}

fn draw(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Scenario {
    let mut point = || {
        [
            round(rng.random_range(0.0..cfg.area), 1),
            round(rng.random_range(0.0..cfg.area), 1),
        ]
    };
    let mut positions: Vec<_> = (0..2 * cfg.n_gliders + cfg.n_interest + cfg.n_thermals)
        .map(|_| point())
        .collect();
    let mut take = || positions.remove(0);
    let mut gliders = Vec::with_capacity(cfg.n_gliders);
    for i in 0..cfg.n_gliders {
        let start = take();
        let final_position = take();
        gliders.push((i, start, final_position));
    }
    let interest_points = (0..cfg.n_interest)
        .map(|i| Waypoint::interest_point(format!("ip{}", i + 1), take()))
        .collect();
    let thermal_positions: Vec<_> = (0..cfg.n_thermals).map(|_| take()).collect();

    let gliders = gliders
        .into_iter()
        .map(|(i, start, final_position)| GliderSpec {
            id: format!("g{}", i + 1),
            start: Pose::new(start, round(rng.random_range(-PI..PI), 2)),
            start_height: round(rng.random_range(cfg.start_height.0..=cfg.start_height.1), 0),
            final_position,
        })
        .collect();
    let thermals = thermal_positions
        .into_iter()
        .enumerate()
        .map(|(k, p)| {
            Waypoint::thermal(
                format!("t{}", k + 1),
                p,
                round(rng.random_range(cfg.thermal_gain.0..=cfg.thermal_gain.1), 0),
            )
        })
        .collect();
    Scenario {
        limits: cfg.limits,
        gliders,
        interest_points,
        thermals,
    }
}

/// Every glider can fly straight to its final position on its starting height.
fn direct_legs_valid(scenario: &Scenario, geo: &TurnGeometry) -> bool {
    let sink = scenario.sink_rate();
    scenario.gliders.iter().all(|g| {
        build_leg(&g.start, g.final_position, geo).is_ok_and(|leg| leg.l_f < g.start_height / sink)
    })
}

/// Draws scenarios from `seed` until one passes validation and lets every
/// glider reach its final position directly.
pub fn generate(seed: u64, cfg: &GeneratorConfig) -> Result<Generated> {
    let geo = TurnGeometry::new(cfg.limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for rejections in 0..cfg.max_attempts {
        let scenario = draw(&mut rng, cfg);
        if scenario.validate().is_empty() && direct_legs_valid(&scenario, &geo) {
            return Ok(Generated {
                seed,
                scenario,
                rejections,
            });
        }
    }
    Err(Error::Structure(format!(
        "no admissible scenario after {} draws for seed {seed}",
        cfg.max_attempts
    )))
}
