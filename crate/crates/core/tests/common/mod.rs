//! Oracles shared by the integration suites. None of them reuse the search or
//! audit code under test; they only call `build_leg` to obtain legs.

#![allow(dead_code)]

use glidepath::geometry::{build_leg, Leg, Pose, Vec2};
use glidepath::problem::{Problem, Stop};

/// Position after flying `leg`, by plain Simpson integration of the heading
/// `θ(s) = θ₀ + ∫κ` sampled on a uniform grid over each segment.
pub fn fly(leg: &Leg, panels_per_meter: f64) -> (Vec2, f64) {
    let mut p = leg.start.position;
    let mut theta = leg.start.heading;
    for seg in &leg.profile.segments {
        let n = ((seg.length * panels_per_meter).ceil() as usize).max(2) * 2;
        let h = seg.length / n as f64;
        let heading = |u: f64| theta + seg.kappa_start * u + 0.5 * seg.sharpness * u * u;
        let (mut sx, mut sy) = (0.0, 0.0);
        for i in 0..=n {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let t = heading(i as f64 * h);
            sx += w * t.cos();
            sy += w * t.sin();
        }
        p[0] += sx * h / 3.0;
        p[1] += sy * h / 3.0;
        theta = heading(seg.length);
    }
    (p, theta)
}

/// `∫₀^θ cos(u)/√u du` and the sine twin, via `u = t²` and composite Simpson.
pub fn fresnel_quadrature(theta: f64) -> (f64, f64) {
    let upper = theta.sqrt();
    let n = 40_000;
    let h = upper / n as f64;
    let (mut c, mut s) = (0.0, 0.0);
    for i in 0..=n {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let t = i as f64 * h;
        c += w * (t * t).cos();
        s += w * (t * t).sin();
    }
    (2.0 * c * h / 3.0, 2.0 * s * h / 3.0)
}

/// Circle through three points: (centre, radius).
pub fn circumcircle(a: Vec2, b: Vec2, c: Vec2) -> (Vec2, f64) {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let sq = |p: Vec2| p[0] * p[0] + p[1] * p[1];
    let ux = (sq(a) * (b[1] - c[1]) + sq(b) * (c[1] - a[1]) + sq(c) * (a[1] - b[1])) / d;
    let uy = (sq(a) * (c[0] - b[0]) + sq(b) * (a[0] - c[0]) + sq(c) * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    ([ux, uy], r)
}

#[derive(Debug, Clone)]
pub struct OracleOrder {
    pub stops: Vec<Stop>,
    pub s: f64,
    pub k: usize,
    pub valid: bool,
    pub weakly_valid: bool,
}

/// Every goal order of one glider under `allocation`, with validity decided
/// prefix by prefix from the height budget.
pub fn enumerate_orders(problem: &Problem, glider: usize, allocation: u64) -> Vec<OracleOrder> {
    let mut stops: Vec<Stop> = (0..problem.n_interest())
        .filter(|i| allocation & (1u64 << i) != 0)
        .map(Stop::Interest)
        .collect();
    stops.extend((0..problem.n_thermals()).map(Stop::Thermal));
    let spec = &problem.scenario.gliders[glider];
    let tan = problem.scenario.limits.gamma_d_min.tan();
    let allocated = allocation.count_ones() as usize;

    struct Frame<'a> {
        problem: &'a Problem,
        glider: usize,
        tan: f64,
        h0: f64,
        allocated: usize,
        out: Vec<OracleOrder>,
    }

    #[derive(Clone, Copy)]
    struct Prefix {
        s: f64,
        credit: f64,
        valid: bool,
        weak: bool,
    }

    fn recurse(
        f: &mut Frame<'_>,
        pose: Pose,
        order: &mut Vec<Stop>,
        remaining: &[Stop],
        at: Prefix,
    ) {
        let mut candidates = remaining.to_vec();
        candidates.push(Stop::Final);
        for stop in candidates {
            let Ok(leg) = build_leg(
                &pose,
                f.problem.stop_position(f.glider, stop),
                &f.problem.geometry,
            ) else {
                continue;
            };
            let s2 = at.s + leg.l_f;
            let credit2 = at.credit + f.problem.stop_gain(stop);
            let budget = (f.h0 + credit2) / f.tan;
            let valid2 = at.valid && s2 < budget;
            let weak2 = at.weak && s2 / f.problem.r_max < budget;
            order.push(stop);
            if stop == Stop::Final {
                let visited = order
                    .iter()
                    .filter(|s| matches!(s, Stop::Interest(_)))
                    .count();
                f.out.push(OracleOrder {
                    stops: order.clone(),
                    s: s2,
                    k: f.allocated - visited,
                    valid: valid2,
                    weakly_valid: weak2,
                });
            } else {
                let rest: Vec<Stop> = remaining.iter().copied().filter(|x| *x != stop).collect();
                let next = Prefix {
                    s: s2,
                    credit: credit2,
                    valid: valid2,
                    weak: weak2,
                };
                recurse(f, leg.end_pose(), order, &rest, next);
            }
            order.pop();
        }
    }

    let mut frame = Frame {
        problem,
        glider,
        tan,
        h0: spec.start_height,
        allocated,
        out: Vec::new(),
    };
    let origin = Prefix {
        s: 0.0,
        credit: 0.0,
        valid: true,
        weak: true,
    };
    recurse(&mut frame, spec.start, &mut Vec::new(), &stops, origin);
    frame.out
}

/// Best valid goal order: fewest unvisited, then shortest.
pub fn best_valid(orders: &[OracleOrder]) -> Option<&OracleOrder> {
    orders
        .iter()
        .filter(|o| o.valid)
        .min_by(|a, b| a.k.cmp(&b.k).then(a.s.total_cmp(&b.s)))
}

/// Smallest weak cost over weakly valid goal orders.
pub fn min_weak_cost(problem: &Problem, glider: usize, orders: &[OracleOrder]) -> Option<f64> {
    orders
        .iter()
        .filter(|o| o.weakly_valid)
        .map(|o| o.s / problem.r_max + o.k as f64 * problem.p_lower(glider))
        .min_by(f64::total_cmp)
}

pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
