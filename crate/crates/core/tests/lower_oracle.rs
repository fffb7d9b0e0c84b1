mod common;

use common::{best_valid, enumerate_orders, min_weak_cost, rel_eq};
use glidepath::generate::{generate, GeneratorConfig};
use glidepath::problem::{Problem, Stop};
use glidepath::scenario::golden_scenario;

fn single_glider(seed: u64, n_ip: usize, n_t: usize) -> Problem {
    let cfg = GeneratorConfig {
        n_gliders: 1,
        n_interest: n_ip,
        n_thermals: n_t,
        ..GeneratorConfig::default()
    };
    Problem::new(generate(seed, &cfg).unwrap().scenario).unwrap()
}

#[test]
fn search_matches_exhaustive_enumeration() {
    let mut checked = 0;
    for seed in 0..60u64 {
        let problem = single_glider(seed, 2 + (seed % 2) as usize, 1 + (seed % 3) as usize);
        let all = (1u64 << problem.n_interest()) - 1;
        for mask in [all, all & 0b1, 0] {
            let orders = enumerate_orders(&problem, 0, mask);
            let oracle = best_valid(&orders).expect("direct leg is valid by construction");
            let sol = problem.solve_lower(0, mask).unwrap();
            assert_eq!(sol.best.k_l, oracle.k, "seed {seed} mask {mask:b}");
            assert!(
                rel_eq(sol.best.s_l, oracle.s, 1e-12),
                "seed {seed}: {} vs {}",
                sol.best.s_l,
                oracle.s
            );
            assert!(sol.best.valid && sol.best.is_goal);

            let weak = min_weak_cost(&problem, 0, &orders).unwrap();
            assert!(
                rel_eq(sol.weak_cost, weak, 1e-12),
                "seed {seed}: weak {} vs {weak}",
                sol.weak_cost
            );
            assert!(sol.weak_cost <= sol.best_cost);
            checked += 1;
        }
    }
    assert!(checked >= 50);
}

#[test]
fn valid_orders_are_weakly_valid() {
    let problem = single_glider(3, 3, 2);
    for o in enumerate_orders(&problem, 0, 0b111) {
        assert!(!o.valid || o.weakly_valid);
    }
}

#[test]
fn lower_penalty_exceeds_every_budget() {
    let problem = single_glider(11, 2, 2);
    let p_l = problem.p_lower(0);
    for o in enumerate_orders(&problem, 0, 0b11) {
        let budget = glidepath::lower::max_arclength(&problem, 0, &o.stops);
        assert!(p_l > budget);
    }
}

#[test]
fn heights_follow_the_thermal_recursion() {
    let problem = Problem::new(golden_scenario()).unwrap();
    let sol = problem.solve_lower(0, 0b1011).unwrap();
    let order = &sol.best;
    let tan = 0.349f64.tan();
    let mut h = 600.0;
    for ((leg, heights), stop) in order.legs.iter().zip(&order.heights).zip(&order.stops) {
        assert_eq!(heights.start, h);
        assert!((heights.end - (h - tan * leg.l_f)).abs() < 1e-9);
        h = heights.end
            + if matches!(stop, Stop::Thermal(_)) {
                200.0
            } else {
                0.0
            };
    }
}

#[test]
fn golden_glider_two_reference_order_overruns_budget() {
    // The reference order for this allocation is t1, ip1, ip3. Under the
    // CC-leg geometry it overruns the height budget, so the search returns
    // a different order; the enumeration below pins down why.
    let problem = Problem::new(golden_scenario()).unwrap();
    let mask = problem.allocation_mask(&["ip1", "ip3"]).unwrap();
    let orders = enumerate_orders(&problem, 1, mask);
    let reference = orders
        .iter()
        .find(|o| {
            o.stops
                == [
                    Stop::Thermal(0),
                    Stop::Interest(0),
                    Stop::Interest(2),
                    Stop::Final,
                ]
        })
        .unwrap();
    assert!(!reference.valid);
    assert!((reference.s - 1948.5).abs() < 0.1, "{}", reference.s);
    let sol = problem.solve_lower(1, mask).unwrap();
    assert_eq!(sol.best.visits(), ["ip1", "t1", "ip3", "t3"]);
    assert_eq!(sol.best.k_l, 0);
}

#[test]
fn solve_is_deterministic() {
    let problem = single_glider(21, 3, 3);
    let a = problem.solve_lower(0, 0b111).unwrap();
    let b = problem.solve_lower(0, 0b111).unwrap();
    assert_eq!(a.best.waypoints, b.best.waypoints);
    assert_eq!(a.weak.waypoints, b.weak.waypoints);
    assert_eq!(a.best.s_l.to_bits(), b.best.s_l.to_bits());
}
