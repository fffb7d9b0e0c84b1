//! Single-glider search over visitation orders.
//!
//! Each node of the search graph is an ordered list of waypoints; a child
//! appends one more waypoint (an allocated interest point, a thermal or the
//! glider's final position) and one more leg. Two uniform-cost passes run
//! over this tree:
//!
//! 1. over valid nodes ordered by `V_L`, stopping at the first goal popped,
//!    which is the valid-optimal order;
//! 2. over weakly valid nodes ordered by the weak cost `V̲_L`, stopping at the
//!    first goal popped, which is the weak-optimal order used as a lower bound
//!    by the allocation search.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_leg, Leg, Pose};
use crate::problem::{Problem, Stop};

/// Physical glider height at the two ends of a leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegHeights {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisitationOrder {
    pub glider: usize,
    pub glider_id: String,
    pub stops: Vec<Stop>,
    pub waypoints: Vec<String>,
    pub legs: Vec<Leg>,
    pub s_l: f64,
    pub k_l: usize,
    pub heights: Vec<LegHeights>,
    pub is_goal: bool,
    pub valid: bool,
    pub weakly_valid: bool,
}

impl VisitationOrder {
    /// Waypoint ids without the trailing final position.
    pub fn visits(&self) -> Vec<&str> {
        self.waypoints
            .iter()
            .zip(&self.stops)
            .filter(|(_, s)| **s != Stop::Final)
            .map(|(id, _)| id.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerStats {
    pub expanded_valid: usize,
    pub expanded_weak: usize,
    pub dropped_legs: usize,
}

#[derive(Debug, Clone)]
pub struct LowerSolution {
    pub allocation: u64,
    /// Valid goal order of least `V_L`.
    pub best: VisitationOrder,
    /// Weakly valid goal order of least `V̲_L`.
    pub weak: VisitationOrder,
    pub best_cost: f64,
    pub weak_cost: f64,
    pub stats: LowerStats,
}

impl LowerSolution {
    pub fn s_l_best(&self) -> f64 {
        self.best.s_l
    }
    pub fn k_l_best(&self) -> usize {
        self.best.k_l
    }
    pub fn s_l_weak(&self) -> f64 {
        self.weak.s_l
    }
    pub fn k_l_weak(&self) -> usize {
        self.weak.k_l
    }
}

/// `(h⁰ + Σ all thermal gains + 1) / tan γ`.
pub fn penalty_lower(problem: &Problem, glider: usize) -> f64 {
    problem.p_lower(glider)
}

/// Arclength budget of an order: start height plus the gain of every thermal
/// in the order, converted to distance.
pub fn max_arclength(problem: &Problem, glider: usize, stops: &[Stop]) -> f64 {
    let credit: f64 = stops.iter().map(|s| problem.stop_gain(*s)).sum();
    (problem.scenario.gliders[glider].start_height + credit) / problem.sink_rate()
}

pub fn node_cost(s_l: f64, k_l: usize, is_goal: bool, p_l: f64) -> f64 {
    if is_goal {
        s_l + k_l as f64 * p_l
    } else {
        s_l
    }
}

pub fn weak_cost(s_l: f64, k_l: usize, is_goal: bool, p_l: f64, r_max: f64) -> f64 {
    node_cost(s_l / r_max, k_l, is_goal, p_l)
}

/// Incremental state of a node; everything a child needs from its parent.
#[derive(Debug, Clone)]
struct NodeState {
    end: Pose,
    s_l: f64,
    credit: f64,
    visited: u64,
    interest_visited: u32,
    valid: bool,
    weakly_valid: bool,
    goal: bool,
}

#[derive(Debug)]
struct Node {
    parent: Option<usize>,
    stop: Option<Stop>,
    leg: Option<Leg>,
    state: NodeState,
    ranks: Vec<u16>,
}

/// Queue priority: cost, then fewer unvisited, then shorter, then id sequence.
#[derive(Debug, Clone, PartialEq)]
struct Key {
    cost: f64,
    unvisited: usize,
    s_l: f64,
    ranks: Vec<u16>,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.unvisited.cmp(&other.unvisited))
            .then(self.s_l.total_cmp(&other.s_l))
            .then_with(|| self.ranks.cmp(&other.ranks))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Queue = BinaryHeap<Reverse<(Key, usize)>>;

struct Search<'a> {
    problem: &'a Problem,
    glider: usize,
    allocation: u64,
    n_alloc: usize,
    p_l: f64,
    budget_base: f64,
    nodes: Vec<Node>,
    stats: LowerStats,
}

impl<'a> Search<'a> {
    fn new(problem: &'a Problem, glider: usize, allocation: u64) -> Self {
        let spec = &problem.scenario.gliders[glider];
        let root = Node {
            parent: None,
            stop: None,
            leg: None,
            state: NodeState {
                end: spec.start,
                s_l: 0.0,
                credit: 0.0,
                visited: 0,
                interest_visited: 0,
                valid: true,
                weakly_valid: true,
                goal: false,
            },
            ranks: Vec::new(),
        };
        Self {
            problem,
            glider,
            allocation,
            n_alloc: allocation.count_ones() as usize,
            p_l: problem.p_lower(glider),
            budget_base: spec.start_height,
            nodes: vec![root],
            stats: LowerStats::default(),
        }
    }

    fn unvisited(&self, idx: usize) -> usize {
        self.n_alloc - self.nodes[idx].state.interest_visited as usize
    }

    fn cost(&self, idx: usize) -> f64 {
        let s = &self.nodes[idx].state;
        node_cost(s.s_l, self.unvisited(idx), s.goal, self.p_l)
    }

    fn weak(&self, idx: usize) -> f64 {
        let s = &self.nodes[idx].state;
        weak_cost(
            s.s_l,
            self.unvisited(idx),
            s.goal,
            self.p_l,
            self.problem.r_max,
        )
    }

    fn key(&self, idx: usize, cost: f64) -> Key {
        Key {
            cost,
            unvisited: self.unvisited(idx),
            s_l: self.nodes[idx].state.s_l,
            ranks: self.nodes[idx].ranks.clone(),
        }
    }

    /// Appends the child nodes of `idx` to the arena and returns their indices.
    fn expand(&mut self, idx: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes[idx].state.goal {
            return out;
        }
        let candidates =
            candidate_stops(self.problem, self.allocation, self.nodes[idx].state.visited);
        for stop in candidates {
            let parent = &self.nodes[idx];
            match child_state(
                self.problem,
                self.glider,
                self.budget_base,
                &parent.state,
                stop,
            ) {
                Ok((leg, state)) => {
                    let mut ranks = parent.ranks.clone();
                    ranks.push(self.problem.stop_rank(self.glider, stop));
                    self.nodes.push(Node {
                        parent: Some(idx),
                        stop: Some(stop),
                        leg: Some(leg),
                        state,
                        ranks,
                    });
                    out.push(self.nodes.len() - 1);
                }
                Err(err) => {
                    log::debug!("dropping child {stop:?} of glider {}: {err}", self.glider);
                    self.stats.dropped_legs += 1;
                }
            }
        }
        out
    }

    fn materialize(&self, idx: usize) -> VisitationOrder {
        let mut chain = Vec::new();
        let mut cur = Some(idx);
        while let Some(i) = cur {
            if self.nodes[i].stop.is_some() {
                chain.push(i);
            }
            cur = self.nodes[i].parent;
        }
        chain.reverse();
        let stops: Vec<Stop> = chain.iter().map(|&i| self.nodes[i].stop.unwrap()).collect();
        let legs: Vec<Leg> = chain
            .iter()
            .map(|&i| self.nodes[i].leg.clone().unwrap())
            .collect();
        let state = &self.nodes[idx].state;
        order_from_parts(
            self.problem,
            self.glider,
            self.allocation,
            stops,
            legs,
            state,
        )
    }
}

fn candidate_stops(problem: &Problem, allocation: u64, visited: u64) -> Vec<Stop> {
    let mut out = Vec::new();
    for i in 0..problem.n_interest() {
        if allocation & (1u64 << i) != 0 && visited & problem.stop_bit(Stop::Interest(i)) == 0 {
            out.push(Stop::Interest(i));
        }
    }
    for k in 0..problem.n_thermals() {
        if visited & problem.stop_bit(Stop::Thermal(k)) == 0 {
            out.push(Stop::Thermal(k));
        }
    }
    out.push(Stop::Final);
    out
}

fn child_state(
    problem: &Problem,
    glider: usize,
    budget_base: f64,
    parent: &NodeState,
    stop: Stop,
) -> std::result::Result<(Leg, NodeState), crate::error::GeometryError> {
    let goal = problem.stop_position(glider, stop);
    let leg = build_leg(&parent.end, goal, &problem.geometry)?;
    let s_l = parent.s_l + leg.l_f;
    let credit = parent.credit + problem.stop_gain(stop);
    let s_max = (budget_base + credit) / problem.sink_rate();
    let state = NodeState {
        end: leg.end_pose(),
        s_l,
        credit,
        visited: parent.visited | problem.stop_bit(stop),
        interest_visited: parent.interest_visited + matches!(stop, Stop::Interest(_)) as u32,
        valid: parent.valid && s_l < s_max,
        weakly_valid: parent.weakly_valid && s_l / problem.r_max < s_max,
        goal: stop == Stop::Final,
    };
    Ok((leg, state))
}

fn order_from_parts(
    problem: &Problem,
    glider: usize,
    allocation: u64,
    stops: Vec<Stop>,
    legs: Vec<Leg>,
    state: &NodeState,
) -> VisitationOrder {
    let spec = &problem.scenario.gliders[glider];
    let sink = problem.sink_rate();
    let mut heights = Vec::with_capacity(legs.len());
    let mut h = spec.start_height;
    for (leg, stop) in legs.iter().zip(&stops) {
        let end = h - sink * leg.l_f;
        heights.push(LegHeights { start: h, end });
        h = end + problem.stop_gain(*stop);
    }
    VisitationOrder {
        glider,
        glider_id: spec.id.clone(),
        waypoints: stops.iter().map(|s| problem.stop_id(glider, *s)).collect(),
        stops,
        legs,
        s_l: state.s_l,
        k_l: allocation.count_ones() as usize - state.interest_visited as usize,
        heights,
        is_goal: state.goal,
        valid: state.valid,
        weakly_valid: state.weakly_valid,
    }
}

impl Problem {
    /// Root node (empty order) of the glider's search graph.
    pub fn root_order(&self, glider: usize) -> VisitationOrder {
        let spec = &self.scenario.gliders[glider];
        VisitationOrder {
            glider,
            glider_id: spec.id.clone(),
            stops: Vec::new(),
            waypoints: Vec::new(),
            legs: Vec::new(),
            s_l: 0.0,
            k_l: 0,
            heights: Vec::new(),
            is_goal: false,
            valid: true,
            weakly_valid: true,
        }
    }

    /// Children of an order under `allocation`; goal orders have none.
    /// Children whose leg cannot be built are left out.
    pub fn expand(&self, order: &VisitationOrder, allocation: u64) -> Vec<VisitationOrder> {
        if order.is_goal {
            return Vec::new();
        }
        let glider = order.glider;
        let spec = &self.scenario.gliders[glider];
        let visited = order.stops.iter().fold(0u64, |m, s| m | self.stop_bit(*s));
        let state = NodeState {
            end: order.legs.last().map_or(spec.start, Leg::end_pose),
            s_l: order.s_l,
            credit: order.stops.iter().map(|s| self.stop_gain(*s)).sum(),
            visited,
            interest_visited: order
                .stops
                .iter()
                .filter(|s| matches!(s, Stop::Interest(_)))
                .count() as u32,
            valid: order.valid,
            weakly_valid: order.weakly_valid,
            goal: false,
        };
        candidate_stops(self, allocation, visited)
            .into_iter()
            .filter_map(|stop| {
                let (leg, child) =
                    child_state(self, glider, spec.start_height, &state, stop).ok()?;
                let mut stops = order.stops.clone();
                stops.push(stop);
                let mut legs = order.legs.clone();
                legs.push(leg);
                Some(order_from_parts(
                    self, glider, allocation, stops, legs, &child,
                ))
            })
            .collect()
    }

    /// Valid-optimal and weak-optimal visitation orders for one glider.
    pub fn solve_lower(&self, glider: usize, allocation: u64) -> Result<LowerSolution> {
        let mut search = Search::new(self, glider, allocation);
        let mut open: Queue = BinaryHeap::new();
        let mut weak_open: Queue = BinaryHeap::new();
        open.push(Reverse((search.key(0, 0.0), 0)));

        let best = loop {
            let Some(Reverse((_, idx))) = open.pop() else {
                return Err(Error::Infeasible {
                    glider: self.scenario.gliders[glider].id.clone(),
                });
            };
            if search.nodes[idx].state.goal {
                break idx;
            }
            search.stats.expanded_valid += 1;
            let parent_cost = search.cost(idx);
            for child in search.expand(idx) {
                let cost = search.cost(child);
                debug_assert!(cost > parent_cost, "cost must grow along every edge");
                let st = &search.nodes[child].state;
                if st.valid {
                    open.push(Reverse((search.key(child, cost), child)));
                } else if st.weakly_valid {
                    let w = search.weak(child);
                    weak_open.push(Reverse((search.key(child, w), child)));
                }
            }
        };

        // Valid nodes left unexpanded are weakly valid too; their subtrees
        // still hold weakly valid goals and must stay in the weak frontier.
        for Reverse((_, idx)) in open
            .into_iter()
            .chain([Reverse((search.key(best, 0.0), best))])
        {
            let w = search.weak(idx);
            weak_open.push(Reverse((search.key(idx, w), idx)));
        }

        let weak = loop {
            let Reverse((_, idx)) = weak_open
                .pop()
                .expect("weak frontier always holds the valid optimum");
            if search.nodes[idx].state.goal {
                break idx;
            }
            search.stats.expanded_weak += 1;
            let parent_weak = search.weak(idx);
            for child in search.expand(idx) {
                if search.nodes[child].state.weakly_valid {
                    let w = search.weak(child);
                    debug_assert!(w > parent_weak, "weak cost must grow along every edge");
                    weak_open.push(Reverse((search.key(child, w), child)));
                }
            }
        };

        Ok(LowerSolution {
            allocation,
            best_cost: search.cost(best),
            weak_cost: search.weak(weak),
            best: search.materialize(best),
            weak: search.materialize(weak),
            stats: search.stats,
        })
    }
}
