//! Allocation search across gliders: Branch&Bound over partial allocations
//! and a brute-force enumerator over every exhaustive allocation.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lower::{LowerSolution, VisitationOrder};
use crate::problem::Problem;

/// Largest number of exhaustive allocations the brute-force search accepts.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Memo table of single-glider solutions keyed by `(glider, allocation mask)`.
#[derive(Debug, Default)]
pub struct LowerCache {
    map: Mutex<HashMap<(usize, u64), Arc<LowerSolution>>>,
    solves: AtomicUsize,
}

impl LowerCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of distinct lower-level problems solved through this cache.
    pub fn solves(&self) -> usize {
        self.solves.load(AtomicOrdering::Relaxed)
    }

    pub fn get_or_solve(
        &self,
        problem: &Problem,
        glider: usize,
        mask: u64,
    ) -> Result<Arc<LowerSolution>> {
        if let Some(hit) = self.map.lock().unwrap().get(&(glider, mask)) {
            return Ok(Arc::clone(hit));
        }
        // Solved outside the lock; a concurrent duplicate is discarded.
        let solved = Arc::new(problem.solve_lower(glider, mask)?);
        let mut map = self.map.lock().unwrap();
        let entry = map.entry((glider, mask)).or_insert_with(|| {
            self.solves.fetch_add(1, AtomicOrdering::Relaxed);
            solved
        });
        Ok(Arc::clone(entry))
    }
}

/// One node of the allocation graph.
#[derive(Debug, Clone)]
pub struct AllocationSet {
    /// Interest-point mask per glider.
    pub allocations: Vec<u64>,
    pub k_u: usize,
    pub s_u: f64,
    pub v_u: f64,
    pub v_weak: f64,
    pub lower: Vec<Arc<LowerSolution>>,
    key: Vec<Vec<u16>>,
}

impl AllocationSet {
    pub fn is_goal(&self, problem: &Problem) -> bool {
        let all = self.allocations.iter().fold(0u64, |a, m| a | m);
        all.count_ones() as usize == problem.n_interest()
    }

    /// Allocated interest-point ids per glider, each list sorted.
    pub fn ids(&self, problem: &Problem) -> Vec<Vec<String>> {
        self.allocations
            .iter()
            .map(|m| problem.allocation_ids(*m))
            .collect()
    }

    pub fn orders(&self) -> Vec<&VisitationOrder> {
        self.lower.iter().map(|l| &l.best).collect()
    }

    /// Total order used for queue priority and incumbent selection.
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        self.v_u
            .total_cmp(&other.v_u)
            .then(self.k_u.cmp(&other.k_u))
            .then(self.s_u.total_cmp(&other.s_u))
            .then_with(|| self.key.cmp(&other.key))
    }
}

fn allocation_key(problem: &Problem, masks: &[u64]) -> Vec<Vec<u16>> {
    masks
        .iter()
        .map(|&m| {
            let mut ranks: Vec<u16> = (0..problem.n_interest())
                .filter(|i| m & (1u64 << i) != 0)
                .map(|i| problem.ip_rank(i))
                .collect();
            ranks.sort_unstable();
            ranks
        })
        .collect()
}

/// `(Σ h⁰ + Σ thermal gains + 1) / tan γ`.
pub fn penalty_upper(problem: &Problem) -> f64 {
    problem.p_upper
}

pub fn evaluate_allocation(
    problem: &Problem,
    cache: &LowerCache,
    masks: &[u64],
) -> Result<AllocationSet> {
    debug_assert_eq!(masks.len(), problem.n_gliders());
    let lower = masks
        .iter()
        .enumerate()
        .map(|(g, &m)| cache.get_or_solve(problem, g, m))
        .collect::<Result<Vec<_>>>()?;
    let k_u = lower.iter().map(|l| l.best.k_l).sum();
    let s_u = lower.iter().map(|l| l.best.s_l).sum();
    let v_weak = lower.iter().map(|l| l.weak_cost).sum();
    Ok(AllocationSet {
        allocations: masks.to_vec(),
        k_u,
        s_u,
        v_u: s_u + problem.p_upper * k_u as f64,
        v_weak,
        lower,
        key: allocation_key(problem, masks),
    })
}

/// Allocation vectors of the children: one per (glider, unallocated point).
pub fn children_upper(problem: &Problem, masks: &[u64]) -> Vec<Vec<u64>> {
    let taken = masks.iter().fold(0u64, |a, m| a | m);
    let mut out = Vec::new();
    for g in 0..masks.len() {
        for ip in 0..problem.n_interest() {
            let bit = 1u64 << ip;
            if taken & bit == 0 {
                let mut child = masks.to_vec();
                child[g] |= bit;
                out.push(child);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bnb,
    Brute,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: usize,
    pub nodes_generated: usize,
    pub pruned: usize,
    pub sets_evaluated: usize,
    pub lower_solves: usize,
    #[serde(serialize_with = "seconds")]
    pub wall_time: Duration,
    /// Incumbent cost after every improvement.
    pub incumbent_history: Vec<f64>,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub algorithm: Algorithm,
    pub best: AllocationSet,
    pub stats: SearchStats,
}

struct Queued(AllocationSet);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp_key(&other.0)
    }
}

pub fn solve_bnb(problem: &Problem) -> Result<PlanResult> {
    solve_bnb_with(problem, &LowerCache::new())
}

/// Branch&Bound search; lower solves go through `cache`, and the reported
/// solve count is the number of new entries it gained.
pub fn solve_bnb_with(problem: &Problem, cache: &LowerCache) -> Result<PlanResult> {
    let started = Instant::now();
    let solves_before = cache.solves();
    let mut stats = SearchStats::default();

    let root_masks = vec![0u64; problem.n_gliders()];
    let root = evaluate_allocation(problem, cache, &root_masks)?;
    stats.sets_evaluated += 1;

    let mut incumbent: Option<AllocationSet> = None;
    let mut upper = f64::INFINITY;
    if root.is_goal(problem) {
        upper = root.v_u;
        stats.incumbent_history.push(upper);
        incumbent = Some(root.clone());
    }

    let mut visited: HashSet<Vec<u64>> = HashSet::from([root_masks]);
    let mut open = BinaryHeap::from([Reverse(Queued(root))]);

    while let Some(Reverse(Queued(node))) = open.pop() {
        if !(node.v_weak < upper) || node.is_goal(problem) {
            continue;
        }
        stats.nodes_expanded += 1;
        let fresh: Vec<Vec<u64>> = children_upper(problem, &node.allocations)
            .into_iter()
            .filter(|c| visited.insert(c.clone()))
            .collect();
        let children = fresh
            .par_iter()
            .map(|masks| evaluate_allocation(problem, cache, masks))
            .collect::<Result<Vec<_>>>()?;
        stats.nodes_generated += children.len();
        stats.sets_evaluated += children.len();

        for child in children {
            if child.is_goal(problem) {
                let better = match &incumbent {
                    None => true,
                    Some(inc) => child.cmp_key(inc) == Ordering::Less,
                };
                if better {
                    debug_assert!(child.v_u <= upper);
                    upper = child.v_u;
                    stats.incumbent_history.push(upper);
                    incumbent = Some(child.clone());
                }
            }
            if child.v_weak <= upper {
                open.push(Reverse(Queued(child)));
            } else {
                stats.pruned += 1;
            }
        }
    }

    let best = incumbent
        .ok_or_else(|| Error::Structure("search ended without a goal allocation".into()))?;
    stats.lower_solves = cache.solves() - solves_before;
    stats.wall_time = started.elapsed();
    Ok(PlanResult {
        algorithm: Algorithm::Bnb,
        best,
        stats,
    })
}

/// Number of exhaustive allocations, `n_g ^ n_ip`.
pub fn allocation_count(problem: &Problem) -> u128 {
    (problem.n_gliders() as u128).saturating_pow(problem.n_interest() as u32)
}

/// Decodes the `index`-th exhaustive allocation (base-`n_g` digits, one per
/// interest point).
pub fn allocation_from_index(problem: &Problem, mut index: u128) -> Vec<u64> {
    let n_g = problem.n_gliders() as u128;
    let mut masks = vec![0u64; problem.n_gliders()];
    for ip in 0..problem.n_interest() {
        masks[(index % n_g) as usize] |= 1u64 << ip;
        index /= n_g;
    }
    masks
}

pub fn enumerate_allocations(problem: &Problem) -> Result<Vec<Vec<u64>>> {
    let count = allocation_count(problem);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok((0..count)
        .map(|i| allocation_from_index(problem, i))
        .collect())
}

pub fn solve_brute(problem: &Problem) -> Result<PlanResult> {
    solve_brute_with(problem, &LowerCache::new())
}

pub fn solve_brute_with(problem: &Problem, cache: &LowerCache) -> Result<PlanResult> {
    let started = Instant::now();
    let solves_before = cache.solves();
    let all = enumerate_allocations(problem)?;
    let evaluated = all
        .par_iter()
        .map(|masks| evaluate_allocation(problem, cache, masks))
        .collect::<Result<Vec<_>>>()?;
    let sets_evaluated = evaluated.len();
    let best = evaluated
        .into_iter()
        .min_by(|a, b| a.cmp_key(b))
        .ok_or_else(|| Error::Structure("no allocation to evaluate".into()))?;
    let stats = SearchStats {
        sets_evaluated,
        lower_solves: cache.solves() - solves_before,
        wall_time: started.elapsed(),
        incumbent_history: vec![best.v_u],
        ..SearchStats::default()
    };
    Ok(PlanResult {
        algorithm: Algorithm::Brute,
        best,
        stats,
    })
}

pub fn solve(problem: &Problem, algorithm: Algorithm) -> Result<PlanResult> {
    match algorithm {
        Algorithm::Bnb => solve_bnb(problem),
        Algorithm::Brute => solve_brute(problem),
    }
}
