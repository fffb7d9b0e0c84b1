//! Validated scenario plus every constant the searches share.

use crate::error::{Error, Result};
use crate::geometry::{TurnGeometry, Vec2};
use crate::scenario::Scenario;

/// A waypoint a glider may append to its visitation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stop {
    Interest(usize),
    Thermal(usize),
    Final,
}

/// Upper bound on the combined interest-point and thermal count; visited
/// sets are kept as 64-bit masks.
pub const MAX_WAYPOINTS: usize = 63;

#[derive(Debug, Clone)]
pub struct Problem {
    pub scenario: Scenario,
    pub geometry: TurnGeometry,
    pub l_min: f64,
    /// Bound on leg arclength over endpoint distance.
    pub r_max: f64,
    pub p_upper: f64,
    p_lower: Vec<f64>,
    sink: f64,
    /// Per glider, rank of each stop id in lexicographic order
    /// (interest points, then thermals, then the final position).
    ranks: Vec<Vec<u16>>,
    ip_ranks: Vec<u16>,
}

impl Problem {
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.ensure_valid()?;
        let n_ip = scenario.interest_points.len();
        let n_t = scenario.thermals.len();
        if n_ip + n_t > MAX_WAYPOINTS {
            return Err(Error::Structure(format!(
                "{} waypoints exceed the supported maximum of {MAX_WAYPOINTS}",
                n_ip + n_t
            )));
        }
        let geometry = TurnGeometry::new(scenario.limits)?;
        let l_min = scenario.l_min();
        let r_max = geometry.ratio_bound(l_min)?;
        let sink = scenario.sink_rate();
        let thermal_total = scenario.total_thermal_gain();
        let p_lower = scenario
            .gliders
            .iter()
            .map(|g| (g.start_height + thermal_total + 1.0) / sink)
            .collect();
        let heights: f64 = scenario.gliders.iter().map(|g| g.start_height).sum();
        let p_upper = (heights + thermal_total + 1.0) / sink;

        let ranks = scenario
            .gliders
            .iter()
            .map(|g| {
                let mut ids: Vec<(String, usize)> = scenario
                    .interest_points
                    .iter()
                    .chain(&scenario.thermals)
                    .map(|w| w.id.clone())
                    .chain(std::iter::once(Scenario::final_id(g)))
                    .enumerate()
                    .map(|(i, id)| (id, i))
                    .collect();
                ids.sort();
                let mut rank = vec![0u16; ids.len()];
                for (r, (_, i)) in ids.into_iter().enumerate() {
                    rank[i] = r as u16;
                }
                rank
            })
            .collect();
        let mut ip_sorted: Vec<(String, usize)> = scenario
            .interest_points
            .iter()
            .enumerate()
            .map(|(i, w)| (w.id.clone(), i))
            .collect();
        ip_sorted.sort();
        let mut ip_ranks = vec![0u16; n_ip];
        for (r, (_, i)) in ip_sorted.into_iter().enumerate() {
            ip_ranks[i] = r as u16;
        }

        Ok(Self {
            scenario,
            geometry,
            l_min,
            r_max,
            p_upper,
            p_lower,
            sink,
            ranks,
            ip_ranks,
        })
    }

    pub fn n_gliders(&self) -> usize {
        self.scenario.gliders.len()
    }

    pub fn n_interest(&self) -> usize {
        self.scenario.interest_points.len()
    }

    pub fn n_thermals(&self) -> usize {
        self.scenario.thermals.len()
    }

    /// Penalty per unvisited interest point in the single-glider cost.
    pub fn p_lower(&self, glider: usize) -> f64 {
        self.p_lower[glider]
    }

    pub fn sink_rate(&self) -> f64 {
        self.sink
    }

    pub fn stop_index(&self, stop: Stop) -> usize {
        match stop {
            Stop::Interest(i) => i,
            Stop::Thermal(k) => self.n_interest() + k,
            Stop::Final => self.n_interest() + self.n_thermals(),
        }
    }

    pub(crate) fn stop_bit(&self, stop: Stop) -> u64 {
        1u64 << self.stop_index(stop)
    }

    pub(crate) fn stop_rank(&self, glider: usize, stop: Stop) -> u16 {
        self.ranks[glider][self.stop_index(stop)]
    }

    pub(crate) fn ip_rank(&self, ip: usize) -> u16 {
        self.ip_ranks[ip]
    }

    pub fn stop_position(&self, glider: usize, stop: Stop) -> Vec2 {
        match stop {
            Stop::Interest(i) => self.scenario.interest_points[i].position,
            Stop::Thermal(k) => self.scenario.thermals[k].position,
            Stop::Final => self.scenario.gliders[glider].final_position,
        }
    }

    pub fn stop_id(&self, glider: usize, stop: Stop) -> String {
        match stop {
            Stop::Interest(i) => self.scenario.interest_points[i].id.clone(),
            Stop::Thermal(k) => self.scenario.thermals[k].id.clone(),
            Stop::Final => Scenario::final_id(&self.scenario.gliders[glider]),
        }
    }

    pub fn stop_gain(&self, stop: Stop) -> f64 {
        match stop {
            Stop::Thermal(k) => self.scenario.thermals[k].height_gain,
            _ => 0.0,
        }
    }

    pub fn glider_index(&self, id: &str) -> Option<usize> {
        self.scenario.gliders.iter().position(|g| g.id == id)
    }

    pub fn interest_index(&self, id: &str) -> Option<usize> {
        self.scenario
            .interest_points
            .iter()
            .position(|w| w.id == id)
    }

    /// Builds an allocation mask from interest-point ids.
    pub fn allocation_mask<S: AsRef<str>>(&self, ids: &[S]) -> Result<u64> {
        ids.iter().try_fold(0u64, |mask, id| {
            let i = self.interest_index(id.as_ref()).ok_or_else(|| {
                Error::Structure(format!("unknown interest point `{}`", id.as_ref()))
            })?;
            Ok(mask | (1u64 << i))
        })
    }

    pub fn allocation_ids(&self, mask: u64) -> Vec<String> {
        let mut ids: Vec<String> = (0..self.n_interest())
            .filter(|i| mask & (1u64 << i) != 0)
            .map(|i| self.scenario.interest_points[i].id.clone())
            .collect();
        ids.sort();
        ids
    }
}
