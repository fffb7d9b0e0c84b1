use serde::{Deserialize, Serialize};

/// One piece of a piecewise-linear curvature profile:
/// `κ(s) = kappa_start + sharpness · s` for `s ∈ [0, length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSegment {
    pub length: f64,
    pub kappa_start: f64,
    pub sharpness: f64,
}

impl ProfileSegment {
    pub fn kappa_end(&self) -> f64 {
        self.kappa_start + self.sharpness * self.length
    }

    /// Exact heading change over the segment.
    pub fn heading_change(&self) -> f64 {
        self.length * (self.kappa_start + 0.5 * self.sharpness * self.length)
    }
}

/// Breakpoints and slopes of a curvature profile, stored exactly.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurvatureProfile {
    pub segments: Vec<ProfileSegment>,
}

impl CurvatureProfile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a segment; zero-length pieces are dropped.
    pub fn push(&mut self, length: f64, kappa_start: f64, sharpness: f64) {
        if length > 0.0 {
            self.segments.push(ProfileSegment {
                length,
                kappa_start,
                sharpness,
            });
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn heading_change(&self) -> f64 {
        self.segments
            .iter()
            .map(ProfileSegment::heading_change)
            .sum()
    }

    pub fn curvature_at(&self, mut l: f64) -> f64 {
        for seg in &self.segments {
            if l <= seg.length {
                return seg.kappa_start + seg.sharpness * l.max(0.0);
            }
            l -= seg.length;
        }
        self.end_curvature()
    }

    pub fn start_curvature(&self) -> f64 {
        self.segments.first().map_or(0.0, |s| s.kappa_start)
    }

    pub fn end_curvature(&self) -> f64 {
        self.segments.last().map_or(0.0, ProfileSegment::kappa_end)
    }

    /// Largest |κ|; for a piecewise-linear profile this sits on a breakpoint.
    pub fn max_abs_curvature(&self) -> f64 {
        self.segments
            .iter()
            .flat_map(|s| [s.kappa_start.abs(), s.kappa_end().abs()])
            .fold(0.0, f64::max)
    }

    pub fn max_abs_sharpness(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.sharpness.abs())
            .fold(0.0, f64::max)
    }

    /// Largest curvature jump between consecutive segments.
    pub fn max_internal_jump(&self) -> f64 {
        self.segments
            .windows(2)
            .map(|w| (w[0].kappa_end() - w[1].kappa_start).abs())
            .fold(0.0, f64::max)
    }

    pub fn mirrored(&self) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| ProfileSegment {
                    length: s.length,
                    kappa_start: -s.kappa_start,
                    sharpness: -s.sharpness,
                })
                .collect(),
        }
    }
}
