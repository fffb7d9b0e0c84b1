//! Multi-glider path planning over interest points and thermals.
//!
//! Each glider flies legs made of a continuous-curvature turn and a straight
//! segment. A uniform-cost search picks the best visitation order for one
//! glider and a given set of interest points; a Branch&Bound search over
//! interest-point allocations combines those into a fleet plan.
// `!(a < b)` is used on purpose so that NaN fails the comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod lower;
pub mod pathcheck;
pub mod plan;
pub mod problem;
pub mod scenario;
pub mod upper;

pub use error::{Error, GeometryError, Result};
pub use plan::PlanFile;
pub use problem::{Problem, Stop};
pub use scenario::Scenario;
pub use upper::{solve_bnb, solve_brute, PlanResult};
