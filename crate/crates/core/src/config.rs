//! Tunable limits and tolerances shared by the analysis routines.

use serde::Serialize;

/// Absolute per-coordinate tolerance for zipper vertex conditions.
pub const VERTEX_TOL: f64 = 1e-9;

/// Tolerance for "consecutive cylinders share an endpoint".
pub const SHARED_ENDPOINT_TOL: f64 = 1e-9;

/// Radius below which two overlapping covers count as touching.
pub const SEPARATION_RESOLUTION: f64 = 1e-9;

/// Relative gap at which the bounded-turning branch and bound stops.
pub const TURNING_GAP: f64 = 1e-3;

/// Relative slack of the Hölder-bound check.
pub const HOLDER_SLACK: f64 = 1e-6;

/// Relative tolerance when comparing similarity ratios of two zippers.
pub const RATIO_EQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// Deepest address built by any operation.
    pub depth_cap: usize,
    /// Maximum number of cylinders materialized at once.
    pub node_budget: u64,
    /// Maximum number of vertex pairs in the bounded-turning scan.
    pub pair_budget: u64,
    /// Maximum pair nodes expanded while resolving one Jordan pair.
    pub refine_budget: u64,
    /// Maximum items processed by the bounded-turning branch and bound.
    pub certify_budget: u64,
    /// Seed for every random sampler.
    pub seed: u64,
    /// Evaluation tolerance for points of the attractor.
    pub eval_tol: f64,
    /// Worker threads for the parallel scans; `None` uses rayon's default.
    pub threads: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            depth_cap: crate::address::DEPTH_CAP,
            node_budget: 1_000_000,
            pair_budget: 1_000_000,
            refine_budget: 20_000,
            certify_budget: 2_000_000,
            seed: 0,
            eval_tol: 1e-8,
            threads: None,
        }
    }
}

impl Config {
    /// Checks `m^depth` against the node budget.
    pub fn check_nodes(&self, m: usize, depth: usize) -> crate::Result<()> {
        if depth > self.depth_cap {
            return Err(crate::Error::DepthCap { depth, cap: self.depth_cap });
        }
        let requested = (m as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
        if requested > self.node_budget as u128 {
            return Err(crate::Error::BudgetExceeded { requested, budget: self.node_budget });
        }
        Ok(())
    }
}
