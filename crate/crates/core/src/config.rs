use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 0xC0B1;

/// When the polynomial disc optimizer is run for an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscSearch {
    /// Only when the cheaper bounds leave a gap wider than `search_gap`.
    Auto,
    Always,
    Never,
}

/// Estimator settings. Every field has a default, so `{}` is a valid config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorConfig {
    /// Polynomial degree of candidate discs.
    pub degree: usize,
    /// Interior safety margin on the normalized defining function.
    pub margin: f64,
    /// Boundary samples used inside the optimizer.
    pub boundary_samples: usize,
    /// Boundary samples used to certify the final disc.
    pub certify_samples: usize,
    pub multistarts: usize,
    pub max_evals: usize,
    pub seed: u64,
    /// Use closed-form values where the domain kind has one.
    pub oracles: bool,
    pub disc_search: DiscSearch,
    /// Relative bracket width above which `Auto` runs the optimizer.
    pub search_gap: f64,
    /// Default node count of discretized paths.
    pub path_nodes: usize,
    /// Node cap for the ε-geodesic refinement loop.
    pub max_path_nodes: usize,
    /// Gauss points per path segment.
    pub quad_points: usize,
    /// Segments closer than this to the boundary are split in two.
    pub refine_delta: f64,
    /// Targets sampled on `∂D` for distances to a complement.
    pub set_targets: usize,
    /// Node-perturbation sweeps in curve minimization.
    pub curve_sweeps: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            degree: 8,
            margin: 1e-6,
            boundary_samples: 64,
            certify_samples: 4096,
            multistarts: 8,
            max_evals: 5000,
            seed: DEFAULT_SEED,
            oracles: true,
            disc_search: DiscSearch::Auto,
            search_gap: 1e-6,
            path_nodes: 33,
            max_path_nodes: 257,
            quad_points: 4,
            refine_delta: 0.05,
            set_targets: 64,
            curve_sweeps: 40,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.into()));
        if self.degree == 0 || self.degree > 32 {
            return bad("degree must be in 1..=32");
        }
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return bad("margin must be in (0, 1)");
        }
        if self.boundary_samples < 8 || self.certify_samples < 8 {
            return bad("at least 8 boundary samples are required");
        }
        if self.multistarts == 0 || self.max_evals == 0 {
            return bad("multistarts and max_evals must be positive");
        }
        if self.path_nodes < 2 || self.max_path_nodes < self.path_nodes {
            return bad("need 2 <= path_nodes <= max_path_nodes");
        }
        if !(1..=4).contains(&self.quad_points) {
            return bad("quad_points must be in 1..=4");
        }
        if self.set_targets == 0 {
            return bad("set_targets must be positive");
        }
        if !(self.search_gap >= 0.0) || !(self.refine_delta >= 0.0) {
            return bad("tolerances must be nonnegative");
        }
        Ok(())
    }

    /// A cheaper profile for quick interactive runs.
    pub fn fast() -> Self {
        Self {
            multistarts: 4,
            max_evals: 1500,
            certify_samples: 1024,
            curve_sweeps: 15,
            ..Self::default()
        }
    }
}
