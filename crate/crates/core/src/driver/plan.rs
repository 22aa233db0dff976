//! Search plan file.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::DriverError;
use crate::sat::{SolverConfig, DEFAULT_EMBEDDED_CUTOFF, SOLVER_ENV};
use crate::spec::Axis;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    #[default]
    Descend,
    Ascend,
    DepthSearch,
    PortExplore,
}

/// Solver settings applied to every job of a plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverPlan {
    /// External command template; falls back to the environment, then to
    /// the embedded solver.
    pub command: Option<String>,
    pub timeout_secs: u64,
    pub seed: Option<u64>,
    /// Variable cutoff for the embedded solver.
    pub max_vars: usize,
}

impl Default for SolverPlan {
    fn default() -> Self {
        SolverPlan {
            command: None,
            timeout_secs: 600,
            seed: None,
            max_vars: DEFAULT_EMBEDDED_CUTOFF,
        }
    }
}

impl SolverPlan {
    pub fn config(&self) -> SolverConfig {
        let env = std::env::var(SOLVER_ENV).ok().filter(|c| !c.trim().is_empty());
        let mut config = match self.command.clone().or(env) {
            Some(cmd) => SolverConfig::external(&cmd),
            None => SolverConfig::embedded(self.max_vars),
        };
        config.timeout = Duration::from_secs(self.timeout_secs);
        config.seed = self.seed;
        config
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchPlan {
    pub mode: SearchMode,
    /// Axes to shrink (descend) or grow (ascend), in order.
    pub axes: Vec<Axis>,
    /// Resize the spec to these extents before searching.
    pub initial_extents: Option<[usize; 3]>,
    /// Ascend stops after this many growth steps.
    pub growth_limit: usize,
    pub k0: usize,
    pub depth_floor: usize,
    pub depth_ceiling: usize,
    /// Groups of functionally interchangeable ports, for port exploration.
    pub symmetry_groups: Vec<Vec<usize>>,
    pub max_permutations: usize,
    pub jobs: usize,
    pub solver: SolverPlan,
}

impl Default for SearchPlan {
    fn default() -> Self {
        SearchPlan {
            mode: SearchMode::Descend,
            axes: vec![Axis::I],
            initial_extents: None,
            growth_limit: 8,
            k0: 3,
            depth_floor: 1,
            depth_ceiling: 12,
            symmetry_groups: vec![],
            max_permutations: 24,
            jobs: 1,
            solver: SolverPlan::default(),
        }
    }
}

impl SearchPlan {
    pub fn from_json(text: &str) -> Result<Self, DriverError> {
        let plan: SearchPlan = serde_json::from_str(text).map_err(|e| DriverError::Plan(e.to_string()))?;
        plan.check()?;
        Ok(plan)
    }

    pub fn check(&self) -> Result<(), DriverError> {
        if self.jobs == 0 {
            return Err(DriverError::Plan("jobs must be at least 1".into()));
        }
        if self.depth_floor == 0 || self.depth_floor > self.depth_ceiling {
            return Err(DriverError::Plan(format!(
                "depth range {}..={} is empty",
                self.depth_floor, self.depth_ceiling
            )));
        }
        if let Some(e) = self.initial_extents {
            if e.contains(&0) {
                return Err(DriverError::Plan("initial extents must be positive".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_defaults_and_overrides() {
        let p = SearchPlan::from_json(r#"{"mode": "depth-search", "axes": ["K"], "jobs": 2}"#).unwrap();
        assert_eq!(p.mode, SearchMode::DepthSearch);
        assert_eq!(p.axes, [Axis::K]);
        assert_eq!(p.k0, 3);
        assert!(SearchPlan::from_json(r#"{"jobs": 0}"#).is_err());
        assert!(SearchPlan::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn solver_plan_builds_config() {
        let plan = SolverPlan {
            command: Some("kissat -q".into()),
            timeout_secs: 5,
            seed: Some(3),
            ..Default::default()
        };
        let c = plan.config();
        assert_eq!(c.timeout, Duration::from_secs(5));
        assert_eq!(c.seed, Some(3));
    }
}
