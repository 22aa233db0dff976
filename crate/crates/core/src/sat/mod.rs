//! Solver backends and model back-substitution.

pub mod cdcl;
pub mod dimacs;
pub mod external;

use std::fmt;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use cdcl::{solve_cdcl, CdclOptions, CdclOutcome};
pub use dimacs::{parse_dimacs, to_dimacs_string, write_dimacs};
pub use external::{parse_solver_output, run_command};

use crate::encoder::{CnfInstance, VarTable};
use crate::error::SatError;

/// Environment variable naming the default external solver command.
pub const SOLVER_ENV: &str = "LAS_SYNTH_SOLVER";

pub const DEFAULT_EMBEDDED_CUTOFF: usize = 5000;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(600);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    Timeout,
    Cancelled,
    SolverError(String),
    TooLarge { vars: usize, cutoff: usize },
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::Timeout => write!(f, "timeout"),
            UnknownReason::Cancelled => write!(f, "cancelled"),
            UnknownReason::SolverError(e) => write!(f, "solver error: {e}"),
            UnknownReason::TooLarge { vars, cutoff } => {
                write!(f, "{vars} variables exceed the embedded cutoff of {cutoff}")
            }
        }
    }
}

/// Solver verdict. A `Sat` model holds one value per CNF variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Vec<bool>),
    Unsat,
    Unknown(UnknownReason),
}

impl SatResult {
    pub fn verdict(&self) -> &'static str {
        match self {
            SatResult::Sat(_) => "sat",
            SatResult::Unsat => "unsat",
            SatResult::Unknown(_) => "unknown",
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// In-process CDCL, refusing instances above `max_vars`.
    Embedded { max_vars: usize },
    /// Command template with optional `{cnf}` and `{seed}` placeholders;
    /// the CNF path is appended when `{cnf}` is absent.
    External { command: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub backend: Backend,
    pub timeout: Duration,
    pub seed: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::embedded(DEFAULT_EMBEDDED_CUTOFF)
    }
}

impl SolverConfig {
    pub fn embedded(max_vars: usize) -> Self {
        SolverConfig {
            backend: Backend::Embedded { max_vars },
            timeout: DEFAULT_TIMEOUT,
            seed: None,
        }
    }

    pub fn external(command: &str) -> Self {
        SolverConfig {
            backend: Backend::External {
                command: command.to_string(),
            },
            timeout: DEFAULT_TIMEOUT,
            seed: None,
        }
    }

    /// External solver from the environment, else the embedded solver.
    pub fn from_env() -> Self {
        match std::env::var(SOLVER_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => SolverConfig::external(&cmd),
            _ => SolverConfig::default(),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Solve in-process.
pub fn solve_embedded(
    cnf: &CnfInstance,
    max_vars: usize,
    timeout: Duration,
    seed: u64,
    cancel: Option<Arc<AtomicBool>>,
) -> SatResult {
    if cnf.num_vars > max_vars {
        return SatResult::Unknown(UnknownReason::TooLarge {
            vars: cnf.num_vars,
            cutoff: max_vars,
        });
    }
    let options = CdclOptions {
        seed,
        deadline: Some(Instant::now() + timeout),
        cancel,
    };
    match solve_cdcl(cnf.num_vars, &cnf.clauses, &options) {
        CdclOutcome::Sat(m) => SatResult::Sat(m),
        CdclOutcome::Unsat => SatResult::Unsat,
        CdclOutcome::Timeout => SatResult::Unknown(UnknownReason::Timeout),
        CdclOutcome::Cancelled => SatResult::Unknown(UnknownReason::Cancelled),
    }
}

/// Write `cnf` to a private temporary file and run an external solver on it.
pub fn run_external(config: &SolverConfig, cnf: &CnfInstance, cancel: Option<&Arc<AtomicBool>>) -> SatResult {
    let Backend::External { command } = &config.backend else {
        return SatResult::Unknown(UnknownReason::SolverError("not an external backend".into()));
    };
    let dir = std::env::temp_dir();
    let path = dir.join(format!(
        "las-synth-{}-{}.cnf",
        std::process::id(),
        TEMP_COUNTER.fetch_add(1, std::sync::atomic::Ordering::Relaxed)
    ));
    let written = std::fs::File::create(&path).and_then(|mut f| write_dimacs(cnf, &mut f));
    if let Err(e) = written {
        return SatResult::Unknown(UnknownReason::SolverError(format!("cannot write CNF: {e}")));
    }
    let result = run_command(command, &path, config.seed, config.timeout, cancel);
    let _ = std::fs::remove_file(&path);
    result
}

static TEMP_COUNTER: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Solve with the configured backend. Satisfying models are checked
/// against every clause before being returned.
pub fn solve(cnf: &CnfInstance, config: &SolverConfig, cancel: Option<Arc<AtomicBool>>) -> SatResult {
    if cnf.is_trivially_unsat() {
        return SatResult::Unsat;
    }
    let result = match &config.backend {
        Backend::Embedded { max_vars } => {
            solve_embedded(cnf, *max_vars, config.timeout, config.seed.unwrap_or(0), cancel)
        }
        Backend::External { .. } => run_external(config, cnf, cancel.as_ref()),
    };
    match result {
        SatResult::Sat(m) if m.len() != cnf.num_vars || !cnf.is_satisfied_by(&m) => {
            SatResult::Unknown(UnknownReason::SolverError("model violates the CNF".into()))
        }
        other => other,
    }
}

/// Total assignment over the variable table from a satisfying result.
pub fn back_substitute(result: &SatResult, cnf: &CnfInstance, table: &VarTable) -> Result<Vec<bool>, SatError> {
    let SatResult::Sat(model) = result else {
        return Err(SatError::NotSat);
    };
    if cnf.bindings.len() != table.len() {
        return Err(SatError::BackSubstitution(format!(
            "CNF records {} variables, table has {}",
            cnf.bindings.len(),
            table.len()
        )));
    }
    cnf.back_substitute(model).map_err(SatError::BackSubstitution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::formula::BoolFormula as F;
    use crate::encoder::{to_cnf_with, CnfOptions};

    #[test]
    fn constant_and_negated_bindings() {
        // x0 pinned; x2 = !x1 with x1 as representative; x1 and x3 stay live.
        let fs = [
            F::var(0),
            F::differs(F::var(1), F::var(2)),
            F::Or(vec![F::var(2), F::var(3)]),
        ];
        let cnf = to_cnf_with(&fs, 4, &CnfOptions::default());
        let table = VarTable::new(crate::spec::Extents::new(1, 1, 1), 0);
        assert!(back_substitute(&SatResult::Sat(vec![true, false]), &cnf, &table).is_err());
        let values = cnf.back_substitute(&[true, false]).unwrap();
        assert_eq!(values, vec![true, true, false, false]);
    }

    #[test]
    fn embedded_cutoff() {
        let fs = [F::Or(vec![F::var(0), F::var(1)])];
        let cnf = to_cnf_with(&fs, 2, &CnfOptions::default());
        let r = solve(&cnf, &SolverConfig::embedded(1), None);
        assert!(matches!(r, SatResult::Unknown(UnknownReason::TooLarge { .. })));
        assert!(solve(&cnf, &SolverConfig::embedded(10), None).is_sat());
    }
}
