//! Search loops over repeated synthesis calls.

mod explore;
mod graph;
mod plan;
mod resize;
mod search;

pub use explore::{explore_ports, permute_ports, symmetric_permutations};
pub use graph::{graph_state_spec, Graph};
pub use plan::{SearchMode, SearchPlan, SolverPlan};
pub use resize::{grow, resize, shrink};
pub use search::{optimize_volume, search_depth, DepthOutcome, SearchOutcome};

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::encoder::{encode, EncodeOptions};
use crate::error::DriverError;
use crate::lasre::{check_validity, color_k_pipes, decode, prune, Lasre};
use crate::sat::{back_substitute, solve, SatResult, SolverConfig, UnknownReason};
use crate::spec::SubroutineSpec;
use crate::verifier::{verify_lasre, FlowReport, SignMode};

/// A verified design together with the spec variant it solves.
#[derive(Clone, Debug)]
pub struct Design {
    pub spec: SubroutineSpec,
    pub lasre: Lasre,
    pub report: FlowReport,
}

#[derive(Clone, Debug)]
pub enum Synthesis {
    Sat(Box<Design>),
    Unsat,
    Unknown(UnknownReason),
}

impl Synthesis {
    pub fn verdict(&self) -> &'static str {
        match self {
            Synthesis::Sat(_) => "sat",
            Synthesis::Unsat => "unsat",
            Synthesis::Unknown(_) => "unknown",
        }
    }
}

/// Encode, solve, decode, prune, color and verify. A satisfiable result is
/// only returned once the design passes both independent checks.
pub fn synthesize(
    spec: &SubroutineSpec,
    config: &SolverConfig,
    cancel: Option<Arc<AtomicBool>>,
) -> Result<Synthesis, DriverError> {
    let (table, cnf) = encode(spec, &EncodeOptions::default());
    let result = solve(&cnf, config, cancel);
    match result {
        SatResult::Unsat => return Ok(Synthesis::Unsat),
        SatResult::Unknown(r) => return Ok(Synthesis::Unknown(r)),
        SatResult::Sat(_) => {}
    }
    let assignment = back_substitute(&result, &cnf, &table)?;
    let lasre = color_k_pipes(&prune(&decode(&assignment, spec)))?;
    if let Some(d) = check_validity(&lasre).first() {
        return Err(DriverError::SelfCheck(d.to_string()));
    }
    let report = verify_lasre(&lasre, SignMode::default())?;
    if !report.all_satisfied() {
        let missing: Vec<&str> = report
            .flows
            .iter()
            .filter(|f| !f.member)
            .map(|f| f.flow.as_str())
            .collect();
        return Err(DriverError::SelfCheck(format!(
            "flows not realized: {}",
            missing.join(", ")
        )));
    }
    Ok(Synthesis::Sat(Box::new(Design {
        spec: spec.clone(),
        lasre,
        report,
    })))
}

/// One solved (or skipped) spec variant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub variant: String,
    pub extents: [usize; 3],
    pub volume: usize,
    /// `sat`, `unsat`, `unknown` or `skipped`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<usize>,
    pub wall_secs: f64,
}

impl Record {
    pub fn is(&self, verdict: &str) -> bool {
        self.verdict == verdict
    }

    fn skipped(spec: &SubroutineSpec, extents: [usize; 3], reason: String) -> Self {
        Record {
            variant: variant_name(&spec.name, extents),
            extents,
            volume: 0,
            verdict: "skipped".into(),
            reason: Some(reason),
            permutation: None,
            wall_secs: 0.0,
        }
    }
}

pub fn variant_name(name: &str, e: [usize; 3]) -> String {
    format!("{name}@{}x{}x{}", e[0], e[1], e[2])
}

pub fn transcript_jsonl(records: &[Record]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serialization is infallible") + "\n")
        .collect()
}

/// Run one variant and record it.
fn attempt(
    spec: &SubroutineSpec,
    config: &SolverConfig,
    cancel: Option<Arc<AtomicBool>>,
) -> Result<(Synthesis, Record), DriverError> {
    let start = Instant::now();
    let out = synthesize(spec, config, cancel)?;
    let e = spec.extents;
    let record = Record {
        variant: variant_name(&spec.name, [e.n_i, e.n_j, e.n_k]),
        extents: [e.n_i, e.n_j, e.n_k],
        volume: spec.volume(),
        verdict: out.verdict().into(),
        reason: match &out {
            Synthesis::Unknown(r) => Some(r.to_string()),
            _ => None,
        },
        permutation: None,
        wall_secs: start.elapsed().as_secs_f64(),
    };
    Ok((out, record))
}
