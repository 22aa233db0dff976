//! Command-line front end. Results go to standard output, diagnostics to
//! standard error as one JSON object per line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::driver::{
    explore_ports, graph_state_spec, optimize_volume, search_depth, symmetric_permutations, synthesize,
    transcript_jsonl, Graph, SearchMode, SearchOutcome, SearchPlan, Synthesis,
};
use crate::error::{DriverError, LasreError, SatError, SpecError, VerifyError};
use crate::exporter::{render, RenderOptions};
use crate::lasre::{color_k_pipes, parse_lasre, serialize_lasre, Lasre};
use crate::sat::{SolverConfig, DEFAULT_EMBEDDED_CUTOFF};
use crate::spec::{parse_spec, SubroutineSpec};
use crate::verifier::{verify_lasre, SignMode};

/// Exit statuses. Satisfiability outcomes follow SAT-competition practice.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const SPEC: i32 = 4;
    pub const DESIGN: i32 = 5;
    pub const FLOWS: i32 = 6;
    pub const VERIFY: i32 = 7;
    pub const PLAN: i32 = 8;
    pub const SOLVER: i32 = 9;
    pub const SELF_CHECK: i32 = 11;
    pub const UNSAT: i32 = 20;
    pub const UNKNOWN: i32 = 30;
}

#[derive(Parser, Debug)]
#[command(
    name = "las-synth",
    version,
    about = "Synthesize, verify and export lattice-surgery subroutines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// External DIMACS solver command; `{cnf}` and `{seed}` are substituted.
    #[arg(long)]
    solver: Option<String>,
    /// Per-solve timeout in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Variable cutoff for the embedded solver.
    #[arg(long, default_value_t = DEFAULT_EMBEDDED_CUTOFF)]
    max_vars: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let mut c = match &self.solver {
            Some(cmd) => SolverConfig::external(cmd),
            None => match SolverConfig::from_env() {
                SolverConfig {
                    backend: crate::sat::Backend::Embedded { .. },
                    ..
                } => SolverConfig::embedded(self.max_vars),
                external => external,
            },
        };
        if let Some(t) = self.timeout {
            c.timeout = Duration::from_secs(t);
        }
        c.seed = self.seed;
        c
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a spec and write the verified design.
    Synth {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Print the flow report of a design.
    Verify {
        design: PathBuf,
        /// Require exact flow signs.
        #[arg(long)]
        strict: bool,
    },
    /// Write a glTF scene of a design.
    Export {
        design: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Overlay the correlation surface of this stabilizer.
        #[arg(long)]
        corr: Option<usize>,
        #[arg(long, default_value_t = 2.0)]
        elongation: f32,
    },
    /// Run a search plan and write the best design.
    Optimize {
        spec: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        /// Transcript destination; standard output when absent.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        timeout: Option<u64>,
        #[arg(long)]
        max_vars: Option<usize>,
    },
    /// Turn a graph into a graph-state spec.
    GraphState {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        lanes: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl ToString) -> Self {
        Failure {
            code,
            kind,
            message: message.to_string(),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::new(exit::SPEC, "spec", e)
    }
}

impl From<LasreError> for Failure {
    fn from(e: LasreError) -> Self {
        Failure::new(exit::DESIGN, "design", e)
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        Failure::new(exit::VERIFY, "verify", e)
    }
}

impl From<SatError> for Failure {
    fn from(e: SatError) -> Self {
        Failure::new(exit::SOLVER, "solver", e)
    }
}

impl From<DriverError> for Failure {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::Spec(e) => e.into(),
            DriverError::Sat(e) => e.into(),
            DriverError::Lasre(e) => e.into(),
            DriverError::Verify(e) => e.into(),
            DriverError::SelfCheck(m) => Failure::new(exit::SELF_CHECK, "self-check", m),
            e @ DriverError::DepthCeiling(_) => Failure::new(exit::UNSAT, "depth-ceiling", e),
            DriverError::Plan(m) => Failure::new(exit::PLAN, "plan", m),
        }
    }
}

fn diag(level: &str, value: serde_json::Value) {
    let mut v = value;
    v["level"] = level.into();
    eprintln!("{v}");
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(exit::IO, "io", format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::new(exit::IO, "io", format!("{}: {e}", path.display())))
}

fn stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

/// Read a design, report rule violations and derive K-pipe colors if the
/// file predates them.
fn load_design(path: &Path) -> Result<(Lasre, usize), Failure> {
    let (lasre, diags) = parse_lasre(&read(path)?)?;
    for d in &diags {
        diag(
            "warning",
            json!({"kind": "validity", "rule": d.rule, "location": d.location, "message": d.message}),
        );
    }
    let lasre = if lasre.is_colored() {
        lasre
    } else {
        color_k_pipes(&lasre)?
    };
    Ok((lasre, diags.len()))
}

fn load_spec(path: &Path) -> Result<SubroutineSpec, Failure> {
    Ok(parse_spec(&read(path)?)?)
}

/// Parse `argv` (program name first), run the subcommand and return the
/// exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            stdout(&e.to_string());
            return exit::OK;
        }
        Err(e) => {
            diag(
                "error",
                json!({"kind": "usage", "code": exit::USAGE, "message": e.to_string().trim()}),
            );
            return exit::USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            diag("error", json!({"kind": f.kind, "code": f.code, "message": f.message}));
            f.code
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Synth { spec, output, solver } => synth(&spec, output.as_deref(), &solver.config()),
        Command::Verify { design, strict } => verify(&design, strict),
        Command::Export {
            design,
            output,
            corr,
            elongation,
        } => {
            // Rule violations are reported but still rendered.
            let (lasre, _) = load_design(&design)?;
            let options = RenderOptions {
                elongation,
                corr,
                ..Default::default()
            };
            let bytes = render(&lasre, &options)?;
            write(&output, &bytes)?;
            stdout(&format!("{}\n", json!({"output": output, "bytes": bytes.len()})));
            Ok(exit::OK)
        }
        Command::Optimize {
            spec,
            plan,
            output,
            transcript,
            jobs,
            solver,
            timeout,
            max_vars,
        } => {
            let spec = load_spec(&spec)?;
            let mut plan = match plan {
                Some(p) => SearchPlan::from_json(&read(&p)?)?,
                None => SearchPlan::default(),
            };
            if let Some(j) = jobs {
                plan.jobs = j;
            }
            if solver.is_some() {
                plan.solver.command = solver;
            }
            if let Some(t) = timeout {
                plan.solver.timeout_secs = t;
            }
            if let Some(m) = max_vars {
                plan.solver.max_vars = m;
            }
            optimize(&spec, &plan, &output, transcript.as_deref())
        }
        Command::GraphState { graph, lanes, output } => {
            let g = Graph::from_json(&read(&graph)?)?;
            let text = graph_state_spec(&g, lanes).to_json() + "\n";
            match output {
                Some(path) => write(&path, text.as_bytes())?,
                None => stdout(&text),
            }
            Ok(exit::OK)
        }
    }
}

fn synth(spec_path: &Path, output: Option<&Path>, config: &SolverConfig) -> Result<i32, Failure> {
    let spec = load_spec(spec_path)?;
    match synthesize(&spec, config, None)? {
        Synthesis::Sat(design) => {
            let text = serialize_lasre(&design.lasre) + "\n";
            let summary = json!({
                "verdict": "sat",
                "name": spec.name,
                "volume": spec.volume(),
                "pipes": design.lasre.pipe_count(),
                "output": output,
            });
            match output {
                Some(path) => {
                    write(path, text.as_bytes())?;
                    stdout(&format!("{summary}\n"));
                }
                None => {
                    diag("info", summary);
                    stdout(&text);
                }
            }
            Ok(exit::OK)
        }
        Synthesis::Unsat => {
            stdout(&format!("{}\n", json!({"verdict": "unsat", "name": spec.name})));
            Ok(exit::UNSAT)
        }
        Synthesis::Unknown(reason) => {
            stdout(&format!(
                "{}\n",
                json!({"verdict": "unknown", "name": spec.name, "reason": reason.to_string()})
            ));
            Ok(exit::UNKNOWN)
        }
    }
}

fn verify(path: &Path, strict: bool) -> Result<i32, Failure> {
    let (lasre, violations) = load_design(path)?;
    let mode = if strict { SignMode::Strict } else { SignMode::Flexible };
    let report = verify_lasre(&lasre, mode)?;
    stdout(&(report.to_json() + "\n"));
    if !report.all_satisfied() {
        for f in report.flows.iter().filter(|f| !f.member) {
            diag(
                "error",
                json!({"kind": "flow", "index": f.index, "flow": f.flow, "message": "not realized"}),
            );
        }
        return Ok(exit::FLOWS);
    }
    if strict && report.flows.iter().any(|f| f.sign == Some(-1)) {
        return Ok(exit::FLOWS);
    }
    if violations > 0 {
        return Ok(exit::DESIGN);
    }
    Ok(exit::OK)
}

fn optimize(
    spec: &SubroutineSpec,
    plan: &SearchPlan,
    output: &Path,
    transcript: Option<&Path>,
) -> Result<i32, Failure> {
    let outcome: SearchOutcome = match plan.mode {
        SearchMode::Descend | SearchMode::Ascend => optimize_volume(spec, plan)?,
        SearchMode::DepthSearch => {
            let e = plan
                .initial_extents
                .unwrap_or([spec.extents.n_i, spec.extents.n_j, spec.extents.n_k]);
            let d = search_depth(spec, (e[0], e[1]), plan.k0, plan)?;
            SearchOutcome {
                optimal: d.bracketed,
                best: Some(d.design),
                transcript: d.transcript,
                permutation: None,
            }
        }
        SearchMode::PortExplore => {
            let perms = symmetric_permutations(spec.ports.len(), &plan.symmetry_groups, plan.max_permutations);
            explore_ports(spec, &perms, plan)?
        }
    };
    let lines = transcript_jsonl(&outcome.transcript);
    match transcript {
        Some(path) => write(path, lines.as_bytes())?,
        None => stdout(&lines),
    }
    let Some(best) = &outcome.best else {
        let all_unsat =
            !outcome.transcript.is_empty() && outcome.transcript.iter().all(|r| r.is("unsat") || r.is("skipped"));
        stdout(&format!("{}\n", json!({"best": null, "optimal": false})));
        return Ok(if all_unsat { exit::UNSAT } else { exit::UNKNOWN });
    };
    write(output, (serialize_lasre(&best.lasre) + "\n").as_bytes())?;
    let e = best.spec.extents;
    stdout(&format!(
        "{}\n",
        json!({
            "best": output,
            "extents": [e.n_i, e.n_j, e.n_k],
            "volume": best.spec.volume(),
            "optimal": outcome.optimal,
            "permutation": outcome.permutation,
        })
    ));
    Ok(exit::OK)
}
