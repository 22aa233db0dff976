//! Volume descent/ascent and depth search.

use std::collections::BTreeMap;

use super::plan::{SearchMode, SearchPlan};
use super::resize::{grow, resize, shrink};
use super::{attempt, Design, Record, Synthesis};
use crate::error::DriverError;
use crate::sat::SolverConfig;
use crate::spec::{Axis, SubroutineSpec};

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub best: Option<Design>,
    pub transcript: Vec<Record>,
    /// The next smaller variant of `best` was proven unsatisfiable along
    /// every searched axis.
    pub optimal: bool,
    /// Winning permutation index, for port exploration.
    pub permutation: Option<usize>,
}

fn extents_of(spec: &SubroutineSpec) -> [usize; 3] {
    let e = spec.extents;
    [e.n_i, e.n_j, e.n_k]
}

/// Runs variants at most once each.
struct Runner<'a> {
    config: &'a SolverConfig,
    transcript: Vec<Record>,
    seen: BTreeMap<[usize; 3], usize>,
}

enum Step {
    Sat(Box<Design>),
    Unsat,
    Unknown,
    Skipped,
    Repeat,
}

impl<'a> Runner<'a> {
    fn new(config: &'a SolverConfig) -> Self {
        Runner {
            config,
            transcript: Vec::new(),
            seen: BTreeMap::new(),
        }
    }

    fn run(&mut self, spec: &SubroutineSpec) -> Result<Step, DriverError> {
        let e = extents_of(spec);
        if self.seen.contains_key(&e) {
            return Ok(Step::Repeat);
        }
        let (out, record) = attempt(spec, self.config, None)?;
        self.seen.insert(e, self.transcript.len());
        self.transcript.push(record);
        Ok(match out {
            Synthesis::Sat(d) => Step::Sat(d),
            Synthesis::Unsat => Step::Unsat,
            Synthesis::Unknown(_) => Step::Unknown,
        })
    }

    fn try_variant(
        &mut self,
        variant: Result<SubroutineSpec, DriverError>,
        from: &SubroutineSpec,
        target: [usize; 3],
    ) -> Result<Step, DriverError> {
        match variant {
            Ok(spec) => self.run(&spec),
            Err(e) => {
                if !self.seen.contains_key(&target) {
                    self.seen.insert(target, self.transcript.len());
                    self.transcript.push(Record::skipped(from, target, e.to_string()));
                }
                Ok(Step::Skipped)
            }
        }
    }

    fn verdict_at(&self, e: [usize; 3]) -> Option<&str> {
        self.seen.get(&e).map(|&i| self.transcript[i].verdict.as_str())
    }
}

fn smaller(e: [usize; 3], axis: Axis) -> [usize; 3] {
    let mut out = e;
    out[axis.index()] = out[axis.index()].saturating_sub(1);
    out
}

/// Shrink (descend) or grow (ascend) the spec's extents along the plan's
/// axes, solving each variant once.
pub fn optimize_volume(spec: &SubroutineSpec, plan: &SearchPlan) -> Result<SearchOutcome, DriverError> {
    plan.check()?;
    let config = plan.solver.config();
    let start = match plan.initial_extents {
        Some(e) => resize(spec, e)?,
        None => spec.clone(),
    };
    let mut runner = Runner::new(&config);
    match plan.mode {
        SearchMode::Descend => descend(start, plan, &mut runner),
        SearchMode::Ascend => ascend(start, plan, &mut runner),
        other => Err(DriverError::Plan(format!("optimize_volume cannot run mode {other:?}"))),
    }
}

fn descend(start: SubroutineSpec, plan: &SearchPlan, runner: &mut Runner) -> Result<SearchOutcome, DriverError> {
    let mut best = match runner.run(&start)? {
        Step::Sat(d) => *d,
        Step::Unsat => return ascend(start, plan, runner),
        _ => return Ok(outcome(None, runner, false)),
    };
    // Coordinate descent until a full pass over the axes improves nothing.
    loop {
        let mut improved = false;
        for &axis in &plan.axes {
            loop {
                let target = smaller(extents_of(&best.spec), axis);
                match runner.try_variant(shrink(&best.spec, axis), &best.spec, target)? {
                    Step::Sat(d) => {
                        best = *d;
                        improved = true;
                    }
                    _ => break,
                }
            }
        }
        if !improved {
            break;
        }
    }
    let e = extents_of(&best.spec);
    let optimal = !plan.axes.is_empty()
        && plan
            .axes
            .iter()
            .all(|a| runner.verdict_at(smaller(e, *a)) == Some("unsat"));
    Ok(outcome(Some(best), runner, optimal))
}

fn ascend(start: SubroutineSpec, plan: &SearchPlan, runner: &mut Runner) -> Result<SearchOutcome, DriverError> {
    if plan.axes.is_empty() {
        return Err(DriverError::Plan("ascending needs at least one axis".into()));
    }
    let mut cur = start;
    let mut grown: Option<Axis> = None;
    for step in 0..=plan.growth_limit {
        if let Step::Sat(d) = runner.run(&cur)? {
            let e = extents_of(&cur);
            let optimal = grown.is_some_and(|a| runner.verdict_at(smaller(e, a)) == Some("unsat"));
            return Ok(outcome(Some(*d), runner, optimal));
        }
        let axis = plan.axes[step % plan.axes.len()];
        cur = grow(&cur, axis)?;
        grown = Some(axis);
    }
    Ok(outcome(None, runner, false))
}

fn outcome(best: Option<Design>, runner: &mut Runner, optimal: bool) -> SearchOutcome {
    SearchOutcome {
        best,
        transcript: std::mem::take(&mut runner.transcript),
        optimal,
        permutation: None,
    }
}

#[derive(Clone, Debug)]
pub struct DepthOutcome {
    pub depth: usize,
    pub design: Design,
    pub transcript: Vec<Record>,
    /// Depth `depth - 1` was proven unsatisfiable.
    pub bracketed: bool,
}

/// Linear depth search on a fixed footprint: start at `k0`, step down while
/// satisfiable and up while not, until the minimal satisfiable depth is
/// found.
pub fn search_depth(
    template: &SubroutineSpec,
    footprint: (usize, usize),
    k0: usize,
    plan: &SearchPlan,
) -> Result<DepthOutcome, DriverError> {
    plan.check()?;
    let config = plan.solver.config();
    let (floor, ceiling) = (plan.depth_floor, plan.depth_ceiling);
    let base = resize(template, [footprint.0, footprint.1, template.extents.n_k])?;
    let mut runner = Runner::new(&config);
    let at = |d: usize, runner: &mut Runner| -> Result<Step, DriverError> {
        let target = [footprint.0, footprint.1, d];
        runner.try_variant(resize(&base, target), &base, target)
    };

    let mut d = k0.clamp(floor, ceiling);
    let mut below_unsat = false;
    let (mut depth, mut design) = match at(d, &mut runner)? {
        Step::Sat(design) => (d, *design),
        _ => {
            let mut last_unsat = runner.verdict_at([footprint.0, footprint.1, d]) == Some("unsat");
            loop {
                d += 1;
                if d > ceiling {
                    return Err(DriverError::DepthCeiling(ceiling));
                }
                match at(d, &mut runner)? {
                    Step::Sat(design) => {
                        below_unsat = last_unsat;
                        break (d, *design);
                    }
                    Step::Unsat => last_unsat = true,
                    _ => last_unsat = false,
                }
            }
        }
    };
    if !below_unsat {
        while depth > floor {
            match at(depth - 1, &mut runner)? {
                Step::Sat(smaller) => {
                    depth -= 1;
                    design = *smaller;
                }
                Step::Unsat => {
                    below_unsat = true;
                    break;
                }
                _ => break,
            }
        }
    }
    Ok(DepthOutcome {
        depth,
        design,
        transcript: runner.transcript,
        bracketed: below_unsat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn spec(name: &str) -> SubroutineSpec {
        let text = match name {
            "cnot" => include_str!("../../specs/cnot.json"),
            _ => include_str!("../../specs/identity.json"),
        };
        parse_spec(text).unwrap()
    }

    #[test]
    fn cnot_descent_is_optimal_at_its_published_extents() {
        let plan = SearchPlan {
            axes: vec![Axis::I],
            ..Default::default()
        };
        let out = optimize_volume(&spec("cnot"), &plan).unwrap();
        assert_eq!(out.best.unwrap().spec.extents, spec("cnot").extents);
        let verdicts: Vec<&str> = out.transcript.iter().map(|r| r.verdict.as_str()).collect();
        assert_eq!(verdicts, ["sat", "unsat"]);
        assert!(out.optimal);
    }

    #[test]
    fn infeasible_shrink_is_recorded_as_skipped() {
        let plan = SearchPlan {
            axes: vec![Axis::I, Axis::K],
            ..Default::default()
        };
        let out = optimize_volume(&spec("identity"), &plan).unwrap();
        let verdicts: Vec<&str> = out.transcript.iter().map(|r| r.verdict.as_str()).collect();
        assert_eq!(verdicts, ["sat", "skipped", "skipped"]);
        assert!(!out.optimal);
    }

    #[test]
    fn identity_ascends_to_sat_at_the_floor() {
        let plan = SearchPlan {
            mode: SearchMode::Ascend,
            axes: vec![Axis::K],
            ..Default::default()
        };
        let out = optimize_volume(&spec("identity"), &plan).unwrap();
        assert_eq!(out.transcript.len(), 1);
        assert_eq!(out.best.unwrap().spec.volume(), 1);
        assert!(!out.optimal);
    }

    #[test]
    fn cnot_depth_is_bracketed() {
        let plan = SearchPlan::default();
        let out = search_depth(&spec("cnot"), (2, 2), 3, &plan).unwrap();
        assert_eq!(out.depth, 3);
        assert!(out.bracketed);
        let verdicts: Vec<&str> = out.transcript.iter().map(|r| r.verdict.as_str()).collect();
        assert_eq!(verdicts, ["sat", "unsat"]);
    }

    #[test]
    fn descent_from_an_unsat_start_switches_to_ascent() {
        let plan = SearchPlan {
            axes: vec![Axis::K],
            initial_extents: Some([2, 2, 2]),
            ..Default::default()
        };
        let out = optimize_volume(&spec("cnot"), &plan).unwrap();
        let best = out.best.unwrap();
        assert_eq!(best.spec.extents, spec("cnot").extents);
        assert!(out.optimal);
    }
}
