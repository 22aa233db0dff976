//! Parallel exploration of port permutations.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use itertools::Itertools;

use super::plan::SearchPlan;
use super::search::SearchOutcome;
use super::{attempt, Design, Record, Synthesis};
use crate::error::DriverError;
use crate::spec::{validate_spec, SubroutineSpec};

/// Permutations of `0..n_ports` that only shuffle ports within each group,
/// identity first, at most `limit` of them.
pub fn symmetric_permutations(n_ports: usize, groups: &[Vec<usize>], limit: usize) -> Vec<Vec<usize>> {
    let per_group: Vec<Vec<Vec<usize>>> = groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()).collect())
        .collect();
    let identity: Vec<usize> = (0..n_ports).collect();
    if per_group.is_empty() {
        return vec![identity];
    }
    per_group
        .into_iter()
        .multi_cartesian_product()
        .map(|choice| {
            let mut perm = identity.clone();
            for (group, image) in groups.iter().zip(choice) {
                for (&slot, src) in group.iter().zip(image) {
                    perm[slot] = src;
                }
            }
            perm
        })
        .take(limit)
        .collect()
}

/// Port `i` of the result sits where port `perm[i]` sat; labels and flow
/// columns stay with their logical port.
pub fn permute_ports(spec: &SubroutineSpec, perm: &[usize]) -> Result<SubroutineSpec, DriverError> {
    let n = spec.ports.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(DriverError::Plan(format!("{perm:?} is not a permutation of {n} ports")));
    }
    let mut out = spec.clone();
    for (i, &src) in perm.iter().enumerate() {
        let from = &spec.ports[src];
        let to = &mut out.ports[i];
        to.location = from.location;
        to.direction = from.direction;
        to.z_basis_dir = from.z_basis_dir;
    }
    Ok(out)
}

/// Solve one variant per permutation on `plan.jobs` workers. The
/// satisfiable permutation with the lowest index wins; jobs that can no
/// longer win are cancelled. The transcript is in permutation order.
pub fn explore_ports(
    spec: &SubroutineSpec,
    permutations: &[Vec<usize>],
    plan: &SearchPlan,
) -> Result<SearchOutcome, DriverError> {
    plan.check()?;
    let config = plan.solver.config();
    let variants: Vec<SubroutineSpec> = permutations
        .iter()
        .map(|p| permute_ports(spec, p))
        .collect::<Result<_, _>>()?;
    let n = variants.len();
    let next = AtomicUsize::new(0);
    let winner = AtomicUsize::new(usize::MAX);
    let cancels: Vec<Arc<AtomicBool>> = (0..n).map(|_| Arc::new(AtomicBool::new(false))).collect();
    let transcript: Mutex<Vec<Record>> = Mutex::new(Vec::new());
    let designs: Mutex<Vec<Option<Design>>> = Mutex::new(vec![None; n]);
    let failure: Mutex<Option<DriverError>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..plan.jobs.min(n) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= n || idx > winner.load(Ordering::SeqCst) {
                    break;
                }
                let variant = &variants[idx];
                if let Some(d) = validate_spec(variant).first() {
                    let e = variant.extents;
                    let mut r = Record::skipped(variant, [e.n_i, e.n_j, e.n_k], d.to_string());
                    r.permutation = Some(idx);
                    transcript.lock().unwrap().push(r);
                    continue;
                }
                match attempt(variant, &config, Some(cancels[idx].clone())) {
                    Ok((out, mut record)) => {
                        record.permutation = Some(idx);
                        if let Synthesis::Sat(d) = out {
                            winner.fetch_min(idx, Ordering::SeqCst);
                            for c in &cancels[idx + 1..] {
                                c.store(true, Ordering::SeqCst);
                            }
                            designs.lock().unwrap()[idx] = Some(*d);
                        }
                        transcript.lock().unwrap().push(record);
                    }
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        for c in &cancels {
                            c.store(true, Ordering::SeqCst);
                        }
                        winner.store(0, Ordering::SeqCst);
                    }
                }
            });
        }
    });

    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut designs = designs.into_inner().unwrap();
    let mut transcript = transcript.into_inner().unwrap();
    transcript.sort_by_key(|r| r.permutation);
    let best_idx = designs.iter().position(Option::is_some);
    Ok(SearchOutcome {
        best: best_idx.and_then(|i| designs[i].take()),
        transcript,
        optimal: false,
        permutation: best_idx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::optimize_volume;
    use crate::spec::parse_spec;

    fn cnot() -> SubroutineSpec {
        parse_spec(include_str!("../../specs/cnot.json")).unwrap()
    }

    #[test]
    fn permutations_within_groups() {
        let perms = symmetric_permutations(4, &[vec![0, 1], vec![2, 3]], 10);
        assert_eq!(perms.len(), 4);
        assert_eq!(perms[0], [0, 1, 2, 3]);
        assert!(perms.contains(&vec![1, 0, 3, 2]));
        assert_eq!(symmetric_permutations(3, &[], 5), [vec![0, 1, 2]]);
        assert_eq!(symmetric_permutations(4, &[vec![0, 1, 2, 3]], 5).len(), 5);
    }

    #[test]
    fn bad_permutation_is_rejected() {
        assert!(permute_ports(&cnot(), &[0, 0, 1, 2]).is_err());
        assert!(permute_ports(&cnot(), &[0, 1]).is_err());
    }

    #[test]
    fn swapped_cnot_inputs_stay_satisfiable() {
        let plan = SearchPlan {
            jobs: 2,
            ..Default::default()
        };
        let perms = vec![vec![1, 0, 2, 3], vec![0, 1, 2, 3]];
        let out = explore_ports(&cnot(), &perms, &plan).unwrap();
        assert_eq!(out.permutation, Some(0));
        let best = out.best.unwrap();
        assert_eq!(best.spec.ports[0].label, "control_in");
        assert_eq!(best.spec.ports[0].location, cnot().ports[1].location);
    }

    #[test]
    fn single_permutation_matches_a_plain_solve() {
        let plan = SearchPlan {
            axes: vec![],
            ..Default::default()
        };
        let a = explore_ports(&cnot(), &[vec![0, 1, 2, 3]], &plan).unwrap();
        let b = optimize_volume(&cnot(), &plan).unwrap();
        assert_eq!(a.best.unwrap().lasre, b.best.unwrap().lasre);
        assert_eq!(a.transcript.len(), b.transcript.len());
        assert_eq!(a.transcript[0].verdict, b.transcript[0].verdict);
    }
}
