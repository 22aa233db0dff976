//! The embedded CDCL solver against brute force and an external solver.
//! The acceptance suite repeats the external comparison on 100 instances.

mod common;

use common::props::{external_agreement, external_solver, random_3cnf, satisfies};
use las_synth::sat::{solve_cdcl, CdclOptions, CdclOutcome};

fn brute_force(n: usize, clauses: &[Vec<i32>]) -> bool {
    (0u32..1 << n).any(|bits| {
        let model: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        satisfies(clauses, &model)
    })
}

#[test]
fn embedded_matches_brute_force() {
    let instances = 200;
    let mut sat = 0;
    for seed in 0..instances {
        let n = 4 + seed as usize % 9;
        let clauses = random_3cnf(seed, n, 3.0..6.5);
        let expected = brute_force(n, &clauses);
        match solve_cdcl(
            n,
            &clauses,
            &CdclOptions {
                seed,
                ..Default::default()
            },
        ) {
            CdclOutcome::Sat(m) => {
                assert!(expected, "instance {seed}: embedded says sat, brute force disagrees");
                assert!(satisfies(&clauses, &m), "instance {seed}: bad model");
                sat += 1;
            }
            CdclOutcome::Unsat => assert!(!expected, "instance {seed}: embedded says unsat"),
            other => panic!("instance {seed}: {other:?}"),
        }
    }
    assert!(sat > 40 && sat < instances - 40, "unbalanced sample: {sat} sat");
}

#[test]
fn embedded_matches_external_on_50_variable_instances() {
    let Some(command) = external_solver() else {
        eprintln!("python3 with sympy not found; skipping");
        return;
    };
    let sat = external_agreement(&command, 20).unwrap();
    assert!(sat > 0 && sat < 20, "unbalanced sample: {sat} sat");
}
