//! The encoder and the independent checker must agree on every assignment.

mod common;

use std::sync::OnceLock;

use common::{load_spec, props, solved_assignment};
use las_synth::driver::{graph_state_spec, Graph};
use las_synth::spec::SubroutineSpec;
use proptest::prelude::*;

fn specs() -> &'static [(SubroutineSpec, Vec<bool>)] {
    static CACHE: OnceLock<Vec<(SubroutineSpec, Vec<bool>)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let path = Graph::new(3, vec![[0, 1], [1, 2]]).unwrap();
        let mut out: Vec<SubroutineSpec> = ["identity", "cnot"].into_iter().map(load_spec).collect();
        out.push(graph_state_spec(&path, 2));
        out.into_iter()
            .map(|s| {
                let a = solved_assignment(&s, 0);
                (s, a)
            })
            .collect()
    })
}

fn indices(flips: &[prop::sample::Index]) -> Vec<usize> {
    flips.iter().map(|f| f.index(usize::MAX)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn validity_formulas_match_the_checker(which in 0usize..3, flips in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let (spec, base) = &specs()[which];
        if let Err(msg) = props::double_entry(spec, base, &indices(&flips)) {
            prop_assert!(false, "{msg}");
        }
    }

    #[test]
    fn cnf_agrees_with_formulas(which in 0usize..3, flips in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let (spec, base) = &specs()[which];
        if let Err(msg) = props::cnf_matches_formulas(spec, base, &indices(&flips)) {
            prop_assert!(false, "{msg}");
        }
    }
}
