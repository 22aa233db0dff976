mod common;

use common::dense;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tableau_contraction_matches_dense_state(d in dense::diagram(8, 6)) {
        if let Err(msg) = dense::agrees(&d) {
            prop_assert!(false, "{msg}");
        }
    }
}
