//! Verify a design against its flows, then against a flow it does not
//! realize.
//!
//!     cargo run --example verify_design

use las_synth::driver::{synthesize, Synthesis};
use las_synth::lasre::check_validity;
use las_synth::sat::SolverConfig;
use las_synth::spec::{parse_spec, StabilizerFlow};
use las_synth::verifier::{verify_lasre, SignMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse_spec(include_str!("../specs/cnot.json"))?;
    let Synthesis::Sat(design) = synthesize(&spec, &SolverConfig::default(), None)? else {
        return Err("cnot should be satisfiable".into());
    };
    let mut lasre = design.lasre;
    println!("validity diagnostics: {}", check_validity(&lasre).len());

    for mode in [SignMode::Flexible, SignMode::Strict] {
        let report = verify_lasre(&lasre, mode)?;
        println!("{mode:?}: all satisfied = {}", report.all_satisfied());
    }

    // Z on the target alone is not preserved by a CNOT.
    lasre.stabilizers[1] = "IZIZ".parse::<StabilizerFlow>()?;
    let report = verify_lasre(&lasre, SignMode::Flexible)?;
    for f in report.flows.iter().filter(|f| !f.member) {
        println!("not realized: {}", f.flow);
    }
    Ok(())
}
