//! Synthesize a CNOT on a 2x2x3 volume and print the design.
//!
//!     cargo run --example synthesize_cnot

use las_synth::driver::{synthesize, Synthesis};
use las_synth::lasre::serialize_lasre;
use las_synth::sat::SolverConfig;
use las_synth::spec::{parse_spec, Axis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse_spec(include_str!("../specs/cnot.json"))?;
    println!("{}: {} ports, volume {}", spec.name, spec.ports.len(), spec.volume());

    // LAS_SYNTH_SOLVER selects an external DIMACS solver when set.
    let design = match synthesize(&spec, &SolverConfig::from_env(), None)? {
        Synthesis::Sat(d) => d,
        other => return Err(format!("expected a design, got {}", other.verdict()).into()),
    };

    let l = &design.lasre;
    for axis in Axis::ALL {
        let bases: Vec<String> = l
            .pipes()
            .iter()
            .filter(|p| p.axis == axis)
            .map(|p| p.base.to_string())
            .collect();
        println!("{axis} pipes at {}", bases.join(" "));
    }
    for f in &design.report.flows {
        println!("flow {} member={} sign={:?}", f.flow, f.member, f.sign);
    }
    println!("{}", serialize_lasre(l));
    Ok(())
}
