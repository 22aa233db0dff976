//! Try port placements that swap the CNOT's two inputs and two outputs, in
//! parallel, keeping the first satisfiable one.
//!
//!     cargo run --example explore_ports

use las_synth::driver::{explore_ports, symmetric_permutations, SearchPlan};
use las_synth::spec::parse_spec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse_spec(include_str!("../specs/cnot.json"))?;
    let perms = symmetric_permutations(spec.ports.len(), &[vec![0, 1], vec![2, 3]], 24);
    println!("{} placements", perms.len());

    let plan = SearchPlan {
        jobs: 4,
        ..Default::default()
    };
    let out = explore_ports(&spec, &perms, &plan)?;
    for r in &out.transcript {
        let i = r.permutation.unwrap_or_default();
        println!("{:?}: {}", perms[i], r.verdict);
    }
    if let (Some(i), Some(best)) = (out.permutation, out.best) {
        println!("winner {:?}", perms[i]);
        for p in &best.spec.ports {
            println!("  {:<12} at {} {}", p.label, p.location, p.direction);
        }
    }
    Ok(())
}
