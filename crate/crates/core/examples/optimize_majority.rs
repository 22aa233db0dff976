//! Shrink the majority gate along I until the solver proves the next step
//! impossible. Takes around ten seconds in release mode.
//!
//!     cargo run --release --example optimize_majority

use las_synth::driver::{optimize_volume, transcript_jsonl, SearchPlan};
use las_synth::spec::{parse_spec, Axis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse_spec(include_str!("../specs/majority.json"))?;
    let mut plan = SearchPlan {
        axes: vec![Axis::I],
        ..Default::default()
    };
    plan.solver.max_vars = 100_000;

    let out = optimize_volume(&spec, &plan)?;
    print!("{}", transcript_jsonl(&out.transcript));
    match out.best {
        Some(best) => println!(
            "best volume {} (from {}), proven minimal along I: {}",
            best.spec.volume(),
            spec.volume(),
            out.optimal
        ),
        None => println!("no design found"),
    }
    Ok(())
}
