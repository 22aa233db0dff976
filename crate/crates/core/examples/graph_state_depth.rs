//! Minimal depth of a few graph states on a two-lane footprint.
//!
//!     cargo run --example graph_state_depth

use las_synth::driver::{graph_state_spec, search_depth, Graph, SearchPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graphs = [
        ("path", Graph::new(4, vec![[0, 1], [1, 2], [2, 3]])?),
        ("star", Graph::new(4, vec![[0, 1], [0, 2], [0, 3]])?),
        (
            "K4",
            Graph::new(4, vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])?,
        ),
        ("triangle+leaf", Graph::new(5, vec![[0, 1], [1, 2], [2, 0], [3, 4]])?),
    ];
    for (name, g) in graphs {
        let spec = graph_state_spec(&g, 2);
        let out = search_depth(&spec, (g.nodes, 2), 3, &SearchPlan::default())?;
        println!(
            "{name:>14}: depth {} ({} solves, minimal: {})",
            out.depth,
            out.transcript.len(),
            out.bracketed
        );
    }
    Ok(())
}
