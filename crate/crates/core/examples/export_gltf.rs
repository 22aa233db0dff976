//! Render a synthesized design to glTF, plain and with the correlation
//! surface of one flow overlaid.
//!
//!     cargo run --example export_gltf -- [OUT_DIR]

use std::path::PathBuf;

use las_synth::driver::{synthesize, Synthesis};
use las_synth::exporter::{check_gltf, render, RenderOptions};
use las_synth::sat::SolverConfig;
use las_synth::spec::parse_spec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let spec = parse_spec(include_str!("../specs/cnot.json"))?;
    let Synthesis::Sat(design) = synthesize(&spec, &SolverConfig::default(), None)? else {
        return Err("cnot should be satisfiable".into());
    };

    for (name, corr) in [("cnot.gltf", None), ("cnot_flow1.gltf", Some(1))] {
        let options = RenderOptions {
            corr,
            elongation: 2.0,
            ..Default::default()
        };
        let bytes = render(&design.lasre, &options)?;
        assert!(check_gltf(&bytes).is_empty());
        let path = out_dir.join(name);
        std::fs::write(&path, &bytes)?;
        println!("wrote {} ({} bytes)", path.display(), bytes.len());
    }
    Ok(())
}
