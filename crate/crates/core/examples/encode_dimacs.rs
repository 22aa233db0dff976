//! Encode a spec to DIMACS and print its size. Defaults to the 15-to-1
//! T-factory.
//!
//!     cargo run --example encode_dimacs -- [SPEC] [OUT.cnf]

use las_synth::encoder::{encode, EncodeOptions};
use las_synth::sat::write_dimacs;
use las_synth::spec::parse_spec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let text = match args.next() {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("../specs/t_factory_99.json").to_string(),
    };
    let spec = parse_spec(&text)?;
    let (table, cnf) = encode(&spec, &EncodeOptions::default());
    println!("{}: volume {}, {} flows", spec.name, spec.volume(), spec.n_stab());
    println!(
        "variables: table {}, live {}, auxiliary {}",
        table.len(),
        cnf.num_live(),
        cnf.num_aux()
    );
    println!("cnf: {} variables, {} clauses", cnf.num_vars, cnf.clauses.len());

    if let Some(out) = args.next() {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&out)?);
        let bytes = write_dimacs(&cnf, &mut f)?;
        println!("wrote {out} ({bytes} bytes)");
    }
    Ok(())
}
