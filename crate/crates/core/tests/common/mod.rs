#![allow(dead_code)]

pub mod dense;
pub mod props;

use las_synth::spec::{parse_spec, SubroutineSpec};

pub fn load_spec(name: &str) -> SubroutineSpec {
    let path = format!("{}/specs/{name}.json", env!("CARGO_MANIFEST_DIR"));
    parse_spec(&std::fs::read_to_string(path).unwrap()).unwrap()
}

use las_synth::encoder::{encode, EncodeOptions};
use las_synth::lasre::{decode, Lasre};
use las_synth::sat::{back_substitute, solve, SolverConfig};

/// Total assignment solving `spec` under a solver seed.
pub fn solved_assignment(spec: &SubroutineSpec, seed: u64) -> Vec<bool> {
    let (table, cnf) = encode(spec, &EncodeOptions::default());
    let r = solve(&cnf, &SolverConfig::embedded(50_000).with_seed(seed), None);
    back_substitute(&r, &cnf, &table).unwrap()
}

/// Decoded (unpruned, uncolored) solution of `spec` under a solver seed.
pub fn raw_solution(spec: &SubroutineSpec, seed: u64) -> Lasre {
    decode(&solved_assignment(spec, seed), spec)
}
