//! Invariant checks shared by the property tests and the acceptance suite.
//! Each returns a description of the first violation.

use std::path::Path;
use std::time::Duration;

use las_synth::encoder::{assert_validity, build_variables, encode, encode_formulas, EncodeOptions};
use las_synth::exporter::{check_gltf, render, RenderOptions};
use las_synth::lasre::{check_validity, color_k_pipes, decode, prune, Lasre};
use las_synth::sat::dimacs::write_clauses;
use las_synth::sat::{parse_dimacs, run_command, solve_cdcl, to_dimacs_string, CdclOptions, CdclOutcome, SatResult};
use las_synth::spec::{Axis, PipeId, SubroutineSpec};
use las_synth::verifier::{verify_lasre, SignMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Flip the given structural bits of `base`; the validity formulas and the
/// checker must then agree.
pub fn double_entry(spec: &SubroutineSpec, base: &[bool], flips: &[usize]) -> Result<(), String> {
    let table = build_variables(spec);
    let mut a = base.to_vec();
    for &f in flips {
        let v = f % table.structural_count();
        a[v] = !a[v];
    }
    let formulas = assert_validity(spec, &table, &EncodeOptions::default());
    let encoder_ok = formulas.iter().all(|f| f.eval(&a));
    let diags = check_validity(&decode(&a, spec));
    ensure(encoder_ok == diags.is_empty(), || {
        format!("{}: formulas say {encoder_ok}, checker reports {diags:?}", spec.name)
    })
}

/// Flip arbitrary bits of `base`; the CNF accepts exactly when every
/// formula holds.
pub fn cnf_matches_formulas(spec: &SubroutineSpec, base: &[bool], flips: &[usize]) -> Result<(), String> {
    let (table, formulas) = encode_formulas(spec, &EncodeOptions::default());
    let (_, cnf) = encode(spec, &EncodeOptions::default());
    let mut a = base.to_vec();
    for &f in flips {
        let v = f % table.len();
        a[v] = !a[v];
    }
    let (c, f) = (cnf.accepts(&a), formulas.iter().all(|f| f.eval(&a)));
    ensure(c == f, || format!("{}: CNF says {c}, formulas say {f}", spec.name))
}

fn members(l: &Lasre) -> Result<Vec<bool>, String> {
    let colored = color_k_pipes(l).map_err(|e| e.to_string())?;
    let report = verify_lasre(&colored, SignMode::Flexible).map_err(|e| e.to_string())?;
    Ok(report.flows.iter().map(|f| f.member).collect())
}

/// Pruning is idempotent, never adds pipes, and leaves every flow realized.
pub fn prune_invariants(raw: &Lasre) -> Result<(), String> {
    let once = prune(raw);
    ensure(prune(&once) == once, || "prune is not idempotent".into())?;
    ensure(once.pipe_count() <= raw.pipe_count(), || "prune added pipes".into())?;
    let (before, after) = (members(raw)?, members(&once)?);
    ensure(before == after, || {
        format!("membership changed: {before:?} -> {after:?}")
    })?;
    ensure(after.iter().all(|m| *m), || {
        format!("pruned design misses flows: {after:?}")
    })
}

/// A K pipe carries a domain wall exactly when its two end colors differ.
pub fn walls_match_end_colors(colored: &Lasre) -> Result<(), String> {
    let (Some(kp), Some(km)) = (&colored.color_kp, &colored.color_km) else {
        return Err("design is not colored".into());
    };
    for p in colored.pipes().into_iter().filter(|p| p.axis == Axis::K) {
        let wall = colored.domain_walls.contains(&p.base);
        ensure(wall == (kp.get(p.base) != km.get(p.base)), || {
            format!("K pipe at {}: wall {wall}", p.base)
        })?;
    }
    ensure(
        colored
            .domain_walls
            .iter()
            .all(|w| colored.exists(PipeId::new(Axis::K, *w))),
        || "a wall sits on a missing pipe".into(),
    )
}

/// Two encodings of the same spec give identical DIMACS bytes, which parse
/// back to the same clauses.
pub fn dimacs_deterministic(spec: &SubroutineSpec) -> Result<(), String> {
    let (_, cnf) = encode(spec, &EncodeOptions::default());
    let a = to_dimacs_string(&cnf);
    let b = to_dimacs_string(&encode(&spec.clone(), &EncodeOptions::default()).1);
    ensure(a.as_bytes() == b.as_bytes(), || {
        format!("{}: DIMACS differs between runs", spec.name)
    })?;
    let parsed = parse_dimacs(&a).map_err(|e| e.to_string())?;
    ensure(parsed == (cnf.num_vars, cnf.clauses), || {
        format!("{}: DIMACS does not round trip", spec.name)
    })
}

/// glTF passes the structural checker, is deterministic, and has one node
/// per cube, pipe, wall and (with an overlay) set correlation piece.
pub fn gltf_invariants(l: &Lasre, options: &RenderOptions) -> Result<(), String> {
    let g = render(l, options).map_err(|e| e.to_string())?;
    let problems = check_gltf(&g);
    ensure(problems.is_empty(), || format!("glTF problems: {problems:?}"))?;
    let sheets: usize = options.corr.map_or(0, |s| {
        l.pipes()
            .into_iter()
            .map(|p| p.axis.others().into_iter().filter(|&pl| l.corr(s, p, pl)).count())
            .sum()
    });
    let expected = l.occupied_cubes().len() + l.pipe_count() + l.domain_walls.len() + sheets;
    let v: Value = serde_json::from_slice(&g).map_err(|e| e.to_string())?;
    let nodes = v["nodes"].as_array().map_or(0, Vec::len);
    ensure(nodes == expected, || format!("{nodes} nodes, expected {expected}"))?;
    ensure(render(l, options).ok() == Some(g), || {
        "rendering is not deterministic".into()
    })
}

/// Random 3-CNF on `n` variables with a clause ratio drawn from `ratio`.
pub fn random_3cnf(seed: u64, n: usize, ratio: std::ops::Range<f64>) -> Vec<Vec<i32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = (n as f64 * rng.random_range(ratio)) as usize;
    (0..m)
        .map(|_| {
            (0..3)
                .map(|_| {
                    let v = rng.random_range(1..=n as i32);
                    if rng.random_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

pub fn satisfies(clauses: &[Vec<i32>], model: &[bool]) -> bool {
    clauses
        .iter()
        .all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)))
}

/// Command running the bundled sympy-based DIMACS solver, if python3 with
/// sympy is available.
pub fn external_solver() -> Option<String> {
    let ok = std::process::Command::new("python3")
        .args(["-c", "import sympy"])
        .output()
        .is_ok_and(|o| o.status.success());
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("tools/sympy_dimacs.py");
    ok.then(|| format!("python3 {}", script.display()))
}

/// Solve `instances` random 50-variable 3-CNFs with both solvers; returns
/// how many were satisfiable.
pub fn external_agreement(command: &str, instances: u64) -> Result<usize, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut sat = 0;
    for seed in 0..instances {
        let n = 50;
        let clauses = random_3cnf(seed, n, 3.8..4.8);
        let path = dir.path().join(format!("{seed}.cnf"));
        let file = std::fs::File::create(&path).map_err(|e| e.to_string())?;
        write_clauses(n, &clauses, &mut std::io::BufWriter::new(file)).map_err(|e| e.to_string())?;
        let external = run_command(command, &path, None, Duration::from_secs(60), None);
        let embedded = solve_cdcl(n, &clauses, &CdclOptions::default());
        match (&external, &embedded) {
            (SatResult::Sat(m), CdclOutcome::Sat(e)) => {
                ensure(satisfies(&clauses, m) && satisfies(&clauses, e), || {
                    format!("instance {seed}: bad model")
                })?;
                sat += 1;
            }
            (SatResult::Unsat, CdclOutcome::Unsat) => {}
            _ => {
                return Err(format!(
                    "instance {seed}: external {}, embedded {embedded:?}",
                    external.verdict()
                ))
            }
        }
    }
    Ok(sat)
}
