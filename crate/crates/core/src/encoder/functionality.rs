//! Correlation-surface rules: port boundary conditions, Y cubes, parity
//! and all-or-none at junctions.

use super::formula::BoolFormula as F;
use super::VarTable;
use crate::spec::{Axis, PipeId, SubroutineSpec};

fn lit(v: usize, positive: bool) -> F {
    if positive {
        F::var(v)
    } else {
        F::not_var(v)
    }
}

/// Every functionality constraint for every stabilizer of `spec`.
pub fn assert_functionality(spec: &SubroutineSpec, table: &VarTable) -> Vec<F> {
    let e = spec.extents;
    let port_pipes: Vec<PipeId> = spec.port_pipes().into_iter().flatten().collect();
    let port_cubes = spec.port_cubes();
    let mut out = Vec::new();
    for (s, flow) in spec.stabilizers.iter().enumerate() {
        // Boundary conditions at each port.
        for ((port, pipe), op) in spec.ports.iter().zip(&port_pipes).zip(&flow.0) {
            let b = port.z_basis_dir;
            let c = Axis::third(pipe.axis, b);
            out.push(lit(table.corr(s, *pipe, b), op.has_z_part()));
            out.push(lit(table.corr(s, *pipe, c), op.has_x_part()));
        }

        // Y cubes: both pieces or neither in their K pipes.
        for cube in e.cubes() {
            for p in e.pipes_along(cube, Axis::K) {
                out.push(
                    F::var(table.ycube(cube)).implies(F::var(table.corr(s, p, Axis::I)).equiv(F::var(table.corr(
                        s,
                        p,
                        Axis::J,
                    )))),
                );
            }
        }

        // Junction rules for each candidate normal direction.
        for cube in e.cubes() {
            if port_cubes.contains(&cube) {
                continue;
            }
            for n in Axis::ALL {
                let mut guard = vec![F::not_var(table.ycube(cube))];
                guard.extend(e.pipes_along(cube, n).map(|p| F::not_var(table.exist(p))));
                let pipes: Vec<PipeId> = n.others().into_iter().flat_map(|a| e.pipes_along(cube, a)).collect();
                let parity = F::even_parity(
                    pipes
                        .iter()
                        .map(|p| F::And(vec![F::var(table.exist(*p)), F::var(table.corr(s, *p, n))]))
                        .collect(),
                );
                out.push(F::And(guard.clone()).implies(parity));

                let ortho = |p: &PipeId| table.corr(s, *p, Axis::third(n, p.axis));
                let all = F::And(
                    pipes
                        .iter()
                        .map(|p| F::Or(vec![F::not_var(table.exist(*p)), F::var(ortho(p))]))
                        .collect(),
                );
                let none = F::And(
                    pipes
                        .iter()
                        .map(|p| F::Or(vec![F::not_var(table.exist(*p)), F::not_var(ortho(p))]))
                        .collect(),
                );
                out.push(F::And(guard).implies(F::Or(vec![all, none])));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn cnot() -> (VarTable, Vec<F>) {
        let spec = parse_spec(include_str!("../../specs/cnot.json")).unwrap();
        let table = VarTable::new(spec.extents, spec.n_stab());
        let fs = assert_functionality(&spec, &table);
        (table, fs)
    }

    fn named(table: &VarTable, name: &str) -> usize {
        table.id(name.parse().unwrap())
    }

    #[test]
    fn boundary_conditions_for_izzz() {
        let (t, fs) = cnot();
        for pos in ["CorrKJ[1,1,0,0]", "CorrKJ[1,0,1,2]", "CorrKJ[1,1,0,2]"] {
            assert!(fs.contains(&F::var(named(&t, pos))), "{pos}");
        }
        for neg in [
            "CorrKI[1,1,0,0]",
            "CorrKI[1,0,1,2]",
            "CorrKI[1,1,0,2]",
            "CorrKI[1,0,1,0]",
            "CorrKJ[1,0,1,0]",
        ] {
            assert!(fs.contains(&F::not_var(named(&t, neg))), "{neg}");
        }
    }

    #[test]
    fn parity_rule_at_0_1_2() {
        let (t, fs) = cnot();
        let v = |s: &str| F::var(named(&t, s));
        let guard = F::And(vec![
            F::not_var(named(&t, "YCube[0,1,2]")),
            F::not_var(named(&t, "ExistJ[0,0,2]")),
            F::not_var(named(&t, "ExistJ[0,1,2]")),
        ]);
        let expected = guard.implies(F::even_parity(vec![
            F::And(vec![v("ExistI[0,1,2]"), v("CorrIJ[1,0,1,2]")]),
            F::And(vec![v("ExistK[0,1,1]"), v("CorrKJ[1,0,1,1]")]),
            F::And(vec![v("ExistK[0,1,2]"), v("CorrKJ[1,0,1,2]")]),
        ]));
        assert!(fs.contains(&expected));
    }

    #[test]
    fn all_or_none_at_1_0_1() {
        let (t, fs) = cnot();
        let side = |positive: bool| {
            F::And(
                [
                    "ExistJ[1,0,1]/CorrJK[1,1,0,1]",
                    "ExistK[1,0,0]/CorrKJ[1,1,0,0]",
                    "ExistK[1,0,1]/CorrKJ[1,1,0,1]",
                ]
                .iter()
                .map(|pair| {
                    let (e, c) = pair.split_once('/').unwrap();
                    F::Or(vec![F::not_var(named(&t, e)), lit(named(&t, c), positive)])
                })
                .collect(),
            )
        };
        let found = fs.iter().any(|f| match f {
            F::Implies(_, rhs) => **rhs == F::Or(vec![side(true), side(false)]),
            _ => false,
        });
        assert!(found);
    }

    #[test]
    fn xor_arity_is_bounded() {
        let (_, fs) = cnot();
        assert!(fs.iter().all(|f| f.max_xor_arity() <= 4));
    }
}
