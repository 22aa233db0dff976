//! Structural rules: ports, Y cubes, degree, color matching, 3D corners.

use std::collections::BTreeSet;

use super::formula::BoolFormula as F;
use super::{EncodeOptions, VarTable};
use crate::spec::{color_for_blue_normal, Axis, Coord, PipeId, SubroutineSpec};

fn lit(v: usize, positive: bool) -> F {
    if positive {
        F::var(v)
    } else {
        F::not_var(v)
    }
}

/// Every validity constraint for `spec`, in a fixed emission order.
pub fn assert_validity(spec: &SubroutineSpec, table: &VarTable, options: &EncodeOptions) -> Vec<F> {
    let e = spec.extents;
    let mut out = Vec::new();
    let port_pipes: Vec<PipeId> = spec.port_pipes().into_iter().flatten().collect();
    let port_pipe_set: BTreeSet<PipeId> = port_pipes.iter().copied().collect();
    let port_cubes = spec.port_cubes();

    // Ports: the port pipe exists, a port cube has no other pipe and is not Y.
    for (port, pipe) in spec.ports.iter().zip(&port_pipes) {
        out.push(F::var(table.exist(*pipe)));
        if e.contains(port.location) {
            for q in e.incident_pipes(port.location) {
                if q != *pipe {
                    out.push(F::not_var(table.exist(q)));
                }
            }
            out.push(F::not_var(table.ycube(port.location)));
        }
    }

    // No pipe leaves the volume except through a port.
    for c in e.cubes() {
        for a in Axis::ALL {
            let p = PipeId::new(a, c);
            if p.crosses_boundary(e) && !port_pipe_set.contains(&p) {
                out.push(F::not_var(table.exist(p)));
            }
        }
    }

    // Y cubes only connect along K.
    for c in e.cubes() {
        for a in [Axis::I, Axis::J] {
            for p in e.pipes_along(c, a) {
                out.push(F::var(table.ycube(c)).implies(F::not_var(table.exist(p))));
            }
        }
    }

    // No degree-1 cubes other than Y cubes and port cubes.
    if options.forbid_degree_one {
        for p in e.all_pipes() {
            let tip = p.tip();
            let ends = std::iter::once(p.base).chain(e.contains(tip).then_some(tip));
            for end in ends {
                if port_cubes.contains(&end) {
                    continue;
                }
                let others: Vec<F> = e
                    .incident_pipes(end)
                    .filter(|q| *q != p)
                    .map(|q| F::var(table.exist(q)))
                    .collect();
                out.push(F::And(vec![F::not_var(table.ycube(end)), F::var(table.exist(p))]).implies(F::Or(others)));
            }
        }
    }

    // Spatial passthroughs keep their color orientation.
    for c in e.cubes() {
        for a in [Axis::I, Axis::J] {
            let pipes: Vec<PipeId> = e.pipes_along(c, a).collect();
            if let [below, above] = pipes[..] {
                out.push(
                    F::And(vec![F::var(table.exist(below)), F::var(table.exist(above))])
                        .implies(F::var(table.color(below)).equiv(F::var(table.color(above)))),
                );
            }
        }
    }

    // I-J turns share their K faces, which forces opposite color bits.
    for c in e.cubes() {
        for pi in e.pipes_along(c, Axis::I) {
            for pj in e.pipes_along(c, Axis::J) {
                out.push(
                    F::And(vec![F::var(table.exist(pi)), F::var(table.exist(pj))])
                        .implies(F::differs(F::var(table.color(pi)), F::var(table.color(pj)))),
                );
            }
        }
    }

    // No 3D corners: some axis carries no pipe at each cube.
    for c in e.cubes() {
        out.push(F::Or(
            Axis::ALL
                .into_iter()
                .map(|n| F::And(e.pipes_along(c, n).map(|p| F::not_var(table.exist(p))).collect()))
                .collect(),
        ));
    }

    // Forbidden cubes (user supplied and padding layers) stay empty.
    for c in spec.effective_forbidden() {
        forbid_cube(table, c, &mut out);
    }

    // Spatial ports fix the orientation of their pipe.
    for (port, pipe) in spec.ports.iter().zip(&port_pipes) {
        if pipe.axis != Axis::K {
            let color = color_for_blue_normal(pipe.axis, port.z_basis_dir);
            out.push(lit(table.color(*pipe), color));
        }
    }
    out
}

fn forbid_cube(table: &VarTable, c: Coord, out: &mut Vec<F>) {
    for p in table.extents.incident_pipes(c) {
        out.push(F::not_var(table.exist(p)));
    }
    out.push(F::not_var(table.ycube(c)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn cnot() -> (SubroutineSpec, VarTable, Vec<F>) {
        let spec = parse_spec(include_str!("../../specs/cnot.json")).unwrap();
        let table = VarTable::new(spec.extents, spec.n_stab());
        let fs = assert_validity(&spec, &table, &EncodeOptions::default());
        (spec, table, fs)
    }

    fn named(table: &VarTable, name: &str) -> usize {
        table.id(name.parse().unwrap())
    }

    #[test]
    fn port_cube_fanout_units() {
        let (_, t, fs) = cnot();
        for name in ["ExistI[0,1,0]", "ExistJ[0,0,0]", "ExistJ[0,1,0]"] {
            assert!(fs.contains(&F::not_var(named(&t, name))), "{name}");
        }
        assert!(fs.contains(&F::var(named(&t, "ExistK[0,1,0]"))));
    }

    #[test]
    fn top_floor_has_no_unexpected_ports() {
        let (_, t, fs) = cnot();
        assert!(fs.contains(&F::not_var(named(&t, "ExistK[0,0,2]"))));
        assert!(fs.contains(&F::not_var(named(&t, "ExistK[1,1,2]"))));
        assert!(!fs.contains(&F::not_var(named(&t, "ExistK[1,0,2]"))));
    }

    #[test]
    fn corner_rule_at_1_1_2() {
        let (_, t, fs) = cnot();
        let n = |s: &str| F::not_var(named(&t, s));
        let expected = F::Or(vec![
            F::And(vec![n("ExistI[0,1,2]"), n("ExistI[1,1,2]")]),
            F::And(vec![n("ExistJ[1,0,2]"), n("ExistJ[1,1,2]")]),
            F::And(vec![n("ExistK[1,1,1]"), n("ExistK[1,1,2]")]),
        ]);
        assert!(fs.contains(&expected));
    }

    #[test]
    fn degree_one_rule_for_k_pipe() {
        let (_, t, fs) = cnot();
        let v = |s: &str| F::var(named(&t, s));
        let expected = F::And(vec![F::not_var(named(&t, "YCube[1,0,1]")), v("ExistK[1,0,1]")]).implies(F::Or(vec![
            v("ExistI[0,0,1]"),
            v("ExistI[1,0,1]"),
            v("ExistJ[1,0,1]"),
            v("ExistK[1,0,0]"),
        ]));
        assert!(fs.contains(&expected));
    }

    #[test]
    fn degree_one_rule_can_be_disabled() {
        let (spec, t, fs) = cnot();
        let off = assert_validity(
            &spec,
            &t,
            &EncodeOptions {
                forbid_degree_one: false,
            },
        );
        assert!(off.len() < fs.len());
    }
}
