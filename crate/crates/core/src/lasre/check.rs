//! Direct evaluation of the structural rules on a concrete solution.

use std::collections::BTreeSet;

use super::Lasre;
use crate::spec::{color_for_blue_normal, padding_layers, Axis, Diagnostic, PipeId};

/// All rule violations of `lasre`; empty means valid.
pub fn check_validity(l: &Lasre) -> Vec<Diagnostic> {
    let e = l.extents;
    let mut out = Vec::new();
    let port_pipes = l.port_pipes();
    let claimed: BTreeSet<PipeId> = port_pipes.iter().flatten().copied().collect();
    let port_cubes = l.port_cubes();
    let pad = padding_layers(&l.ports, e);

    for (idx, (port, pipe)) in l.ports.iter().zip(&port_pipes).enumerate() {
        let Some(pipe) = pipe else {
            out.push(Diagnostic::new(
                "port-location-out-of-range",
                format!("port {idx}"),
                "port does not resolve to a pipe",
            ));
            continue;
        };
        if !l.exists(*pipe) {
            out.push(Diagnostic::new(
                "port-pipe-missing",
                pipe,
                format!("port {idx} pipe is absent"),
            ));
        }
        if e.contains(port.location) {
            let extra: Vec<String> = l
                .pipes_at(port.location)
                .into_iter()
                .filter(|p| p != pipe)
                .map(|p| p.to_string())
                .collect();
            if !extra.is_empty() {
                out.push(Diagnostic::new(
                    "port-fanout",
                    port.location,
                    format!("extra pipes {}", extra.join(", ")),
                ));
            }
            if l.ycube.get(port.location) {
                out.push(Diagnostic::new("port-y-cube", port.location, "port cube is a Y cube"));
            }
        }
        if pipe.axis != Axis::K && l.exists(*pipe) {
            let want = color_for_blue_normal(pipe.axis, port.z_basis_dir);
            if l.color(*pipe) != want {
                out.push(Diagnostic::new(
                    "port-orientation",
                    pipe,
                    format!(
                        "color {} but port z_basis_dir {} needs {}",
                        u8::from(l.color(*pipe)),
                        port.z_basis_dir,
                        u8::from(want)
                    ),
                ));
            }
        }
    }

    for p in l.pipes() {
        if p.crosses_boundary(e) && !claimed.contains(&p) {
            out.push(Diagnostic::new(
                "unexpected-port",
                p,
                "pipe leaves the volume outside any port",
            ));
        }
    }

    for c in e.cubes() {
        let pipes = l.pipes_at(c);
        let in_pad = Axis::ALL.iter().any(|a| pad[a.index()] && c.get(*a) == 0);
        if in_pad && !port_cubes.contains(&c) && (l.ycube.get(c) || !pipes.is_empty()) {
            out.push(Diagnostic::new("padding", c, "padding cube is occupied"));
        }
        if l.ycube.get(c) {
            if let Some(p) = pipes.iter().find(|p| p.axis != Axis::K) {
                out.push(Diagnostic::new("y-cube-spatial-pipe", c, format!("Y cube touches {p}")));
            }
        }
        if pipes.len() == 1 && !l.ycube.get(c) && !port_cubes.contains(&c) {
            out.push(Diagnostic::new("degree-one", c, format!("only pipe is {}", pipes[0])));
        }
        for a in [Axis::I, Axis::J] {
            let along: Vec<PipeId> = e.pipes_along(c, a).filter(|p| l.exists(*p)).collect();
            if let [below, above] = along[..] {
                if l.color(below) != l.color(above) {
                    out.push(Diagnostic::new(
                        "passthrough-color",
                        c,
                        format!("{below} and {above} differ in color"),
                    ));
                }
            }
        }
        for pi in e.pipes_along(c, Axis::I).filter(|p| l.exists(*p)) {
            for pj in e.pipes_along(c, Axis::J).filter(|p| l.exists(*p)) {
                if l.color(pi) == l.color(pj) {
                    out.push(Diagnostic::new(
                        "turn-color",
                        c,
                        format!("{pi} and {pj} both have color {}", u8::from(l.color(pi))),
                    ));
                }
            }
        }
        let corner = Axis::ALL.into_iter().all(|a| pipes.iter().any(|p| p.axis == a));
        if corner {
            out.push(Diagnostic::new("no-3d-corner", c, "pipes along all three axes"));
        }
    }

    if let (Some(kp), Some(km)) = (&l.color_kp, &l.color_km) {
        for p in l.pipes().into_iter().filter(|p| p.axis == Axis::K) {
            let differs = kp.get(p.base) != km.get(p.base);
            if differs != l.domain_walls.contains(&p.base) {
                out.push(Diagnostic::new(
                    "domain-wall",
                    p,
                    format!(
                        "end colors {}/{} with wall {}",
                        u8::from(km.get(p.base)),
                        u8::from(kp.get(p.base)),
                        l.domain_walls.contains(&p.base)
                    ),
                ));
            }
        }
        for c in e.cubes() {
            let ks: Vec<(PipeId, bool)> = e
                .pipes_along(c, Axis::K)
                .filter(|p| l.exists(*p))
                .map(|p| (p, if p.base == c { km.get(c) } else { kp.get(p.base) }))
                .collect();
            if ks.is_empty() || l.ycube.get(c) {
                continue;
            }
            for a in [Axis::I, Axis::J] {
                for q in e.pipes_along(c, a).filter(|q| l.exists(*q)) {
                    for (p, col) in &ks {
                        if *col == l.color(q) {
                            out.push(Diagnostic::new("k-end-color", c, format!("{p} end does not match {q}")));
                        }
                    }
                }
            }
            if let [(p0, c0), (p1, c1)] = ks[..] {
                if c0 != c1 && !port_cubes.contains(&c) {
                    out.push(Diagnostic::new(
                        "k-end-color",
                        c,
                        format!("{p0} and {p1} meet with different colors"),
                    ));
                }
            }
        }
        for (port, pipe) in l.ports.iter().zip(&port_pipes) {
            let Some(p) = pipe.filter(|p| p.axis == Axis::K && l.exists(*p)) else {
                continue;
            };
            let upper = !e.contains(port.location) || port.location == p.tip();
            let col = if upper { kp.get(p.base) } else { km.get(p.base) };
            if col != color_for_blue_normal(Axis::K, port.z_basis_dir) {
                out.push(Diagnostic::new(
                    "port-orientation",
                    p,
                    format!("K port end does not match z_basis_dir {}", port.z_basis_dir),
                ));
            }
        }
    }
    for w in &l.domain_walls {
        if !l.exists(PipeId::new(Axis::K, *w)) {
            out.push(Diagnostic::new("domain-wall", w, "wall on an absent K pipe"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasre::color_k_pipes;
    use crate::lasre::tests::solved_cnot;
    use crate::spec::Coord;

    #[test]
    fn solved_cnot_is_valid() {
        let l = color_k_pipes(&solved_cnot()).unwrap();
        assert_eq!(check_validity(&l), vec![]);
    }

    fn rules_at(l: &Lasre, c: Coord) -> Vec<&'static str> {
        check_validity(l)
            .into_iter()
            .filter(|d| d.location == c.to_string())
            .map(|d| d.rule)
            .collect()
    }

    #[test]
    fn three_d_corner_is_reported() {
        let mut l = Lasre::empty(crate::spec::Extents::new(2, 2, 2), vec![], vec![]);
        let c = Coord::new(0, 0, 0);
        for a in Axis::ALL {
            l.set_exists(PipeId::new(a, c), true);
        }
        assert!(rules_at(&l, c).contains(&"no-3d-corner"));
    }

    #[test]
    fn turn_color_is_reported() {
        let mut l = Lasre::empty(crate::spec::Extents::new(2, 2, 1), vec![], vec![]);
        let c = Coord::new(1, 0, 0);
        l.set_exists(PipeId::new(Axis::I, Coord::new(0, 0, 0)), true);
        l.set_exists(PipeId::new(Axis::J, c), true);
        assert_eq!(rules_at(&l, c), vec!["turn-color"]);
        l.set_color(PipeId::new(Axis::J, c), true);
        assert!(rules_at(&l, c).is_empty());
    }
}
