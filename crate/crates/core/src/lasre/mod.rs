//! Concrete solutions: decoding, pruning, K-pipe coloring, validity
//! re-checking and the JSON file format.

mod check;
mod color;
mod io;

use std::collections::{BTreeSet, VecDeque};

pub use check::check_validity;
pub use color::color_k_pipes;
pub use io::{parse_lasre, serialize_lasre};

use crate::encoder::VarTable;
use crate::spec::{port_pipe, Axis, Coord, Extents, PipeId, PortSpec, StabilizerFlow, SubroutineSpec, VarKind};

/// Dense 3D bit array in k-fastest order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGrid {
    extents: Extents,
    bits: Vec<bool>,
}

impl BitGrid {
    pub fn new(extents: Extents) -> Self {
        BitGrid {
            extents,
            bits: vec![false; extents.volume()],
        }
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }

    /// `false` outside the extents.
    pub fn get(&self, c: Coord) -> bool {
        self.extents.contains(c) && self.bits[self.extents.linear(c)]
    }

    pub fn set(&mut self, c: Coord, value: bool) {
        let idx = self.extents.linear(c);
        self.bits[idx] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn ones(&self) -> impl Iterator<Item = Coord> + '_ {
        self.extents.cubes().filter(|c| self.get(*c))
    }
}

/// The six correlation arrays of one stabilizer, in `VarKind::CORRELATION`
/// order.
pub type CorrSet = [BitGrid; 6];

fn corr_slot(pipe: Axis, plane: Axis) -> usize {
    VarKind::corr(pipe, plane).corr_index().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasre {
    pub extents: Extents,
    pub ycube: BitGrid,
    /// Pipe existence, indexed by axis.
    pub exist: [BitGrid; 3],
    pub color_i: BitGrid,
    pub color_j: BitGrid,
    /// Upper-end and lower-end colors of K pipes, once derived.
    pub color_kp: Option<BitGrid>,
    pub color_km: Option<BitGrid>,
    /// Bases of K pipes carrying a domain wall.
    pub domain_walls: BTreeSet<Coord>,
    pub corr: Vec<CorrSet>,
    pub ports: Vec<PortSpec>,
    pub stabilizers: Vec<StabilizerFlow>,
}

impl Lasre {
    pub fn empty(extents: Extents, ports: Vec<PortSpec>, stabilizers: Vec<StabilizerFlow>) -> Self {
        let g = || BitGrid::new(extents);
        Lasre {
            extents,
            ycube: g(),
            exist: [g(), g(), g()],
            color_i: g(),
            color_j: g(),
            color_kp: None,
            color_km: None,
            domain_walls: BTreeSet::new(),
            corr: stabilizers.iter().map(|_| std::array::from_fn(|_| g())).collect(),
            ports,
            stabilizers,
        }
    }

    pub fn n_stab(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn exists(&self, p: PipeId) -> bool {
        self.exist[p.axis.index()].get(p.base)
    }

    pub fn set_exists(&mut self, p: PipeId, value: bool) {
        self.exist[p.axis.index()].set(p.base, value);
    }

    /// Color bit of an I or J pipe.
    pub fn color(&self, p: PipeId) -> bool {
        match p.axis {
            Axis::I => self.color_i.get(p.base),
            Axis::J => self.color_j.get(p.base),
            Axis::K => panic!("K pipes have end colors, not a single color"),
        }
    }

    pub fn set_color(&mut self, p: PipeId, value: bool) {
        match p.axis {
            Axis::I => self.color_i.set(p.base, value),
            Axis::J => self.color_j.set(p.base, value),
            Axis::K => panic!("K pipes have end colors, not a single color"),
        }
    }

    pub fn corr(&self, s: usize, p: PipeId, plane: Axis) -> bool {
        self.corr[s][corr_slot(p.axis, plane)].get(p.base)
    }

    pub fn set_corr(&mut self, s: usize, p: PipeId, plane: Axis, value: bool) {
        self.corr[s][corr_slot(p.axis, plane)].set(p.base, value);
    }

    pub fn is_colored(&self) -> bool {
        self.color_kp.is_some() && self.color_km.is_some()
    }

    /// Pipes pinned by the ports, in port order; `None` for ports that do
    /// not resolve against the extents.
    pub fn port_pipes(&self) -> Vec<Option<PipeId>> {
        self.ports.iter().map(|p| port_pipe(p, self.extents).ok()).collect()
    }

    pub fn port_cubes(&self) -> BTreeSet<Coord> {
        self.ports
            .iter()
            .filter(|p| self.extents.contains(p.location))
            .map(|p| p.location)
            .collect()
    }

    /// Existing pipes touching cube `c`.
    pub fn pipes_at(&self, c: Coord) -> Vec<PipeId> {
        self.extents.incident_pipes(c).filter(|p| self.exists(*p)).collect()
    }

    pub fn degree(&self, c: Coord) -> usize {
        self.pipes_at(c).len()
    }

    /// Every existing pipe in (axis, cube) order.
    pub fn pipes(&self) -> Vec<PipeId> {
        Axis::ALL
            .into_iter()
            .flat_map(|a| self.exist[a.index()].ones().map(move |c| PipeId::new(a, c)))
            .collect()
    }

    pub fn pipe_count(&self) -> usize {
        self.exist.iter().map(BitGrid::count_ones).sum()
    }

    /// Cubes touched by at least one pipe, plus Y cubes.
    pub fn occupied_cubes(&self) -> Vec<Coord> {
        self.extents
            .cubes()
            .filter(|c| self.ycube.get(*c) || self.degree(*c) > 0)
            .collect()
    }

    /// Total assignment back onto a variable table (inverse of `decode`).
    pub fn to_assignment(&self, table: &VarTable) -> Vec<bool> {
        let mut a = vec![false; table.len()];
        for c in self.extents.cubes() {
            a[table.ycube(c)] = self.ycube.get(c);
            for axis in Axis::ALL {
                let p = PipeId::new(axis, c);
                a[table.exist(p)] = self.exists(p);
                if axis != Axis::K {
                    a[table.color(p)] = self.color(p);
                }
                for s in 0..self.n_stab() {
                    for plane in axis.others() {
                        a[table.corr(s, p, plane)] = self.corr(s, p, plane);
                    }
                }
            }
        }
        a
    }
}

/// Build a solution from a total assignment. Correlation bits of absent
/// pipes are dropped; color bits are kept as decoded.
pub fn decode(assignment: &[bool], spec: &SubroutineSpec) -> Lasre {
    let table = VarTable::new(spec.extents, spec.n_stab());
    let mut l = Lasre::empty(spec.extents, spec.ports.clone(), spec.stabilizers.clone());
    for c in spec.extents.cubes() {
        l.ycube.set(c, assignment[table.ycube(c)]);
        for axis in Axis::ALL {
            let p = PipeId::new(axis, c);
            let e = assignment[table.exist(p)];
            l.set_exists(p, e);
            if axis != Axis::K {
                l.set_color(p, assignment[table.color(p)]);
            }
            for s in 0..spec.n_stab() {
                for plane in axis.others() {
                    l.set_corr(s, p, plane, e && assignment[table.corr(s, p, plane)]);
                }
            }
        }
    }
    l
}

/// Remove everything not connected to a port.
pub fn prune(lasre: &Lasre) -> Lasre {
    let e = lasre.extents;
    let mut reached = BitGrid::new(e);
    let mut queue = VecDeque::new();
    for pipe in lasre.port_pipes().into_iter().flatten() {
        if lasre.exists(pipe) {
            for c in [pipe.base, pipe.tip()] {
                if e.contains(c) && !reached.get(c) {
                    reached.set(c, true);
                    queue.push_back(c);
                }
            }
        }
    }
    while let Some(c) = queue.pop_front() {
        for p in lasre.pipes_at(c) {
            for n in [p.base, p.tip()] {
                if e.contains(n) && !reached.get(n) {
                    reached.set(n, true);
                    queue.push_back(n);
                }
            }
        }
    }

    let mut out = lasre.clone();
    for c in e.cubes() {
        if !reached.get(c) {
            out.ycube.set(c, false);
            for axis in Axis::ALL {
                let p = PipeId::new(axis, c);
                if !lasre.exists(p) {
                    continue;
                }
                out.set_exists(p, false);
                if axis == Axis::K {
                    out.domain_walls.remove(&c);
                    if let (Some(kp), Some(km)) = (out.color_kp.as_mut(), out.color_km.as_mut()) {
                        kp.set(c, false);
                        km.set(c, false);
                    }
                } else {
                    out.set_color(p, false);
                }
                for s in 0..out.n_stab() {
                    for plane in axis.others() {
                        out.set_corr(s, p, plane, false);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::encoder::{encode, EncodeOptions};
    use crate::sat::{back_substitute, solve, SolverConfig};
    use crate::spec::parse_spec;

    pub(crate) fn cnot_spec() -> SubroutineSpec {
        parse_spec(include_str!("../../specs/cnot.json")).unwrap()
    }

    pub(crate) fn solved_cnot() -> Lasre {
        let spec = cnot_spec();
        let (table, cnf) = encode(&spec, &EncodeOptions::default());
        let r = solve(&cnf, &SolverConfig::default(), None);
        let a = back_substitute(&r, &cnf, &table).unwrap();
        decode(&a, &spec)
    }

    #[test]
    fn decode_round_trips_through_assignment() {
        let spec = cnot_spec();
        let (table, cnf) = encode(&spec, &EncodeOptions::default());
        let a = back_substitute(&solve(&cnf, &SolverConfig::default(), None), &cnf, &table).unwrap();
        let l = decode(&a, &spec);
        assert_eq!(decode(&l.to_assignment(&table), &spec), l);
        assert_eq!(l.exist[0].count_ones(), 1);
    }

    #[test]
    fn empty_portless_decodes_empty() {
        let spec = SubroutineSpec {
            name: "empty".into(),
            extents: Extents::new(1, 1, 1),
            ports: vec![],
            stabilizers: vec![],
            forbidden_cubes: Default::default(),
            pins: Default::default(),
        };
        let l = decode(&[false; 6], &spec);
        assert_eq!(l.pipe_count(), 0);
        assert!(l.occupied_cubes().is_empty());
        assert_eq!(prune(&l), l);
    }

    #[test]
    fn prune_removes_donut_only() {
        let base = prune(&solved_cnot());
        let mut big = Lasre::empty(Extents::new(4, 4, 3), base.ports.clone(), base.stabilizers.clone());
        for p in base.pipes() {
            big.set_exists(p, true);
            if p.axis != Axis::K {
                big.set_color(p, base.color(p));
            }
            for s in 0..base.n_stab() {
                for plane in p.axis.others() {
                    big.set_corr(s, p, plane, base.corr(s, p, plane));
                }
            }
        }
        // Detached loop of four spatial pipes beside the CNOT.
        let donut = [
            PipeId::new(Axis::I, Coord::new(2, 2, 1)),
            PipeId::new(Axis::I, Coord::new(2, 3, 1)),
            PipeId::new(Axis::J, Coord::new(2, 2, 1)),
            PipeId::new(Axis::J, Coord::new(3, 2, 1)),
        ];
        let mut with_donut = big.clone();
        for p in donut {
            with_donut.set_exists(p, true);
        }
        with_donut.set_corr(0, donut[0], Axis::J, true);
        let pruned = prune(&with_donut);
        assert_eq!(pruned, prune(&big));
        assert_eq!(prune(&pruned), pruned);
    }
}
