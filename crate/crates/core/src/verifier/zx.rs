//! ZX diagrams and their extraction from colored solutions.

use std::collections::{BTreeMap, BTreeSet};

use super::tableau::PauliWord;
use crate::error::VerifyError;
use crate::lasre::Lasre;
use crate::spec::{blue_normal, Axis, Coord, PauliOp, PipeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpiderKind {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spider {
    pub kind: SpiderKind,
    /// Phase in quarter turns; only 0 and 1 occur.
    pub quarter_turns: u8,
    /// Cube the spider was extracted from.
    pub origin: Option<Coord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Spider(usize),
    /// Open leg, indexed by port.
    Leg(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: Endpoint,
    pub b: Endpoint,
    pub hadamard: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZXDiagram {
    pub spiders: Vec<Spider>,
    pub edges: Vec<Edge>,
    pub n_legs: usize,
}

impl ZXDiagram {
    pub fn new(n_legs: usize) -> Self {
        ZXDiagram {
            n_legs,
            ..Default::default()
        }
    }

    pub fn add_spider(&mut self, kind: SpiderKind, quarter_turns: u8) -> usize {
        self.spiders.push(Spider {
            kind,
            quarter_turns: quarter_turns % 4,
            origin: None,
        });
        self.spiders.len() - 1
    }

    pub fn connect(&mut self, a: Endpoint, b: Endpoint, hadamard: bool) {
        self.edges.push(Edge { a, b, hadamard });
    }

    /// Number of edge ends at each spider; self-loops count twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.spiders.len()];
        for e in &self.edges {
            for end in [e.a, e.b] {
                if let Endpoint::Spider(s) = end {
                    d[s] += 1;
                }
            }
        }
        d
    }
}

/// Stabilizer generators of a single spider with `degree` legs and phase
/// `quarter_turns * pi / 2`.
pub fn spider_generators(kind: SpiderKind, quarter_turns: u8, degree: usize) -> Vec<PauliWord> {
    let (along, pair) = match kind {
        SpiderKind::Z => (PauliOp::X, PauliOp::Z),
        SpiderKind::X => (PauliOp::Z, PauliOp::X),
    };
    let mut out = Vec::with_capacity(degree);
    if degree == 0 {
        return out;
    }
    let mut first = vec![along; degree];
    let mut negative = false;
    match quarter_turns % 4 {
        0 => {}
        2 => negative = true,
        q => {
            first[0] = PauliOp::Y;
            // A Hadamard conjugation turns Y into -Y; a three-quarter turn
            // is the conjugate state.
            negative = (kind == SpiderKind::X) != (q == 3);
        }
    }
    out.push(PauliWord { ops: first, negative });
    for i in 0..degree - 1 {
        let mut ops = vec![PauliOp::I; degree];
        ops[i] = pair;
        ops[i + 1] = pair;
        out.push(PauliWord::new(ops));
    }
    out
}

/// Where one end of a pipe terminates in the diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PipeEnd {
    pipe: PipeId,
    upper: bool,
}

impl PipeEnd {
    fn cube(self) -> Coord {
        if self.upper {
            self.pipe.tip()
        } else {
            self.pipe.base
        }
    }
}

/// Color bit of `pipe` at the given end. K pipes use their end colors.
fn end_color(l: &Lasre, end: PipeEnd) -> bool {
    match end.pipe.axis {
        Axis::K => {
            let grid = if end.upper { &l.color_kp } else { &l.color_km };
            grid.as_ref().expect("checked colored").get(end.pipe.base)
        }
        _ => l.color(end.pipe),
    }
}

/// Translate a colored solution into a ZX diagram with one open leg per
/// port.
///
/// Junction cubes of degree three or four become spiders whose kind is the
/// color of the walls facing the junction plane's normal. Y cubes become a
/// quarter-turn Z spider on each attached pipe. Cubes with one pipe become
/// a phase-free Z spider. Domain walls become Hadamard edges.
pub fn extract_zx(l: &Lasre) -> Result<ZXDiagram, VerifyError> {
    if !l.is_colored() {
        return Err(VerifyError::Uncolored);
    }
    let e = l.extents;
    let mut d = ZXDiagram::new(l.ports.len());

    // Terminal ends: pipe end -> diagram endpoint.
    let mut terminal: BTreeMap<PipeEnd, Endpoint> = BTreeMap::new();
    let port_pipes = l.port_pipes();
    let mut port_cube: BTreeMap<Coord, usize> = BTreeMap::new();
    for (idx, (port, pipe)) in l.ports.iter().zip(&port_pipes).enumerate() {
        let Some(pipe) = pipe.filter(|p| l.exists(*p)) else {
            return Err(VerifyError::DanglingPort(idx));
        };
        let upper = !e.contains(port.location) || pipe.tip() == port.location;
        terminal.insert(PipeEnd { pipe, upper }, Endpoint::Leg(idx));
        if e.contains(port.location) {
            port_cube.insert(port.location, idx);
        }
    }

    let mut relay: BTreeSet<Coord> = BTreeSet::new();
    for c in e.cubes() {
        let pipes = l.pipes_at(c);
        if pipes.is_empty() || port_cube.contains_key(&c) {
            continue;
        }
        let ends: Vec<PipeEnd> = pipes
            .iter()
            .map(|p| PipeEnd {
                pipe: *p,
                upper: p.base != c,
            })
            .collect();
        if l.ycube.get(c) {
            if pipes.iter().any(|p| p.axis != Axis::K) {
                return Err(VerifyError::Junction(c));
            }
            for end in ends {
                let s = d.add_spider(SpiderKind::Z, 1);
                d.spiders[s].origin = Some(c);
                terminal.insert(end, Endpoint::Spider(s));
            }
            continue;
        }
        match pipes.len() {
            1 => {
                let s = d.add_spider(SpiderKind::Z, 0);
                d.spiders[s].origin = Some(c);
                terminal.insert(ends[0], Endpoint::Spider(s));
            }
            2 => {
                relay.insert(c);
            }
            _ => {
                let missing: Vec<Axis> = Axis::ALL
                    .into_iter()
                    .filter(|a| pipes.iter().all(|p| p.axis != *a))
                    .collect();
                let [normal] = missing[..] else {
                    return Err(VerifyError::Junction(c));
                };
                let blue: BTreeSet<bool> = ends
                    .iter()
                    .map(|end| blue_normal(end.pipe.axis, end_color(l, *end)) == normal)
                    .collect();
                if blue.len() != 1 {
                    return Err(VerifyError::Junction(c));
                }
                let kind = if blue.contains(&true) {
                    SpiderKind::Z
                } else {
                    SpiderKind::X
                };
                let s = d.add_spider(kind, 0);
                d.spiders[s].origin = Some(c);
                for end in ends {
                    terminal.insert(end, Endpoint::Spider(s));
                }
            }
        }
    }

    // Walk from each terminal end through relay cubes to the next terminal.
    let mut used: BTreeSet<PipeEnd> = BTreeSet::new();
    for (&start, &from) in &terminal {
        if used.contains(&start) {
            continue;
        }
        used.insert(start);
        let mut cur = start;
        let mut hadamard = false;
        loop {
            if cur.pipe.axis == Axis::K && l.domain_walls.contains(&cur.pipe.base) {
                hadamard = !hadamard;
            }
            let far = PipeEnd {
                pipe: cur.pipe,
                upper: !cur.upper,
            };
            if let Some(&to) = terminal.get(&far) {
                used.insert(far);
                d.connect(from, to, hadamard);
                break;
            }
            let c = far.cube();
            debug_assert!(relay.contains(&c));
            let next = l
                .pipes_at(c)
                .into_iter()
                .find(|p| *p != cur.pipe)
                .ok_or(VerifyError::Junction(c))?;
            cur = PipeEnd {
                pipe: next,
                upper: next.base != c,
            };
        }
    }
    Ok(d)
}
