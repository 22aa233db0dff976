//! Graph-state benchmark specs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::DriverError;
use crate::spec::{Axis, Coord, Direction, Extents, PauliOp, PortSpec, StabilizerFlow, SubroutineSpec};

/// Depth given to a fresh graph-state spec; `search_depth` adjusts it.
pub const INITIAL_DEPTH: usize = 3;

/// Simple undirected graph on nodes `0..nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(nodes: usize, edges: Vec<[usize; 2]>) -> Result<Self, DriverError> {
        let g = Graph { nodes, edges };
        g.check()?;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, DriverError> {
        let g: Graph = serde_json::from_str(text).map_err(|e| DriverError::Plan(e.to_string()))?;
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<(), DriverError> {
        let mut seen = BTreeSet::new();
        for &[a, b] in &self.edges {
            if a >= self.nodes || b >= self.nodes || a == b {
                return Err(DriverError::Plan(format!(
                    "edge ({a}, {b}) is not a simple edge on {} nodes",
                    self.nodes
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(DriverError::Plan(format!("edge ({a}, {b}) is repeated")));
            }
        }
        Ok(())
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&[a, b]| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Spec preparing the graph state: one output port per node on the top of
/// the last lane, and for each node the flow with X on it and Z on its
/// neighbors.
pub fn graph_state_spec(graph: &Graph, lanes: usize) -> SubroutineSpec {
    let n = graph.nodes;
    let lanes = lanes.max(1);
    let ports = (0..n)
        .map(|v| {
            PortSpec::new(
                Coord::new(v, lanes - 1, INITIAL_DEPTH),
                Direction::new(Axis::K, false),
                Axis::J,
                &format!("q{v}"),
            )
        })
        .collect();
    let stabilizers = (0..n)
        .map(|v| {
            let mut ops = vec![PauliOp::I; n];
            ops[v] = PauliOp::X;
            for u in graph.neighbors(v) {
                ops[u] = PauliOp::Z;
            }
            StabilizerFlow(ops)
        })
        .collect();
    SubroutineSpec {
        name: format!("graph_state_{n}"),
        extents: Extents::new(n, lanes, INITIAL_DEPTH),
        ports,
        stabilizers,
        forbidden_cubes: Default::default(),
        pins: Default::default(),
    }
}
