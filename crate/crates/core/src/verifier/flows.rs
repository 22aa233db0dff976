//! Contraction of a ZX diagram into a stabilizer group on its open legs,
//! and flow checking against that group.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::tableau::{PauliWord, Row, Tableau};
use super::zx::{spider_generators, Endpoint, ZXDiagram};
use crate::error::VerifyError;
use crate::spec::{PauliOp, StabilizerFlow};

/// How to treat a Bell post-selection whose outcome is already fixed to -1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignMode {
    /// Such a diagram is the zero map and contraction fails.
    Strict,
    /// The -1 outcome is absorbed as a Pauli frame correction; the group is
    /// then only meaningful up to signs.
    #[default]
    Flexible,
}

/// Stabilizer group of the state obtained by contracting a diagram; qubit
/// `i` is open leg `i`.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    n_legs: usize,
    tab: Tableau,
}

impl StabilizerGroup {
    pub fn n_legs(&self) -> usize {
        self.n_legs
    }

    pub fn generators(&self) -> Vec<PauliWord> {
        self.tab
            .rows
            .iter()
            .map(|r| PauliWord {
                ops: (0..self.n_legs).map(|q| r.get(q)).collect(),
                negative: r.negative,
            })
            .collect()
    }

    fn row(&self, ops: &[PauliOp]) -> Row {
        let qubits: Vec<usize> = (0..ops.len()).collect();
        Row::from_word(&PauliWord::new(ops.to_vec()), &qubits, self.tab.words)
    }

    /// `Some(sign)` when `ops` or `-ops` stabilizes the state.
    pub fn sign_of(&self, ops: &[PauliOp]) -> Option<i8> {
        assert_eq!(ops.len(), self.n_legs);
        if self.n_legs == 0 {
            return Some(1);
        }
        self.tab
            .express(&self.row(ops))
            .map(|(_, negative)| if negative { -1 } else { 1 })
    }
}

fn bell_contract(tab: &mut Tableau, a: usize, b: usize, hadamard: bool, mode: SignMode) -> Result<(), VerifyError> {
    if hadamard {
        tab.hadamard(a);
    }
    for op in [PauliOp::X, PauliOp::Z] {
        let mut p = Row::zeros(tab.words);
        p.set(a, op);
        p.set(b, op);
        if tab.postselect(&p) == Some(true) && mode == SignMode::Strict {
            return Err(VerifyError::ZeroDiagram);
        }
    }
    tab.eliminate_pair(a, b);
    Ok(())
}

/// Contract every internal edge, leaving a stabilizer group on the open
/// legs. Spiders are absorbed in breadth-first order so that only the
/// current frontier occupies qubits.
pub fn contract(d: &ZXDiagram, mode: SignMode) -> Result<StabilizerGroup, VerifyError> {
    let mut tab = Tableau::new();
    let mut leg_slot: Vec<Option<usize>> = vec![None; d.n_legs];
    let claim = |leg: usize, slot: usize, slots: &mut Vec<Option<usize>>| -> Result<(), VerifyError> {
        match slots.get_mut(leg) {
            Some(s @ None) => {
                *s = Some(slot);
                Ok(())
            }
            _ => Err(VerifyError::LegMismatch {
                flow: leg,
                legs: d.n_legs,
            }),
        }
    };

    // Incident edge ends per spider, in edge order.
    let mut ends: Vec<Vec<(usize, bool)>> = vec![Vec::new(); d.spiders.len()];
    for (idx, e) in d.edges.iter().enumerate() {
        for (side, end) in [(false, e.a), (true, e.b)] {
            if let Endpoint::Spider(s) = end {
                ends[s].push((idx, side));
            }
        }
        if let (Endpoint::Leg(x), Endpoint::Leg(y)) = (e.a, e.b) {
            let (a, b) = (tab.alloc(), tab.alloc());
            tab.add_row(&"XX".parse().unwrap(), &[a, b]);
            tab.add_row(&"ZZ".parse().unwrap(), &[a, b]);
            if e.hadamard {
                tab.hadamard(b);
            }
            claim(x, a, &mut leg_slot)?;
            claim(y, b, &mut leg_slot)?;
        }
    }

    let mut order = Vec::with_capacity(d.spiders.len());
    let mut seen = vec![false; d.spiders.len()];
    for root in 0..d.spiders.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &(idx, side) in &ends[s] {
                let e = &d.edges[idx];
                if let Endpoint::Spider(t) = if side { e.a } else { e.b } {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
    }

    let mut end_slot: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut added = vec![false; d.spiders.len()];
    for s in order {
        let sp = &d.spiders[s];
        // An isolated spider is the scalar 1 + e^(i phase).
        if ends[s].is_empty() && sp.quarter_turns == 2 && mode == SignMode::Strict {
            return Err(VerifyError::ZeroDiagram);
        }
        let slots: Vec<usize> = ends[s].iter().map(|_| tab.alloc()).collect();
        for g in spider_generators(sp.kind, sp.quarter_turns, slots.len()) {
            tab.add_row(&g, &slots);
        }
        for (&end, &slot) in ends[s].iter().zip(&slots) {
            end_slot.insert(end, slot);
        }
        added[s] = true;
        for (&(idx, side), &slot) in ends[s].iter().zip(&slots) {
            let e = &d.edges[idx];
            match if side { e.a } else { e.b } {
                Endpoint::Leg(k) => {
                    if e.hadamard {
                        tab.hadamard(slot);
                    }
                    claim(k, slot, &mut leg_slot)?;
                }
                Endpoint::Spider(t) => {
                    // Each internal edge is contracted once, by whichever
                    // side is absorbed last; self-loops by their first end.
                    let last = t != s || !side;
                    if added[t] && last {
                        let other = end_slot[&(idx, !side)];
                        bell_contract(&mut tab, slot, other, e.hadamard, mode)?;
                    }
                }
            }
        }
    }

    let legs: Vec<usize> = leg_slot
        .iter()
        .enumerate()
        .map(|(k, s)| s.ok_or(VerifyError::DanglingPort(k)))
        .collect::<Result<_, _>>()?;
    let mut out = Tableau::new();
    for _ in 0..d.n_legs {
        out.alloc();
    }
    for r in &tab.rows {
        let mut row = Row::zeros(out.words);
        for (k, &slot) in legs.iter().enumerate() {
            row.set(k, r.get(slot));
        }
        row.negative = r.negative;
        out.rows.push(row);
    }
    debug_assert_eq!(out.rows.len(), d.n_legs);
    Ok(StabilizerGroup {
        n_legs: d.n_legs,
        tab: out,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowResult {
    pub index: usize,
    pub flow: String,
    pub member: bool,
    /// Sign of the flow inside the group, when it is a member.
    pub sign: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowReport {
    pub sign_mode: SignMode,
    pub n_spiders: usize,
    pub n_edges: usize,
    pub flows: Vec<FlowResult>,
}

impl FlowReport {
    pub fn all_satisfied(&self) -> bool {
        self.flows.iter().all(|f| f.member)
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialization is infallible");
        v["all_satisfied"] = self.all_satisfied().into();
        serde_json::to_string_pretty(&v).expect("report serialization is infallible")
    }
}

/// Check each flow for membership (up to sign) in `group`.
pub fn check_flows(group: &StabilizerGroup, flows: &[StabilizerFlow]) -> Result<Vec<FlowResult>, VerifyError> {
    flows
        .iter()
        .enumerate()
        .map(|(index, f)| {
            if f.len() != group.n_legs() {
                return Err(VerifyError::LegMismatch {
                    flow: f.len(),
                    legs: group.n_legs(),
                });
            }
            let sign = group.sign_of(&f.0);
            Ok(FlowResult {
                index,
                flow: f.to_string(),
                member: sign.is_some(),
                sign,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::zx::SpiderKind;

    fn strs(g: &StabilizerGroup) -> Vec<String> {
        g.generators().iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn identity_wire() {
        let mut d = ZXDiagram::new(2);
        let s = d.add_spider(SpiderKind::Z, 0);
        d.connect(Endpoint::Leg(0), Endpoint::Spider(s), false);
        d.connect(Endpoint::Spider(s), Endpoint::Leg(1), false);
        let g = contract(&d, SignMode::Strict).unwrap();
        assert_eq!(g.sign_of(&[PauliOp::X, PauliOp::X]), Some(1));
        assert_eq!(g.sign_of(&[PauliOp::Z, PauliOp::Z]), Some(1));
        assert_eq!(g.sign_of(&[PauliOp::Y, PauliOp::Y]), Some(-1));
        assert_eq!(g.sign_of(&[PauliOp::Z, PauliOp::I]), None);
    }

    #[test]
    fn hadamard_edge_swaps_bases() {
        let mut d = ZXDiagram::new(2);
        d.connect(Endpoint::Leg(0), Endpoint::Leg(1), true);
        let g = contract(&d, SignMode::Strict).unwrap();
        assert_eq!(g.sign_of(&[PauliOp::X, PauliOp::Z]), Some(1));
        assert_eq!(g.sign_of(&[PauliOp::Z, PauliOp::X]), Some(1));
    }

    #[test]
    fn cnot_from_two_spiders() {
        // control Z spider on legs 0 (in) and 2 (out), target X spider on 1, 3.
        let mut d = ZXDiagram::new(4);
        let c = d.add_spider(SpiderKind::Z, 0);
        let t = d.add_spider(SpiderKind::X, 0);
        d.connect(Endpoint::Leg(0), Endpoint::Spider(c), false);
        d.connect(Endpoint::Spider(c), Endpoint::Leg(2), false);
        d.connect(Endpoint::Leg(1), Endpoint::Spider(t), false);
        d.connect(Endpoint::Spider(t), Endpoint::Leg(3), false);
        d.connect(Endpoint::Spider(c), Endpoint::Spider(t), false);
        let g = contract(&d, SignMode::Strict).unwrap();
        let flows: Vec<StabilizerFlow> = ["ZIZI", "IZZZ", "XIXX", "IXIX"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let r = check_flows(&g, &flows).unwrap();
        assert!(r.iter().all(|f| f.member), "{:?} {:?}", r, strs(&g));
        let bad: StabilizerFlow = "ZIIZ".parse().unwrap();
        assert!(!check_flows(&g, &[bad]).unwrap()[0].member);
    }

    #[test]
    fn zero_diagram_in_strict_mode() {
        // <0| applied to |1>: X spider with phase pi meets X spider phase 0.
        let mut d = ZXDiagram::new(0);
        let a = d.add_spider(SpiderKind::X, 0);
        let b = d.add_spider(SpiderKind::X, 2);
        d.connect(Endpoint::Spider(a), Endpoint::Spider(b), false);
        assert!(matches!(contract(&d, SignMode::Strict), Err(VerifyError::ZeroDiagram)));
        assert!(contract(&d, SignMode::Flexible).is_ok());
    }

    #[test]
    fn self_loop_contracts() {
        let mut d = ZXDiagram::new(1);
        let s = d.add_spider(SpiderKind::Z, 0);
        d.connect(Endpoint::Spider(s), Endpoint::Spider(s), false);
        d.connect(Endpoint::Spider(s), Endpoint::Leg(0), false);
        let g = contract(&d, SignMode::Strict).unwrap();
        assert_eq!(g.sign_of(&[PauliOp::X]), Some(1));
    }

    #[test]
    fn flow_length_is_checked() {
        let mut d = ZXDiagram::new(2);
        d.connect(Endpoint::Leg(0), Endpoint::Leg(1), false);
        let g = contract(&d, SignMode::Strict).unwrap();
        let f: StabilizerFlow = "ZZZ".parse().unwrap();
        assert!(check_flows(&g, &[f]).is_err());
    }
}
