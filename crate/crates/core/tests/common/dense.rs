//! Brute-force state vectors of small ZX diagrams.

use las_synth::spec::PauliOp;
use las_synth::verifier::{Endpoint, SpiderKind, ZXDiagram};
use num_complex::Complex64;

fn quarter(q: u8) -> Complex64 {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][(q % 4) as usize]
}

/// Dense tensor over binary indices named by label; the first label is the
/// most significant bit.
struct Tensor {
    labels: Vec<usize>,
    data: Vec<Complex64>,
}

impl Tensor {
    fn from_fn(labels: Vec<usize>, f: impl Fn(&[bool]) -> Complex64) -> Self {
        let n = labels.len();
        let data = (0..1usize << n)
            .map(|x| f(&(0..n).map(|i| (x >> (n - 1 - i)) & 1 == 1).collect::<Vec<_>>()))
            .collect();
        Tensor { labels, data }
    }

    fn at(&self, value: impl Fn(usize) -> bool) -> Complex64 {
        let idx = self.labels.iter().fold(0, |acc, &l| (acc << 1) | usize::from(value(l)));
        self.data[idx]
    }

    /// Product summed over shared labels.
    fn contract(&self, other: &Tensor) -> Tensor {
        let shared: Vec<usize> = self
            .labels
            .iter()
            .copied()
            .filter(|l| other.labels.contains(l))
            .collect();
        let out: Vec<usize> = self
            .labels
            .iter()
            .chain(&other.labels)
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();
        let (n, m) = (out.len(), shared.len());
        let data = (0..1usize << n)
            .map(|x| {
                (0..1usize << m)
                    .map(|y| {
                        let value = |l: usize| match out.iter().position(|&o| o == l) {
                            Some(i) => (x >> (n - 1 - i)) & 1 == 1,
                            None => {
                                let i = shared.iter().position(|&s| s == l).unwrap();
                                (y >> (m - 1 - i)) & 1 == 1
                            }
                        };
                        self.at(value) * other.at(value)
                    })
                    .sum()
            })
            .collect();
        Tensor { labels: out, data }
    }
}

/// Unnormalized state on the open legs; leg 0 is the most significant bit.
/// Every edge end carries its own index; edges are identity or Hadamard
/// (without the normalization) matrices between their two ends.
pub fn state(d: &ZXDiagram) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // Labels 0..n_legs are the legs themselves; edge ends follow.
    let end_label = |idx: usize, side: usize, end: Endpoint| match end {
        Endpoint::Leg(k) => k,
        Endpoint::Spider(_) => d.n_legs + 2 * idx + side,
    };
    let mut tensors = Vec::new();
    let mut spider_labels: Vec<Vec<usize>> = vec![Vec::new(); d.spiders.len()];
    for (idx, e) in d.edges.iter().enumerate() {
        let (la, lb) = (end_label(idx, 0, e.a), end_label(idx, 1, e.b));
        for (end, l) in [(e.a, la), (e.b, lb)] {
            if let Endpoint::Spider(s) = end {
                spider_labels[s].push(l);
            }
        }
        let h = e.hadamard;
        tensors.push(Tensor::from_fn(vec![la, lb], move |v| match (h, v[0], v[1]) {
            (true, true, true) => -one,
            (true, _, _) => one,
            (false, a, b) if a == b => one,
            _ => zero,
        }));
    }
    for (sp, labels) in d.spiders.iter().zip(spider_labels) {
        let phase = quarter(sp.quarter_turns);
        let kind = sp.kind;
        tensors.push(Tensor::from_fn(labels, move |v| match kind {
            SpiderKind::Z => {
                let mut f = zero;
                if v.iter().all(|x| !x) {
                    f += one;
                }
                if v.iter().all(|x| *x) {
                    f += phase;
                }
                f
            }
            SpiderKind::X => {
                let odd = v.iter().filter(|x| **x).count() % 2 == 1;
                one + if odd { -phase } else { phase }
            }
        }));
    }
    let mut acc = Tensor {
        labels: vec![],
        data: vec![one],
    };
    // Greedily absorb the tensor sharing the most labels with the result.
    while !tensors.is_empty() {
        let pick = (0..tensors.len())
            .max_by_key(|&i| tensors[i].labels.iter().filter(|l| acc.labels.contains(l)).count())
            .unwrap();
        acc = acc.contract(&tensors.swap_remove(pick));
    }
    (0..1usize << d.n_legs)
        .map(|x| acc.at(|l| (x >> (d.n_legs - 1 - l)) & 1 == 1))
        .collect()
}

pub fn norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Apply a Pauli string (leg 0 first) to a state.
pub fn apply(ops: &[PauliOp], psi: &[Complex64]) -> Vec<Complex64> {
    let n = ops.len();
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (idx, a) in psi.iter().enumerate() {
        let mut j = idx;
        let mut c = *a;
        for (q, op) in ops.iter().enumerate() {
            let shift = n - 1 - q;
            let b = (idx >> shift) & 1 == 1;
            match op {
                PauliOp::I => {}
                PauliOp::X => j ^= 1 << shift,
                PauliOp::Z => {
                    if b {
                        c = -c
                    }
                }
                PauliOp::Y => {
                    j ^= 1 << shift;
                    c *= if b {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                }
            }
        }
        out[j] += c;
    }
    out
}

/// `Some(sign)` when `ops` stabilizes `psi` up to that sign.
pub fn sign_of(ops: &[PauliOp], psi: &[Complex64]) -> Option<i8> {
    let p = apply(ops, psi);
    let scale = norm(psi);
    for s in [1i8, -1] {
        let diff: f64 = p
            .iter()
            .zip(psi)
            .map(|(x, y)| (x - y * f64::from(s)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if diff < 1e-9 * scale.max(1.0) {
            return Some(s);
        }
    }
    None
}

pub fn all_paulis(n: usize) -> Vec<Vec<PauliOp>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z]
                    .into_iter()
                    .map(move |op| {
                        let mut q = p.clone();
                        q.push(op);
                        q
                    })
            })
            .collect();
    }
    out
}

/// Random diagrams with up to `max_spiders` spiders, `max_legs` open legs
/// and as many internal edges as spiders.
pub fn diagram(max_spiders: usize, max_legs: usize) -> impl proptest::strategy::Strategy<Value = ZXDiagram> {
    use proptest::prelude::*;
    (1usize..=max_spiders, 0usize..=max_legs).prop_flat_map(|(n_spiders, n_legs)| {
        (
            prop::collection::vec((any::<bool>(), 0u8..4), n_spiders),
            prop::collection::vec((0..n_spiders, any::<bool>()), n_legs),
            prop::collection::vec((0..n_spiders, 0..n_spiders, any::<bool>()), 0..=n_spiders),
        )
            .prop_map(move |(spiders, legs, edges)| {
                let mut d = ZXDiagram::new(n_legs);
                for (z, q) in spiders {
                    d.add_spider(if z { SpiderKind::Z } else { SpiderKind::X }, q);
                }
                for (k, (s, h)) in legs.into_iter().enumerate() {
                    d.connect(Endpoint::Leg(k), Endpoint::Spider(s), h);
                }
                for (a, b, h) in edges {
                    d.connect(Endpoint::Spider(a), Endpoint::Spider(b), h);
                }
                d
            })
    })
}

/// Compare tableau contraction with the dense state: zero detection, exact
/// signs in strict mode, and membership in flexible mode.
pub fn agrees(d: &ZXDiagram) -> Result<(), String> {
    use las_synth::error::VerifyError;
    use las_synth::verifier::{contract, SignMode};
    let psi = state(d);
    let zero = norm(&psi) < 1e-9;
    match contract(d, SignMode::Strict) {
        Err(VerifyError::ZeroDiagram) if zero => {}
        Err(VerifyError::ZeroDiagram) => return Err(format!("tableau says zero, dense norm {}", norm(&psi))),
        Err(e) => return Err(format!("unexpected error {e}")),
        Ok(_) if zero => return Err("dense state vanishes but strict contraction succeeded".into()),
        Ok(g) => {
            if g.generators().len() != d.n_legs {
                return Err(format!("{} generators for {} legs", g.generators().len(), d.n_legs));
            }
            for p in all_paulis(d.n_legs) {
                if g.sign_of(&p) != sign_of(&p, &psi) {
                    return Err(format!(
                        "strict sign of {p:?}: {:?} vs {:?}",
                        g.sign_of(&p),
                        sign_of(&p, &psi)
                    ));
                }
            }
        }
    }
    let g = contract(d, SignMode::Flexible).map_err(|e| format!("flexible contraction failed: {e}"))?;
    if !zero {
        for p in all_paulis(d.n_legs) {
            if g.sign_of(&p).is_some() != sign_of(&p, &psi).is_some() {
                return Err(format!("flexible membership of {p:?} disagrees"));
            }
        }
    }
    Ok(())
}
