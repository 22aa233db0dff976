//! Lowering of formula lists to CNF.
//!
//! Preprocessing propagates unit constraints and substitutes two-variable
//! equalities until a fixpoint, recording a binding for every original
//! variable. Remaining formulas are clausified by distribution, falling
//! back to Tseitin definitions when distribution would blow up. XOR
//! constraints are expanded directly over their (literal) children.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::formula::{BoolFormula, VarId};
use super::VarTable;

/// Distribution products larger than this introduce a definition.
const DISTRIBUTION_LIMIT: usize = 64;

/// How an original variable obtains its value from a CNF model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Binding {
    /// Live CNF variable (1-based).
    Live(u32),
    /// Fixed by preprocessing.
    Const(bool),
    /// Equal to another original variable, possibly negated.
    Equiv { of: VarId, negated: bool },
    /// Appears in no constraint; any value works.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CnfOptions {
    /// Substitute away `a = b` and `a != b` constraints.
    pub substitute_equivalences: bool,
}

impl Default for CnfOptions {
    fn default() -> Self {
        CnfOptions {
            substitute_equivalences: true,
        }
    }
}

/// Clauses over DIMACS-style literals plus elimination records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// One entry per original variable.
    pub bindings: Vec<Binding>,
    /// Definitions of auxiliary variables `live+1 ..= num_vars`, over CNF
    /// literals.
    aux_defs: Vec<Node>,
    num_live: usize,
}

impl CnfInstance {
    /// Number of original variables that kept a CNF variable.
    pub fn num_live(&self) -> usize {
        self.num_live
    }

    pub fn num_aux(&self) -> usize {
        self.aux_defs.len()
    }

    /// Original variables bound to a constant or another variable.
    pub fn elimination_count(&self) -> usize {
        self.bindings
            .iter()
            .filter(|b| matches!(b, Binding::Const(_) | Binding::Equiv { .. }))
            .count()
    }

    pub fn is_trivially_unsat(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    /// Does `model` (indexed by CNF variable - 1) satisfy every clause?
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| model.get(l.unsigned_abs() as usize - 1).is_some_and(|v| *v == (l > 0)))
        })
    }

    /// Recompute auxiliary variables of `model` from their definitions.
    pub fn complete_model(&self, model: &mut Vec<bool>) {
        model.resize(self.num_vars, false);
        for (n, def) in self.aux_defs.iter().enumerate() {
            let value = def.eval(&|l: Lit| model[l.var] ^ l.neg);
            model[self.num_live + n] = value;
        }
    }

    /// Value of every original variable under a CNF model.
    pub fn back_substitute(&self, model: &[bool]) -> Result<Vec<bool>, String> {
        let mut out: Vec<Option<bool>> = vec![None; self.bindings.len()];
        for v in 0..self.bindings.len() {
            if out[v].is_some() {
                continue;
            }
            let mut chain = Vec::new();
            let mut seen = HashSet::new();
            let mut cur = v;
            let mut flip = false;
            let value = loop {
                if let Some(val) = out[cur] {
                    break val ^ flip;
                }
                if !seen.insert(cur) {
                    return Err(format!("cyclic equivalence through variable {cur}"));
                }
                chain.push((cur, flip));
                match self.bindings[cur] {
                    Binding::Live(id) => {
                        let val = *model
                            .get(id as usize - 1)
                            .ok_or_else(|| format!("model lacks CNF variable {id}"))?;
                        break val ^ flip;
                    }
                    Binding::Const(b) => break b ^ flip,
                    Binding::Free => break flip,
                    Binding::Equiv { of, negated } => {
                        if of >= self.bindings.len() {
                            return Err(format!("variable {cur} bound to unknown variable {of}"));
                        }
                        flip ^= negated;
                        cur = of;
                    }
                }
            };
            for (x, f) in chain {
                out[x] = Some(value ^ f);
            }
        }
        Ok(out.into_iter().map(|v| v.unwrap_or(false)).collect())
    }

    /// Does a total assignment of the original variables agree with the
    /// elimination records and satisfy the clauses?
    pub fn accepts(&self, assignment: &[bool]) -> bool {
        let mut model = vec![false; self.num_vars];
        for (v, b) in self.bindings.iter().enumerate() {
            let ok = match *b {
                Binding::Live(id) => {
                    model[id as usize - 1] = assignment[v];
                    true
                }
                Binding::Const(c) => assignment[v] == c,
                Binding::Equiv { of, negated } => assignment[v] == assignment[of] ^ negated,
                Binding::Free => true,
            };
            if !ok {
                return false;
            }
        }
        self.complete_model(&mut model);
        self.is_satisfied_by(&model)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Lit {
    var: usize,
    neg: bool,
}

impl Lit {
    fn flip(self) -> Lit {
        Lit {
            var: self.var,
            neg: !self.neg,
        }
    }
}

/// Negation normal form. `Xor(cs, p)` holds when the XOR of the children
/// equals `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Const(bool),
    Lit(Lit),
    And(Vec<Node>),
    Or(Vec<Node>),
    Xor(Vec<Node>, bool),
}

impl Node {
    fn from_formula(f: &BoolFormula, negate: bool) -> Node {
        match f {
            BoolFormula::Const(b) => Node::Const(*b ^ negate),
            BoolFormula::Var(v) => Node::Lit(Lit { var: *v, neg: negate }),
            BoolFormula::Not(x) => Node::from_formula(x, !negate),
            BoolFormula::And(xs) | BoolFormula::Or(xs) => {
                let kids = xs.iter().map(|x| Node::from_formula(x, negate)).collect();
                if matches!(f, BoolFormula::And(_)) != negate {
                    Node::And(kids)
                } else {
                    Node::Or(kids)
                }
            }
            BoolFormula::Xor(xs) => Node::Xor(xs.iter().map(|x| Node::from_formula(x, false)).collect(), !negate),
            BoolFormula::Equiv(a, b) => {
                Node::Xor(vec![Node::from_formula(a, false), Node::from_formula(b, false)], negate)
            }
            BoolFormula::Implies(a, b) => {
                if negate {
                    Node::And(vec![Node::from_formula(a, false), Node::from_formula(b, true)])
                } else {
                    Node::Or(vec![Node::from_formula(a, true), Node::from_formula(b, false)])
                }
            }
        }
    }

    fn negated(&self) -> Node {
        match self {
            Node::Const(b) => Node::Const(!b),
            Node::Lit(l) => Node::Lit(l.flip()),
            Node::And(xs) => Node::Or(xs.iter().map(Node::negated).collect()),
            Node::Or(xs) => Node::And(xs.iter().map(Node::negated).collect()),
            Node::Xor(xs, p) => Node::Xor(xs.clone(), !p),
        }
    }

    fn eval(&self, value: &dyn Fn(Lit) -> bool) -> bool {
        match self {
            Node::Const(b) => *b,
            Node::Lit(l) => value(*l),
            Node::And(xs) => xs.iter().all(|x| x.eval(value)),
            Node::Or(xs) => xs.iter().any(|x| x.eval(value)),
            Node::Xor(xs, p) => xs.iter().fold(false, |acc, x| acc ^ x.eval(value)) == *p,
        }
    }

    fn map_lits(&self, f: &dyn Fn(Lit) -> Lit) -> Node {
        match self {
            Node::Const(b) => Node::Const(*b),
            Node::Lit(l) => Node::Lit(f(*l)),
            Node::And(xs) => Node::And(xs.iter().map(|x| x.map_lits(f)).collect()),
            Node::Or(xs) => Node::Or(xs.iter().map(|x| x.map_lits(f)).collect()),
            Node::Xor(xs, p) => Node::Xor(xs.iter().map(|x| x.map_lits(f)).collect(), *p),
        }
    }
}

/// Union-find over original variables with parity and constant values.
struct Substitution {
    parent: Vec<usize>,
    parity: Vec<bool>,
    value: Vec<Option<bool>>,
    conflict: bool,
}

impl Substitution {
    fn new(n: usize) -> Self {
        Substitution {
            parent: (0..n).collect(),
            parity: vec![false; n],
            value: vec![None; n],
            conflict: false,
        }
    }

    /// `(root, p)` with `x = root ^ p`.
    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, pp) = self.find(p);
        self.parity[x] ^= pp;
        self.parent[x] = root;
        (root, self.parity[x])
    }

    fn assign(&mut self, x: usize, val: bool) {
        let (r, p) = self.find(x);
        match self.value[r] {
            Some(old) if old != val ^ p => self.conflict = true,
            Some(_) => {}
            None => self.value[r] = Some(val ^ p),
        }
    }

    /// Record `a ^ b = q`.
    fn unite(&mut self, a: usize, b: usize, q: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != q {
                self.conflict = true;
            }
            return;
        }
        let (child, root) = if ra < rb { (rb, ra) } else { (ra, rb) };
        let link = pa ^ pb ^ q;
        self.parent[child] = root;
        self.parity[child] = link;
        match (self.value[child], self.value[root]) {
            (Some(vc), Some(vr)) if vc != vr ^ link => self.conflict = true,
            (Some(vc), None) => self.value[root] = Some(vc ^ link),
            _ => {}
        }
    }

    fn resolve(&mut self, l: Lit) -> Node {
        let (r, p) = self.find(l.var);
        match self.value[r] {
            Some(v) => Node::Const(v ^ p ^ l.neg),
            None => Node::Lit(Lit { var: r, neg: l.neg ^ p }),
        }
    }
}

fn simplify(node: &Node, sub: &mut Substitution) -> Node {
    match node {
        Node::Const(b) => Node::Const(*b),
        Node::Lit(l) => sub.resolve(*l),
        Node::And(xs) | Node::Or(xs) => {
            let is_and = matches!(node, Node::And(_));
            let absorbing = !is_and;
            let mut kids: Vec<Node> = Vec::with_capacity(xs.len());
            let mut lits: HashSet<Lit> = HashSet::new();
            let mut pending = xs.iter().map(|x| simplify(x, sub)).collect::<Vec<_>>();
            while let Some(k) = pending.pop() {
                match k {
                    Node::Const(b) if b == absorbing => return Node::Const(absorbing),
                    Node::Const(_) => {}
                    Node::And(inner) if is_and => pending.extend(inner),
                    Node::Or(inner) if !is_and => pending.extend(inner),
                    Node::Lit(l) => {
                        if lits.contains(&l.flip()) {
                            return Node::Const(absorbing);
                        }
                        if lits.insert(l) {
                            kids.push(Node::Lit(l));
                        }
                    }
                    other => kids.push(other),
                }
            }
            kids.reverse();
            match kids.len() {
                0 => Node::Const(!absorbing),
                1 => kids.pop().unwrap(),
                _ if is_and => Node::And(kids),
                _ => Node::Or(kids),
            }
        }
        Node::Xor(xs, p) => {
            let mut parity = *p;
            let mut vars: Vec<usize> = Vec::new();
            let mut others: Vec<Node> = Vec::new();
            for x in xs {
                match simplify(x, sub) {
                    Node::Const(b) => parity ^= b,
                    Node::Lit(l) => {
                        parity ^= l.neg;
                        if let Some(pos) = vars.iter().position(|v| *v == l.var) {
                            vars.remove(pos);
                        } else {
                            vars.push(l.var);
                        }
                    }
                    Node::Xor(inner, q) => {
                        parity ^= !q;
                        others.extend(inner);
                    }
                    other => others.push(other),
                }
            }
            let mut kids: Vec<Node> = vars.into_iter().map(|var| Node::Lit(Lit { var, neg: false })).collect();
            kids.extend(others);
            match kids.len() {
                0 => Node::Const(!parity),
                1 => {
                    let k = kids.pop().unwrap();
                    if parity {
                        k
                    } else {
                        simplify(&k.negated(), sub)
                    }
                }
                _ => Node::Xor(kids, parity),
            }
        }
    }
}

/// Clause builder with hash-consed Tseitin definitions.
struct Clausifier {
    next_var: usize,
    defs: HashMap<Node, Lit>,
    def_order: Vec<(usize, Node)>,
    clauses: Vec<Vec<Lit>>,
}

impl Clausifier {
    fn define(&mut self, node: &Node) -> Lit {
        if let Node::Lit(l) = node {
            return *l;
        }
        if let Some(l) = self.defs.get(node) {
            return *l;
        }
        let neg = node.negated();
        if let Some(l) = self.defs.get(&neg) {
            return l.flip();
        }
        let t = Lit {
            var: self.next_var,
            neg: false,
        };
        self.next_var += 1;
        self.defs.insert(node.clone(), t);
        self.def_order.push((t.var, node.clone()));
        let fwd = self.cnf(&Node::Or(vec![Node::Lit(t.flip()), node.clone()]));
        let bwd = self.cnf(&Node::Or(vec![Node::Lit(t), neg]));
        self.clauses.extend(fwd);
        self.clauses.extend(bwd);
        t
    }

    fn cnf(&mut self, node: &Node) -> Vec<Vec<Lit>> {
        match node {
            Node::Const(true) => vec![],
            Node::Const(false) => vec![vec![]],
            Node::Lit(l) => vec![vec![*l]],
            Node::And(xs) => xs.iter().flat_map(|x| self.cnf(x)).collect(),
            Node::Or(xs) => {
                let mut parts: Vec<Vec<Vec<Lit>>> = xs.iter().map(|x| self.cnf(x)).collect();
                loop {
                    let product = parts.iter().fold(1usize, |acc, p| acc.saturating_mul(p.len()));
                    if product <= DISTRIBUTION_LIMIT {
                        break;
                    }
                    let (idx, _) = parts.iter().enumerate().max_by_key(|(_, p)| p.len()).unwrap();
                    let t = self.define(&xs[idx]);
                    parts[idx] = vec![vec![t]];
                }
                let mut acc: Vec<Vec<Lit>> = vec![vec![]];
                for part in parts {
                    let mut next = Vec::with_capacity(acc.len() * part.len());
                    for a in &acc {
                        for c in &part {
                            let mut merged = a.clone();
                            merged.extend_from_slice(c);
                            next.push(merged);
                        }
                    }
                    acc = next;
                }
                acc
            }
            Node::Xor(xs, p) => {
                let lits: Vec<Lit> = xs.iter().map(|x| self.define(x)).collect();
                let n = lits.len();
                let mut out = Vec::with_capacity(1 << n.saturating_sub(1));
                // Exclude every assignment whose parity is wrong.
                for mask in 0u32..(1u32 << n) {
                    let parity = lits
                        .iter()
                        .enumerate()
                        .fold(false, |acc, (b, l)| acc ^ ((mask >> b) & 1 == 1) ^ l.neg);
                    if parity != *p {
                        out.push(
                            lits.iter()
                                .enumerate()
                                .map(|(b, l)| Lit {
                                    var: l.var,
                                    neg: (mask >> b) & 1 == 1,
                                })
                                .collect(),
                        );
                    }
                }
                out
            }
        }
    }
}

/// Sort literals, drop duplicates; `None` for tautologies.
fn canonical_clause(mut c: Vec<Lit>) -> Option<Vec<Lit>> {
    c.sort();
    c.dedup();
    if c.windows(2).any(|w| w[0].var == w[1].var) {
        return None;
    }
    Some(c)
}

pub fn to_cnf(formulas: &[BoolFormula], table: &VarTable) -> CnfInstance {
    to_cnf_with(formulas, table.len(), &CnfOptions::default())
}

pub fn to_cnf_with(formulas: &[BoolFormula], num_original: usize, options: &CnfOptions) -> CnfInstance {
    let mut sub = Substitution::new(num_original);
    let mut pending: Vec<Node> = Vec::new();
    for f in formulas {
        match Node::from_formula(f, false) {
            Node::And(xs) => pending.extend(xs),
            n => pending.push(n),
        }
    }

    // Propagate units and equalities to a fixpoint.
    loop {
        let mut changed = false;
        let mut kept = Vec::with_capacity(pending.len());
        let mut queue: Vec<Node> = std::mem::take(&mut pending);
        queue.reverse();
        while let Some(node) = queue.pop() {
            match simplify(&node, &mut sub) {
                Node::Const(true) => {}
                Node::Const(false) => sub.conflict = true,
                Node::Lit(l) => {
                    sub.assign(l.var, !l.neg);
                    changed = true;
                }
                Node::And(xs) => queue.extend(xs.into_iter().rev()),
                Node::Xor(xs, p) if options.substitute_equivalences && xs.len() == 2 => match (&xs[0], &xs[1]) {
                    (Node::Lit(a), Node::Lit(b)) => {
                        sub.unite(a.var, b.var, p ^ a.neg ^ b.neg);
                        changed = true;
                    }
                    _ => kept.push(Node::Xor(xs, p)),
                },
                other => kept.push(other),
            }
            if sub.conflict {
                break;
            }
        }
        pending = kept;
        if sub.conflict || !changed {
            break;
        }
    }

    let mut clausifier = Clausifier {
        next_var: num_original,
        defs: HashMap::new(),
        def_order: Vec::new(),
        clauses: Vec::new(),
    };
    let mut raw: Vec<Vec<Lit>> = Vec::new();
    if sub.conflict {
        raw.push(vec![]);
    } else {
        for node in &pending {
            let node = simplify(node, &mut sub);
            let cs = clausifier.cnf(&node);
            raw.extend(std::mem::take(&mut clausifier.clauses));
            raw.extend(cs);
        }
    }

    // Number live originals first, then definitions in creation order.
    let mut used = vec![false; num_original];
    for c in &raw {
        for l in c {
            if l.var < num_original {
                used[l.var] = true;
            }
        }
    }
    let mut renumber: HashMap<usize, usize> = HashMap::new();
    let mut next = 0usize;
    for (v, u) in used.iter().enumerate() {
        if *u {
            renumber.insert(v, next);
            next += 1;
        }
    }
    let num_live = next;
    for (var, _) in &clausifier.def_order {
        renumber.insert(*var, next);
        next += 1;
    }
    let map = |l: Lit| Lit {
        var: renumber[&l.var],
        neg: l.neg,
    };

    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut clauses = Vec::new();
    for c in raw {
        let Some(c) = canonical_clause(c.into_iter().map(map).collect()) else {
            continue;
        };
        let dimacs: Vec<i32> = c
            .iter()
            .map(|l| {
                let v = l.var as i32 + 1;
                if l.neg {
                    -v
                } else {
                    v
                }
            })
            .collect();
        if seen.insert(dimacs.clone()) {
            clauses.push(dimacs);
        }
    }

    let aux_defs = clausifier
        .def_order
        .iter()
        .map(|(_, node)| node.map_lits(&map))
        .collect();

    let mut bindings = Vec::with_capacity(num_original);
    for v in 0..num_original {
        let (r, p) = sub.find(v);
        let b = match sub.value[r] {
            Some(val) => Binding::Const(val ^ p),
            None if r != v => Binding::Equiv { of: r, negated: p },
            None => match renumber.get(&v) {
                Some(id) => Binding::Live(*id as u32 + 1),
                None => Binding::Free,
            },
        };
        bindings.push(b);
    }

    CnfInstance {
        num_vars: next,
        clauses,
        bindings,
        aux_defs,
        num_live,
    }
}
