//! Embedded CDCL solver: two watched literals with blockers, VSIDS,
//! first-UIP learning with recursive minimization, phase saving, Luby
//! restarts and LBD-based clause deletion.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, Default)]
pub struct CdclOptions {
    pub seed: u64,
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CdclOutcome {
    Sat(Vec<bool>),
    Unsat,
    Timeout,
    Cancelled,
}

type Lit = u32;

const UNDEF: u8 = 2;
const NO_REASON: u32 = u32::MAX;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    v * 2 + u32::from(dimacs < 0)
}

#[inline]
fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<i32>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![-1; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] >= 0
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent] as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i as i32;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && act[self.heap[r] as usize] > act[self.heap[l] as usize] {
                r
            } else {
                l
            };
            if act[self.heap[child] as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = i as i32;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v as u32);
        let i = self.heap.len() - 1;
        self.pos[v] = i as i32;
        self.up(i, act);
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v] as usize, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top as usize)
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq as i32)
}

struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    assign: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<u8>,
    to_clear: Vec<usize>,
    stack: Vec<Lit>,
    lbd_stamp: Vec<u64>,
    stamp: u64,
    conflicts: u64,
}

impl Solver {
    #[inline]
    fn value(&self, l: Lit) -> u8 {
        let a = self.assign[var(l)];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as u8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = var(l);
        self.assign[v] = (l & 1 == 0) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, cref: u32) {
        let c = &self.clauses[cref as usize];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a as usize].push(Watcher { cref, blocker: b });
        self.watches[b as usize].push(Watcher { cref, blocker: a });
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == 1 {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != 0 {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l as usize].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                if self.value(first) == 0 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: usize) -> u32 {
        1 << (self.level[v] & 31)
    }

    fn lit_redundant(&mut self, p: Lit, levels: u32) -> bool {
        self.stack.clear();
        self.stack.push(p);
        let top = self.to_clear.len();
        while let Some(q) = self.stack.pop() {
            let cref = self.reason[var(q)] as usize;
            for k in 1..self.clauses[cref].lits.len() {
                let l = self.clauses[cref].lits[k];
                let v = var(l);
                if self.seen[v] == 0 && self.level[v] > 0 {
                    if self.reason[v] != NO_REASON && self.abstract_level(v) & levels != 0 {
                        self.seen[v] = 1;
                        self.stack.push(l);
                        self.to_clear.push(v);
                    } else {
                        for &x in &self.to_clear[top..] {
                            self.seen[x] = 0;
                        }
                        self.to_clear.truncate(top);
                        return false;
                    }
                }
            }
        }
        true
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let cref = confl as usize;
            if self.clauses[cref].learnt {
                self.bump_clause(cref);
            }
            let start = usize::from(p.is_some());
            for k in start..self.clauses[cref].lits.len() {
                let q = self.clauses[cref].lits[k];
                let v = var(q);
                if self.seen[v] == 0 && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = 1;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] != 0 {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            confl = self.reason[var(lit)];
            self.seen[var(lit)] = 0;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.unwrap() ^ 1;

        self.to_clear.clear();
        self.to_clear.extend(learnt.iter().map(|l| var(*l)));
        let levels = learnt[1..]
            .iter()
            .fold(0u32, |acc, l| acc | self.abstract_level(var(*l)));
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            if self.reason[var(l)] == NO_REASON || !self.lit_redundant(l, levels) {
                kept.push(l);
            }
        }
        for &v in &self.to_clear {
            self.seen[v] = 0;
        }
        self.to_clear.clear();

        let mut bt = 0;
        if kept.len() > 1 {
            let mut max_i = 1;
            for k in 2..kept.len() {
                if self.level[var(kept[k])] > self.level[var(kept[max_i])] {
                    max_i = k;
                }
            }
            kept.swap(1, max_i);
            bt = self.level[var(kept[1])];
        }
        let lbd = self.compute_lbd(&kept);
        (kept, bt, lbd)
    }

    fn compute_lbd(&mut self, lits: &[Lit]) -> u32 {
        self.stamp += 1;
        let mut n = 0;
        for &l in lits {
            let lv = self.level[var(l)] as usize;
            if self.lbd_stamp.len() <= lv {
                self.lbd_stamp.resize(lv + 1, 0);
            }
            if self.lbd_stamp[lv] != self.stamp {
                self.lbd_stamp[lv] = self.stamp;
                n += 1;
            }
        }
        n
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn locked(&self, cref: u32) -> bool {
        let l = self.clauses[cref as usize].lits[0];
        self.value(l) == 1 && self.reason[var(l)] == cref
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = self.learnts.clone();
        cands.sort_by(|a, b| {
            let (ca, cb) = (&self.clauses[*a as usize], &self.clauses[*b as usize]);
            cb.lbd.cmp(&ca.lbd).then(
                ca.activity
                    .partial_cmp(&cb.activity)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
        });
        let target = cands.len() / 2;
        let mut removed = 0;
        for cref in cands {
            if removed >= target {
                break;
            }
            let c = &self.clauses[cref as usize];
            if c.lbd <= 2 || c.lits.len() <= 2 || self.locked(cref) {
                continue;
            }
            let c = &mut self.clauses[cref as usize];
            c.deleted = true;
            c.lits = Vec::new();
            removed += 1;
        }
        let clauses = &self.clauses;
        self.learnts.retain(|c| !clauses[*c as usize].deleted);
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assign[v] == UNDEF {
                return Some(v as u32 * 2 + u32::from(!self.phase[v]));
            }
        }
        None
    }
}

/// Decide satisfiability of DIMACS-style clauses over `num_vars` variables.
pub fn solve_cdcl(num_vars: usize, clauses: &[Vec<i32>], options: &CdclOptions) -> CdclOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut s = Solver {
        num_vars,
        clauses: Vec::new(),
        learnts: Vec::new(),
        watches: vec![Vec::new(); 2 * num_vars],
        assign: vec![UNDEF; num_vars],
        level: vec![0; num_vars],
        reason: vec![NO_REASON; num_vars],
        trail: Vec::with_capacity(num_vars),
        trail_lim: Vec::new(),
        qhead: 0,
        activity: (0..num_vars).map(|_| rng.random::<f64>() * 1e-5).collect(),
        var_inc: 1.0,
        cla_inc: 1.0,
        heap: VarHeap::new(num_vars),
        phase: vec![false; num_vars],
        seen: vec![0; num_vars],
        to_clear: Vec::new(),
        stack: Vec::new(),
        lbd_stamp: Vec::new(),
        stamp: 0,
        conflicts: 0,
    };
    for v in 0..num_vars {
        s.heap.insert(v, &s.activity);
    }

    for c in clauses {
        let mut lits: Vec<Lit> = c.iter().map(|&d| lit_of(d)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            continue;
        }
        lits.retain(|&l| s.value(l) != 0);
        if lits.iter().any(|&l| s.value(l) == 1) {
            continue;
        }
        match lits.len() {
            0 => return CdclOutcome::Unsat,
            1 => s.enqueue(lits[0], NO_REASON),
            _ => {
                let cref = s.clauses.len() as u32;
                s.clauses.push(Clause {
                    lits,
                    learnt: false,
                    deleted: false,
                    lbd: 0,
                    activity: 0.0,
                });
                s.attach(cref);
            }
        }
    }
    if s.propagate().is_some() {
        return CdclOutcome::Unsat;
    }

    let mut restart_index = 0u64;
    let mut next_reduce = 2000u64;
    let mut reduce_step = 300u64;
    loop {
        let budget = (luby(2.0, restart_index) * 100.0) as u64;
        restart_index += 1;
        let mut local = 0u64;
        loop {
            if let Some(confl) = s.propagate() {
                s.conflicts += 1;
                local += 1;
                if s.decision_level() == 0 {
                    return CdclOutcome::Unsat;
                }
                let (learnt, bt, lbd) = s.analyze(confl);
                s.cancel_until(bt);
                if learnt.len() == 1 {
                    s.enqueue(learnt[0], NO_REASON);
                } else {
                    let cref = s.clauses.len() as u32;
                    let first = learnt[0];
                    s.clauses.push(Clause {
                        lits: learnt,
                        learnt: true,
                        deleted: false,
                        lbd,
                        activity: 0.0,
                    });
                    s.attach(cref);
                    s.learnts.push(cref);
                    s.bump_clause(cref as usize);
                    s.enqueue(first, cref);
                }
                s.var_inc /= 0.95;
                s.cla_inc /= 0.999;
                if s.conflicts.is_multiple_of(256) {
                    if options.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed)) {
                        return CdclOutcome::Cancelled;
                    }
                    if options.deadline.is_some_and(|d| Instant::now() >= d) {
                        return CdclOutcome::Timeout;
                    }
                }
                if s.conflicts >= next_reduce {
                    next_reduce = s.conflicts + 2000 + reduce_step;
                    reduce_step += 300;
                    s.reduce_db();
                }
            } else {
                if local >= budget {
                    s.cancel_until(0);
                    break;
                }
                match s.pick_branch() {
                    None => {
                        let model: Vec<bool> = (0..s.num_vars).map(|v| s.assign[v] == 1).collect();
                        return CdclOutcome::Sat(model);
                    }
                    Some(l) => {
                        s.trail_lim.push(s.trail.len());
                        s.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(num_vars: usize, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
        match solve_cdcl(num_vars, clauses, &CdclOptions::default()) {
            CdclOutcome::Sat(m) => {
                for c in clauses {
                    assert!(c.iter().any(|&l| m[l.unsigned_abs() as usize - 1] == (l > 0)));
                }
                Some(m)
            }
            CdclOutcome::Unsat => None,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tiny_cases() {
        assert!(check(2, &[vec![1, 2], vec![-1], vec![-2]]).is_none());
        assert!(check(2, &[vec![1, 2]]).is_some());
        assert!(check(1, &[vec![1], vec![-1]]).is_none());
        assert!(check(0, &[]).is_some());
        assert!(check(1, &[vec![]]).is_none());
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 6 pigeons into 5 holes.
        let (p, h) = (6, 5);
        let v = |i: usize, j: usize| (i * h + j + 1) as i32;
        let mut cs = Vec::new();
        for i in 0..p {
            cs.push((0..h).map(|j| v(i, j)).collect());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    cs.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        assert!(check(p * h, &cs).is_none());
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<u32> = (0..15).map(|i| luby(2.0, i) as u32).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
