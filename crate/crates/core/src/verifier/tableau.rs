//! Bit-packed Pauli rows and stabilizer-group operations.

use std::fmt;

use crate::spec::PauliOp;

/// Pauli string with a sign; `negative` means an overall factor of -1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    pub ops: Vec<PauliOp>,
    pub negative: bool,
}

impl PauliWord {
    pub fn new(ops: Vec<PauliOp>) -> Self {
        PauliWord { ops, negative: false }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.negative { '-' } else { '+' })?;
        for p in &self.ops {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliWord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let ops = body
            .chars()
            .map(|c| PauliOp::from_char(c).ok_or_else(|| format!("bad Pauli letter `{c}`")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PauliWord { ops, negative })
    }
}

/// One generator: X and Z bit vectors plus a sign bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub x: Vec<u64>,
    pub z: Vec<u64>,
    pub negative: bool,
}

#[inline]
fn get(bits: &[u64], q: usize) -> bool {
    bits[q / 64] >> (q % 64) & 1 == 1
}

#[inline]
fn put(bits: &mut [u64], q: usize, v: bool) {
    let mask = 1u64 << (q % 64);
    if v {
        bits[q / 64] |= mask;
    } else {
        bits[q / 64] &= !mask;
    }
}

impl Row {
    pub fn zeros(words: usize) -> Self {
        Row {
            x: vec![0; words],
            z: vec![0; words],
            negative: false,
        }
    }

    pub fn from_word(w: &PauliWord, qubits: &[usize], words: usize) -> Self {
        let mut r = Row::zeros(words);
        for (op, &q) in w.ops.iter().zip(qubits) {
            r.set(q, *op);
        }
        r.negative = w.negative;
        r
    }

    pub fn get(&self, q: usize) -> PauliOp {
        PauliOp::from_parts(get(&self.x, q), get(&self.z, q))
    }

    pub fn set(&mut self, q: usize, op: PauliOp) {
        put(&mut self.x, q, op.has_x_part());
        put(&mut self.z, q, op.has_z_part());
    }

    pub fn x_bit(&self, q: usize) -> bool {
        get(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        get(&self.z, q)
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|w| *w == 0)
    }

    /// Do the two rows anticommute?
    pub fn anticommutes(&self, other: &Row) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        acc == 1
    }

    /// Replace `self` by `other * self`, tracking the phase. The rows must
    /// commute.
    pub fn mul_left(&mut self, other: &Row) {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (other.x[w], other.z[w], self.x[w], self.z[w]);
            let y1 = x1 & z1;
            let xo = x1 & !z1;
            let zo = z1 & !x1;
            plus += (y1 & z2 & !x2).count_ones() + (xo & z2 & x2).count_ones() + (zo & x2 & !z2).count_ones();
            minus += (y1 & x2 & !z2).count_ones() + (xo & z2 & !x2).count_ones() + (zo & x2 & z2).count_ones();
            self.x[w] ^= x1;
            self.z[w] ^= z1;
        }
        let phase = (2 * u32::from(self.negative) + 2 * u32::from(other.negative) + plus + 4 - minus % 4) % 4;
        debug_assert!(phase.is_multiple_of(2), "product of anticommuting rows");
        self.negative = phase == 2;
    }

    /// Conjugate qubit `q` by a Hadamard.
    pub fn hadamard(&mut self, q: usize) {
        let (x, z) = (get(&self.x, q), get(&self.z, q));
        if x && z {
            self.negative = !self.negative;
        }
        put(&mut self.x, q, z);
        put(&mut self.z, q, x);
    }

    fn grow(&mut self, words: usize) {
        self.x.resize(words, 0);
        self.z.resize(words, 0);
    }
}

/// Stabilizer group over a pool of qubit slots. Slots are recycled, so
/// columns of released qubits are all zero.
#[derive(Clone, Debug, Default)]
pub struct Tableau {
    pub words: usize,
    pub rows: Vec<Row>,
    free: Vec<usize>,
    capacity: usize,
}

impl Tableau {
    pub fn new() -> Self {
        Tableau::default()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Reserve a fresh qubit slot.
    pub fn alloc(&mut self) -> usize {
        if let Some(q) = self.free.pop() {
            return q;
        }
        let q = self.capacity;
        self.capacity += 1;
        let words = self.capacity.div_ceil(64);
        if words > self.words {
            self.words = words;
            for r in &mut self.rows {
                r.grow(words);
            }
        }
        q
    }

    fn release(&mut self, q: usize) {
        self.free.push(q);
    }

    pub fn add_row(&mut self, word: &PauliWord, qubits: &[usize]) {
        self.rows.push(Row::from_word(word, qubits, self.words));
    }

    pub fn hadamard(&mut self, q: usize) {
        for r in &mut self.rows {
            r.hadamard(q);
        }
    }

    /// Post-select the +1 eigenspace of `p`. Returns `Some(negative)` when
    /// the outcome was already determined (with that sign), `None` when the
    /// measurement was random and the projection applied.
    pub fn postselect(&mut self, p: &Row) -> Option<bool> {
        let anti: Vec<usize> = (0..self.rows.len()).filter(|&i| self.rows[i].anticommutes(p)).collect();
        match anti.split_first() {
            Some((&pivot, rest)) => {
                let pr = self.rows[pivot].clone();
                for &h in rest {
                    self.rows[h].mul_left(&pr);
                }
                self.rows[pivot] = p.clone();
                None
            }
            None => Some(self.express(p).map(|(_, neg)| neg).unwrap_or(false)),
        }
    }

    /// Find a product of rows equal to `p` up to sign; returns the row
    /// indices and whether the product is `-p`.
    pub fn express(&self, p: &Row) -> Option<(Vec<usize>, bool)> {
        let n = self.rows.len();
        // Gaussian elimination on copies, tracking row combinations.
        let mut m: Vec<(Row, Vec<u64>)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut combo = vec![0u64; n.div_ceil(64).max(1)];
                put(&mut combo, i, true);
                (r.clone(), combo)
            })
            .collect();
        let mut target = p.clone();
        target.negative = false;
        let mut target_combo = vec![0u64; n.div_ceil(64).max(1)];
        let mut used = vec![false; n];
        for col in 0..2 * self.capacity {
            let bit = |r: &Row| {
                if col % 2 == 0 {
                    r.x_bit(col / 2)
                } else {
                    r.z_bit(col / 2)
                }
            };
            let Some(pivot) = (0..n).find(|&i| !used[i] && bit(&m[i].0)) else {
                continue;
            };
            used[pivot] = true;
            let (prow, pcombo) = m[pivot].clone();
            for (i, entry) in m.iter_mut().enumerate() {
                if i != pivot && bit(&entry.0) {
                    xor_bits(&mut entry.0, &prow);
                    for (a, b) in entry.1.iter_mut().zip(&pcombo) {
                        *a ^= b;
                    }
                }
            }
            if bit(&target) {
                xor_bits(&mut target, &prow);
                for (a, b) in target_combo.iter_mut().zip(&pcombo) {
                    *a ^= b;
                }
            }
        }
        if !target.is_identity() {
            return None;
        }
        let members: Vec<usize> = (0..n).filter(|&i| get(&target_combo, i)).collect();
        let mut prod = Row::zeros(self.words);
        for &i in &members {
            prod.mul_left(&self.rows[i]);
        }
        debug_assert!(prod.x == p.x && prod.z == p.z);
        Some((members, prod.negative != p.negative))
    }

    /// Remove qubits `a` and `b`, which must be in a Bell-type pair that is
    /// a tensor factor of the state.
    pub fn eliminate_pair(&mut self, a: usize, b: usize) {
        let mut pivots = Vec::new();
        for use_x in [true, false] {
            let has = |r: &Row| if use_x { r.x_bit(a) } else { r.z_bit(a) };
            let Some(p) = (0..self.rows.len()).find(|i| !pivots.contains(i) && has(&self.rows[*i])) else {
                continue;
            };
            let pr = self.rows[p].clone();
            for h in 0..self.rows.len() {
                if h != p && has(&self.rows[h]) {
                    self.rows[h].mul_left(&pr);
                }
            }
            pivots.push(p);
        }
        pivots.sort_unstable();
        for p in pivots.into_iter().rev() {
            self.rows.swap_remove(p);
        }
        for r in &self.rows {
            debug_assert!(r.get(a) == PauliOp::I && r.get(b) == PauliOp::I);
        }
        self.release(a);
        self.release(b);
    }
}

fn xor_bits(dst: &mut Row, src: &Row) {
    for w in 0..dst.x.len() {
        dst.x[w] ^= src.x[w];
        dst.z[w] ^= src.z[w];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(s: &str) -> Row {
        let w: PauliWord = s.parse().unwrap();
        let qs: Vec<usize> = (0..w.len()).collect();
        Row::from_word(&w, &qs, 1)
    }

    fn word(r: &Row, n: usize) -> String {
        let w = PauliWord {
            ops: (0..n).map(|q| r.get(q)).collect(),
            negative: r.negative,
        };
        w.to_string()
    }

    #[test]
    fn products_track_phase() {
        // (XX)(ZZ) = -YY
        let mut r = row("ZZ");
        r.mul_left(&row("XX"));
        assert_eq!(word(&r, 2), "-YY");
        // (YY)(XX) = -ZZ
        let mut r = row("XX");
        r.mul_left(&row("YY"));
        assert_eq!(word(&r, 2), "-ZZ");
        let mut r = row("-XZ");
        r.mul_left(&row("-XZ"));
        assert_eq!(word(&r, 2), "+II");
    }

    #[test]
    fn hadamard_maps_y_to_minus_y() {
        let mut r = row("YX");
        r.hadamard(0);
        r.hadamard(1);
        assert_eq!(word(&r, 2), "-YZ");
    }

    #[test]
    fn bell_state_membership() {
        let mut t = Tableau::new();
        let a = t.alloc();
        let b = t.alloc();
        t.add_row(&"XX".parse().unwrap(), &[a, b]);
        t.add_row(&"ZZ".parse().unwrap(), &[a, b]);
        assert_eq!(t.express(&row("YY")).map(|x| x.1), Some(true));
        assert!(t.express(&row("ZI")).is_none());
    }
}
