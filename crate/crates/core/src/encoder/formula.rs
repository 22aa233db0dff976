//! Boolean formula trees over dense variable ids.

use std::fmt;

pub type VarId = usize;

/// Formula tree. `Xor` is true when an odd number of children are true;
/// a parity-zero constraint is written `Not(Xor(..))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolFormula {
    Const(bool),
    Var(VarId),
    Not(Box<BoolFormula>),
    And(Vec<BoolFormula>),
    Or(Vec<BoolFormula>),
    Xor(Vec<BoolFormula>),
    Equiv(Box<BoolFormula>, Box<BoolFormula>),
    Implies(Box<BoolFormula>, Box<BoolFormula>),
}

impl BoolFormula {
    pub fn var(v: VarId) -> Self {
        BoolFormula::Var(v)
    }

    pub fn not_var(v: VarId) -> Self {
        BoolFormula::Not(Box::new(BoolFormula::Var(v)))
    }

    pub fn negate(self) -> Self {
        BoolFormula::Not(Box::new(self))
    }

    pub fn implies(self, rhs: BoolFormula) -> Self {
        BoolFormula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn equiv(self, rhs: BoolFormula) -> Self {
        BoolFormula::Equiv(Box::new(self), Box::new(rhs))
    }

    /// `a != b`.
    pub fn differs(a: BoolFormula, b: BoolFormula) -> Self {
        BoolFormula::Xor(vec![a, b])
    }

    /// Even parity of `terms`.
    pub fn even_parity(terms: Vec<BoolFormula>) -> Self {
        BoolFormula::Xor(terms).negate()
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            BoolFormula::Const(b) => *b,
            BoolFormula::Var(v) => assignment[*v],
            BoolFormula::Not(f) => !f.eval(assignment),
            BoolFormula::And(fs) => fs.iter().all(|f| f.eval(assignment)),
            BoolFormula::Or(fs) => fs.iter().any(|f| f.eval(assignment)),
            BoolFormula::Xor(fs) => fs.iter().fold(false, |acc, f| acc ^ f.eval(assignment)),
            BoolFormula::Equiv(a, b) => a.eval(assignment) == b.eval(assignment),
            BoolFormula::Implies(a, b) => !a.eval(assignment) || b.eval(assignment),
        }
    }

    /// Largest variable id referenced, if any.
    pub fn max_var(&self) -> Option<VarId> {
        match self {
            BoolFormula::Const(_) => None,
            BoolFormula::Var(v) => Some(*v),
            BoolFormula::Not(f) => f.max_var(),
            BoolFormula::And(fs) | BoolFormula::Or(fs) | BoolFormula::Xor(fs) => {
                fs.iter().filter_map(|f| f.max_var()).max()
            }
            BoolFormula::Equiv(a, b) | BoolFormula::Implies(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Maximum XOR arity anywhere in the tree.
    pub fn max_xor_arity(&self) -> usize {
        match self {
            BoolFormula::Const(_) | BoolFormula::Var(_) => 0,
            BoolFormula::Not(f) => f.max_xor_arity(),
            BoolFormula::And(fs) | BoolFormula::Or(fs) => fs.iter().map(|f| f.max_xor_arity()).max().unwrap_or(0),
            BoolFormula::Xor(fs) => fs.iter().map(|f| f.max_xor_arity()).max().unwrap_or(0).max(fs.len()),
            BoolFormula::Equiv(a, b) | BoolFormula::Implies(a, b) => a.max_xor_arity().max(b.max_xor_arity()),
        }
    }
}

impl fmt::Display for BoolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, op: &str, fs: &[BoolFormula]) -> fmt::Result {
            write!(f, "(")?;
            for (n, x) in fs.iter().enumerate() {
                if n > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")
        }
        match self {
            BoolFormula::Const(b) => write!(f, "{}", u8::from(*b)),
            BoolFormula::Var(v) => write!(f, "x{v}"),
            BoolFormula::Not(x) => write!(f, "!{x}"),
            BoolFormula::And(fs) => list(f, "&", fs),
            BoolFormula::Or(fs) => list(f, "|", fs),
            BoolFormula::Xor(fs) => list(f, "^", fs),
            BoolFormula::Equiv(a, b) => write!(f, "({a} = {b})"),
            BoolFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}
