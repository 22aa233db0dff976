//! Variable arrays and constraint generation for the synthesis problem.

pub mod cnf;
pub mod formula;
mod functionality;
mod validity;

pub use cnf::{to_cnf, to_cnf_with, Binding, CnfInstance, CnfOptions};
pub use formula::{BoolFormula, VarId};
pub use functionality::assert_functionality;
pub use validity::assert_validity;

use crate::spec::{Axis, Coord, Extents, PipeId, SubroutineSpec, VarKind, VarName};

/// Dense numbering of the structural and correlation variables.
///
/// Structural ids are `kind * V + cube`, correlation ids follow as
/// `6V + (kind * n_stab + s) * V + cube`, with cubes in k-fastest order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarTable {
    pub extents: Extents,
    pub n_stab: usize,
}

impl VarTable {
    pub fn new(extents: Extents, n_stab: usize) -> Self {
        VarTable { extents, n_stab }
    }

    fn cubes(&self) -> usize {
        self.extents.volume()
    }

    pub fn structural_count(&self) -> usize {
        6 * self.cubes()
    }

    pub fn correlation_count(&self) -> usize {
        6 * self.n_stab * self.cubes()
    }

    pub fn len(&self) -> usize {
        self.structural_count() + self.correlation_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn id(&self, name: VarName) -> VarId {
        let cube = self.extents.linear(name.coord);
        let v = self.cubes();
        match name.kind.corr_index() {
            None => {
                let k = VarKind::STRUCTURAL.iter().position(|x| *x == name.kind).unwrap();
                k * v + cube
            }
            Some(ck) => {
                let s = name.stabilizer.expect("correlation variable needs a stabilizer index");
                debug_assert!(s < self.n_stab);
                6 * v + (ck * self.n_stab + s) * v + cube
            }
        }
    }

    pub fn name(&self, id: VarId) -> VarName {
        let v = self.cubes();
        if id < 6 * v {
            VarName {
                kind: VarKind::STRUCTURAL[id / v],
                stabilizer: None,
                coord: self.extents.coord_of(id % v),
            }
        } else {
            let rest = id - 6 * v;
            let block = rest / v;
            VarName {
                kind: VarKind::CORRELATION[block / self.n_stab],
                stabilizer: Some(block % self.n_stab),
                coord: self.extents.coord_of(rest % v),
            }
        }
    }

    /// Does `name` refer to a variable of this table?
    pub fn contains(&self, name: &VarName) -> bool {
        self.extents.contains(name.coord)
            && match (name.kind.is_correlation(), name.stabilizer) {
                (true, Some(s)) => s < self.n_stab,
                (false, None) => true,
                _ => false,
            }
    }

    fn structural(&self, kind: VarKind, c: Coord) -> VarId {
        self.id(VarName {
            kind,
            stabilizer: None,
            coord: c,
        })
    }

    pub fn ycube(&self, c: Coord) -> VarId {
        self.structural(VarKind::YCube, c)
    }

    pub fn exist(&self, pipe: PipeId) -> VarId {
        self.structural(VarKind::exist(pipe.axis), pipe.base)
    }

    /// Color of an I or J pipe.
    pub fn color(&self, pipe: PipeId) -> VarId {
        let kind = match pipe.axis {
            Axis::I => VarKind::ColorI,
            Axis::J => VarKind::ColorJ,
            Axis::K => panic!("K pipes carry no color variable"),
        };
        self.structural(kind, pipe.base)
    }

    /// Correlation piece of stabilizer `s` in `pipe`, lying in the plane
    /// spanned by the pipe axis and `plane`.
    pub fn corr(&self, s: usize, pipe: PipeId, plane: Axis) -> VarId {
        self.id(VarName {
            kind: VarKind::corr(pipe.axis, plane),
            stabilizer: Some(s),
            coord: pipe.base,
        })
    }
}

pub fn build_variables(spec: &SubroutineSpec) -> VarTable {
    VarTable::new(spec.extents, spec.n_stab())
}

/// Switches for optional constraint families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Forbid degree-1 cubes that are neither Y cubes nor port cubes.
    pub forbid_degree_one: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            forbid_degree_one: true,
        }
    }
}

/// Table plus every constraint of the problem, pins included.
pub fn encode_formulas(spec: &SubroutineSpec, options: &EncodeOptions) -> (VarTable, Vec<BoolFormula>) {
    let table = build_variables(spec);
    let mut formulas = assert_validity(spec, &table, options);
    formulas.extend(assert_functionality(spec, &table));
    for (name, value) in &spec.pins {
        let v = table.id(*name);
        formulas.push(if *value {
            BoolFormula::var(v)
        } else {
            BoolFormula::not_var(v)
        });
    }
    (table, formulas)
}

/// Encode the full problem straight to CNF.
pub fn encode(spec: &SubroutineSpec, options: &EncodeOptions) -> (VarTable, CnfInstance) {
    let (table, formulas) = encode_formulas(spec, options);
    let cnf = to_cnf(&formulas, &table);
    (table, cnf)
}
