//! Error types shared across the crate.

use thiserror::Error;

use crate::spec::{Coord, Diagnostic};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("port location {location} out of range: {reason}")]
    PortOutOfRange { location: Coord, reason: String },
    #[error("z_basis_dir parallel to port direction: {0}")]
    ZBasisParallel(String),
    #[error("stabilizer length mismatch: {0}")]
    StabilizerLength(String),
    #[error("duplicate port pipe: {0}")]
    DuplicatePortPipe(String),
    #[error("invalid specification: {0}")]
    Invalid(Diagnostic),
}

impl SpecError {
    pub fn from_diagnostic(d: &Diagnostic) -> SpecError {
        let text = format!("{} ({})", d.message, d.location);
        match d.rule {
            "z-basis-parallel" => SpecError::ZBasisParallel(text),
            "stabilizer-length" => SpecError::StabilizerLength(text),
            "duplicate-port-pipe" => SpecError::DuplicatePortPipe(text),
            _ => SpecError::Invalid(d.clone()),
        }
    }
}

#[derive(Debug, Error)]
pub enum SatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed DIMACS: {0}")]
    Dimacs(String),
    #[error("back-substitution failed: {0}")]
    BackSubstitution(String),
    #[error("result is not satisfiable")]
    NotSat,
}

#[derive(Debug, Error)]
pub enum LasreError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("conflicting K-pipe end colors at {0}")]
    ColorConflict(Coord),
    #[error("stabilizer index {index} out of range ({n_stab} stabilizers)")]
    StabilizerIndex { index: usize, n_stab: usize },
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unclassifiable junction at {0}")]
    Junction(Coord),
    #[error("diagram evaluates to the zero map")]
    ZeroDiagram,
    #[error("flow length {flow} does not match {legs} open legs")]
    LegMismatch { flow: usize, legs: usize },
    #[error("lasre has no K-pipe colors; run color_k_pipes first")]
    Uncolored,
    #[error("port {0} is not attached to any pipe")]
    DanglingPort(usize),
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Lasre(#[from] LasreError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("design failed its own check: {0}")]
    SelfCheck(String),
    #[error("depth ceiling {0} reached without a satisfiable design")]
    DepthCeiling(usize),
    #[error("invalid plan: {0}")]
    Plan(String),
}
