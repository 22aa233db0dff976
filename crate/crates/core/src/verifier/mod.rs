//! Independent functional check: a colored solution is turned into a ZX
//! diagram, contracted to a stabilizer group on its ports, and each
//! requested flow is looked up in that group.

mod flows;
mod tableau;
mod zx;

pub use flows::{check_flows, contract, FlowReport, FlowResult, SignMode, StabilizerGroup};
pub use tableau::{PauliWord, Row, Tableau};
pub use zx::{extract_zx, spider_generators, Edge, Endpoint, Spider, SpiderKind, ZXDiagram};

use crate::error::VerifyError;
use crate::lasre::Lasre;

/// Check every stabilizer of `lasre` against its extracted diagram.
pub fn verify_lasre(lasre: &Lasre, mode: SignMode) -> Result<FlowReport, VerifyError> {
    let d = extract_zx(lasre)?;
    let group = contract(&d, mode)?;
    let flows = check_flows(&group, &lasre.stabilizers)?;
    Ok(FlowReport {
        sign_mode: mode,
        n_spiders: d.spiders.len(),
        n_edges: d.edges.len(),
        flows,
    })
}
