//! JSON form of a solution. Bit arrays are nested `[i][j][k]` lists of 0/1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_validity, BitGrid, Lasre};
use crate::error::LasreError;
use crate::spec::{Coord, Diagnostic, Extents, PortFile, SpecFile, SubroutineSpec, VarKind};

type Nested = Vec<Vec<Vec<u8>>>;

#[derive(Serialize, Deserialize)]
struct LasreFile {
    extents: [usize; 3],
    ycube: Nested,
    #[serde(rename = "existI")]
    exist_i: Nested,
    #[serde(rename = "existJ")]
    exist_j: Nested,
    #[serde(rename = "existK")]
    exist_k: Nested,
    #[serde(rename = "colorI")]
    color_i: Nested,
    #[serde(rename = "colorJ")]
    color_j: Nested,
    #[serde(rename = "colorKP", default)]
    color_kp: Option<Nested>,
    #[serde(rename = "colorKM", default)]
    color_km: Option<Nested>,
    #[serde(default)]
    domain_walls: Vec<[usize; 3]>,
    corr: Vec<BTreeMap<String, Nested>>,
    ports: Vec<PortFile>,
    stabilizers: Vec<String>,
}

fn nest(g: &BitGrid) -> Nested {
    let e = g.extents();
    (0..e.n_i)
        .map(|i| {
            (0..e.n_j)
                .map(|j| (0..e.n_k).map(|k| u8::from(g.get(Coord::new(i, j, k)))).collect())
                .collect()
        })
        .collect()
}

fn unnest(n: &Nested, e: Extents, what: &str) -> Result<BitGrid, LasreError> {
    let bad = || LasreError::Schema(format!("`{what}` does not match extents {e}"));
    let mut g = BitGrid::new(e);
    if n.len() != e.n_i {
        return Err(bad());
    }
    for (i, plane) in n.iter().enumerate() {
        if plane.len() != e.n_j {
            return Err(bad());
        }
        for (j, row) in plane.iter().enumerate() {
            if row.len() != e.n_k {
                return Err(bad());
            }
            for (k, v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => g.set(Coord::new(i, j, k), true),
                    _ => return Err(LasreError::Schema(format!("`{what}` holds {v}, expected 0 or 1"))),
                }
            }
        }
    }
    Ok(g)
}

pub fn serialize_lasre(l: &Lasre) -> String {
    let file = LasreFile {
        extents: [l.extents.n_i, l.extents.n_j, l.extents.n_k],
        ycube: nest(&l.ycube),
        exist_i: nest(&l.exist[0]),
        exist_j: nest(&l.exist[1]),
        exist_k: nest(&l.exist[2]),
        color_i: nest(&l.color_i),
        color_j: nest(&l.color_j),
        color_kp: l.color_kp.as_ref().map(nest),
        color_km: l.color_km.as_ref().map(nest),
        domain_walls: l.domain_walls.iter().map(|c| c.as_array()).collect(),
        corr: l
            .corr
            .iter()
            .map(|set| {
                VarKind::CORRELATION
                    .iter()
                    .zip(set.iter())
                    .map(|(k, g)| (k.name().to_string(), nest(g)))
                    .collect()
            })
            .collect(),
        ports: ports_file(l),
        stabilizers: l.stabilizers.iter().map(|s| s.to_string()).collect(),
    };
    serde_json::to_string(&file).expect("lasre serialization is infallible")
}

fn ports_file(l: &Lasre) -> Vec<PortFile> {
    let spec = SubroutineSpec {
        name: String::new(),
        extents: l.extents,
        ports: l.ports.clone(),
        stabilizers: vec![],
        forbidden_cubes: Default::default(),
        pins: Default::default(),
    };
    SpecFile::from(&spec).ports
}

/// Parse a solution file. Rule violations do not reject the file; they
/// are returned alongside it.
pub fn parse_lasre(text: &str) -> Result<(Lasre, Vec<Diagnostic>), LasreError> {
    let file: LasreFile = serde_json::from_str(text).map_err(|e| LasreError::Schema(e.to_string()))?;
    let [n_i, n_j, n_k] = file.extents;
    if n_i == 0 || n_j == 0 || n_k == 0 {
        return Err(LasreError::Schema("extents must be positive".into()));
    }
    let e = Extents::new(n_i, n_j, n_k);
    let spec_file = SpecFile {
        name: String::new(),
        n_i,
        n_j,
        n_k,
        ports: file.ports,
        stabilizers: file.stabilizers,
        forbidden_cubes: vec![],
        pins: BTreeMap::new(),
    };
    let spec = SubroutineSpec::try_from(spec_file).map_err(|e| LasreError::Schema(e.to_string()))?;
    let mut l = Lasre::empty(e, spec.ports, spec.stabilizers);
    l.ycube = unnest(&file.ycube, e, "ycube")?;
    l.exist = [
        unnest(&file.exist_i, e, "existI")?,
        unnest(&file.exist_j, e, "existJ")?,
        unnest(&file.exist_k, e, "existK")?,
    ];
    l.color_i = unnest(&file.color_i, e, "colorI")?;
    l.color_j = unnest(&file.color_j, e, "colorJ")?;
    l.color_kp = file.color_kp.as_ref().map(|n| unnest(n, e, "colorKP")).transpose()?;
    l.color_km = file.color_km.as_ref().map(|n| unnest(n, e, "colorKM")).transpose()?;
    for w in file.domain_walls {
        let c = Coord::from(w);
        if !e.contains(c) {
            return Err(LasreError::Schema(format!("domain wall {c} outside extents")));
        }
        l.domain_walls.insert(c);
    }
    if file.corr.len() != l.n_stab() {
        return Err(LasreError::Schema(format!(
            "{} correlation groups for {} stabilizers",
            file.corr.len(),
            l.n_stab()
        )));
    }
    for (s, group) in file.corr.iter().enumerate() {
        for (slot, kind) in VarKind::CORRELATION.iter().enumerate() {
            let n = group
                .get(kind.name())
                .ok_or_else(|| LasreError::Schema(format!("corr group {s} lacks {}", kind.name())))?;
            l.corr[s][slot] = unnest(n, e, kind.name())?;
        }
    }
    let diags = check_validity(&l);
    Ok((l, diags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasre::tests::solved_cnot;
    use crate::lasre::{color_k_pipes, prune};
    use crate::spec::{Axis, PipeId};

    #[test]
    fn round_trip() {
        let l = color_k_pipes(&prune(&solved_cnot())).unwrap();
        let text = serialize_lasre(&l);
        let (back, diags) = parse_lasre(&text).unwrap();
        assert_eq!(back, l);
        assert!(diags.is_empty());
        assert_eq!(serialize_lasre(&back), text);
    }

    #[test]
    fn broken_design_parses_with_diagnostics() {
        let mut l = prune(&solved_cnot());
        let c = Coord::new(0, 0, 1);
        l.set_exists(PipeId::new(Axis::I, c), true);
        l.set_exists(PipeId::new(Axis::J, c), true);
        let (_, diags) = parse_lasre(&serialize_lasre(&l)).unwrap();
        assert!(!diags.is_empty());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let l = solved_cnot();
        let mut v: serde_json::Value = serde_json::from_str(&serialize_lasre(&l)).unwrap();
        v["existI"] = serde_json::json!([[[0]]]);
        assert!(parse_lasre(&v.to_string()).is_err());
    }
}
