//! Derivation of K-pipe end colors and domain walls.

use super::{BitGrid, Lasre};
use crate::error::LasreError;
use crate::spec::{color_for_blue_normal, Axis, Coord, PipeId};

/// Color forced on a K pipe end at cube `c` by the spatial pipes there.
fn spatial_constraint(l: &Lasre, c: Coord) -> Result<Option<bool>, LasreError> {
    let mut forced: Option<bool> = None;
    for a in [Axis::I, Axis::J] {
        for p in l.extents.pipes_along(c, a) {
            if !l.exists(p) {
                continue;
            }
            // A K pipe shares the walls facing the spatial pipe's other
            // perpendicular axis; matching them inverts the bit.
            let want = !l.color(p);
            match forced {
                Some(f) if f != want => return Err(LasreError::ColorConflict(c)),
                _ => forced = Some(want),
            }
        }
    }
    Ok(forced)
}

fn has_spatial(l: &Lasre, c: Coord) -> bool {
    [Axis::I, Axis::J]
        .into_iter()
        .any(|a| l.extents.pipes_along(c, a).any(|p| l.exists(p)))
}

/// Color forced at the lower (`upper == false`) or upper end of K pipe `p`.
fn end_constraint(l: &Lasre, p: PipeId, upper: bool) -> Result<Option<bool>, LasreError> {
    let end = if upper { p.tip() } else { p.base };
    for (port, pipe) in l.ports.iter().zip(l.port_pipes()) {
        if pipe != Some(p) {
            continue;
        }
        let outside = !l.extents.contains(port.location);
        if port.location == end || (outside && upper) {
            return Ok(Some(color_for_blue_normal(Axis::K, port.z_basis_dir)));
        }
    }
    if !l.extents.contains(end) || l.ycube.get(end) {
        return Ok(None);
    }
    spatial_constraint(l, end)
}

/// Does a vertical chain of K pipes continue straight through cube `c`?
fn passes_through(l: &Lasre, c: Coord) -> bool {
    !l.ycube.get(c) && !has_spatial(l, c) && !l.port_cubes().contains(&c)
}

/// Fill `color_kp`/`color_km` and record a domain wall wherever a K pipe's
/// two end colors must differ.
pub fn color_k_pipes(lasre: &Lasre) -> Result<Lasre, LasreError> {
    let e = lasre.extents;
    let mut out = lasre.clone();
    let mut kp = BitGrid::new(e);
    let mut km = BitGrid::new(e);
    out.domain_walls.clear();
    let mut done = BitGrid::new(e);
    for c in e.cubes() {
        let start = PipeId::new(Axis::K, c);
        if !lasre.exists(start) || done.get(c) {
            continue;
        }
        // Only start at the bottom of a chain.
        if let Some(below) = c.step(Axis::K, false) {
            if lasre.exists(PipeId::new(Axis::K, below)) && passes_through(lasre, c) {
                continue;
            }
        }
        let mut chain = vec![start];
        loop {
            let top = chain.last().unwrap().tip();
            let next = PipeId::new(Axis::K, top);
            if e.contains(top) && lasre.exists(next) && passes_through(lasre, top) {
                chain.push(next);
            } else {
                break;
            }
        }
        let bottom = end_constraint(lasre, chain[0], false)?;
        let top = end_constraint(lasre, *chain.last().unwrap(), true)?;
        let color = bottom.or(top).unwrap_or(false);
        for p in &chain {
            km.set(p.base, color);
            kp.set(p.base, color);
            done.set(p.base, true);
        }
        if let Some(t) = top {
            let last = *chain.last().unwrap();
            if t != color {
                kp.set(last.base, t);
                out.domain_walls.insert(last.base);
            }
        }
    }
    out.color_kp = Some(kp);
    out.color_km = Some(km);
    Ok(out)
}
