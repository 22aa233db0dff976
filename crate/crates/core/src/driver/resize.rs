//! Changing a spec's extents while keeping its ports attached.

use crate::error::{DriverError, SpecError};
use crate::spec::{validate_spec, Axis, SubroutineSpec};

/// Remove the last layer along `axis`. Ports on the removed layer, and
/// outside ports on that face, move inward by one. Returns an error when
/// the result is not a valid spec, e.g. because two ports collide.
pub fn shrink(spec: &SubroutineSpec, axis: Axis) -> Result<SubroutineSpec, DriverError> {
    let n = spec.extents.get(axis);
    if n <= 1 {
        return Err(DriverError::Plan(format!("extent along {axis} cannot drop below 1")));
    }
    let mut out = spec.clone();
    out.extents = spec.extents.with(axis, n - 1);
    for p in &mut out.ports {
        let v = p.location.get(axis);
        if v >= n - 1 {
            p.location = p.location.with(axis, v - 1);
        }
    }
    out.forbidden_cubes.retain(|c| out.extents.contains(*c));
    out.pins.retain(|name, _| out.extents.contains(name.coord));
    checked(out)
}

/// Add a layer at the far end of `axis`; outside ports on that face move
/// out with it.
pub fn grow(spec: &SubroutineSpec, axis: Axis) -> Result<SubroutineSpec, DriverError> {
    let n = spec.extents.get(axis);
    let mut out = spec.clone();
    out.extents = spec.extents.with(axis, n + 1);
    for p in &mut out.ports {
        if p.location.get(axis) == n {
            p.location = p.location.with(axis, n + 1);
        }
    }
    checked(out)
}

/// Shrink or grow along every axis until the extents match `target`.
pub fn resize(spec: &SubroutineSpec, target: [usize; 3]) -> Result<SubroutineSpec, DriverError> {
    let mut out = spec.clone();
    for axis in Axis::ALL {
        while out.extents.get(axis) > target[axis.index()] {
            out = shrink(&out, axis)?;
        }
        while out.extents.get(axis) < target[axis.index()] {
            out = grow(&out, axis)?;
        }
    }
    Ok(out)
}

fn checked(spec: SubroutineSpec) -> Result<SubroutineSpec, DriverError> {
    match validate_spec(&spec).first() {
        None => Ok(spec),
        Some(d) => Err(SpecError::from_diagnostic(d).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{parse_spec, Coord, Extents};

    #[test]
    fn shrinking_cnot_along_k_moves_the_outputs() {
        let spec = parse_spec(include_str!("../../specs/cnot.json")).unwrap();
        let s = shrink(&spec, Axis::K).unwrap();
        assert_eq!(s.extents, Extents::new(2, 2, 2));
        assert_eq!(s.ports[2].location, Coord::new(0, 1, 2));
        assert_eq!(grow(&s, Axis::K).unwrap(), spec);
    }

    #[test]
    fn shrinking_cnot_to_one_column_collides_its_ports() {
        let spec = parse_spec(include_str!("../../specs/cnot.json")).unwrap();
        let narrow = shrink(&spec, Axis::I).unwrap();
        assert_eq!(narrow.ports[1].location, Coord::new(0, 0, 0));
        assert!(shrink(&narrow, Axis::J).is_err());
    }

    #[test]
    fn identity_cannot_lose_its_last_layer() {
        let spec = parse_spec(include_str!("../../specs/identity.json")).unwrap();
        // Both ports would pin the same pipe.
        assert!(shrink(&spec, Axis::K).is_err());
        assert!(shrink(&spec, Axis::I).is_err());
        let r = resize(&spec, [2, 2, 4]).unwrap();
        assert_eq!(r.ports[1].location, Coord::new(0, 0, 4));
    }
}
