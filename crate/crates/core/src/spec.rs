//! Subroutine specifications: extents, ports, stabilizer flows, forbidden
//! cubes and variable pins, plus the JSON file format that carries them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SpecError;

/// Lattice axis. `I` and `J` are spatial, `K` is time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    I,
    J,
    K,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::I, Axis::J, Axis::K];

    pub fn index(self) -> usize {
        match self {
            Axis::I => 0,
            Axis::J => 1,
            Axis::K => 2,
        }
    }

    pub fn from_index(idx: usize) -> Axis {
        Axis::ALL[idx % 3]
    }

    /// Cyclic successor: I -> J -> K -> I.
    pub fn next(self) -> Axis {
        Axis::from_index(self.index() + 1)
    }

    pub fn is_temporal(self) -> bool {
        self == Axis::K
    }

    /// The axis different from both `a` and `b` (which must differ).
    pub fn third(a: Axis, b: Axis) -> Axis {
        debug_assert_ne!(a, b);
        Axis::from_index(3 - a.index() - b.index())
    }

    /// The two axes perpendicular to `self`, in increasing order.
    pub fn others(self) -> [Axis; 2] {
        match self {
            Axis::I => [Axis::J, Axis::K],
            Axis::J => [Axis::I, Axis::K],
            Axis::K => [Axis::I, Axis::J],
        }
    }

    pub fn letter(self) -> char {
        match self {
            Axis::I => 'I',
            Axis::J => 'J',
            Axis::K => 'K',
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Axis {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "I" | "i" => Ok(Axis::I),
            "J" | "j" => Ok(Axis::J),
            "K" | "k" => Ok(Axis::K),
            other => Err(SpecError::Schema(format!("unknown axis `{other}`"))),
        }
    }
}

/// Integer grid point. Interior cubes satisfy `0 <= c < extent` on every
/// axis; an outside port location may equal the extent on one axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Coord {
    pub const fn new(i: usize, j: usize, k: usize) -> Self {
        Coord { i, j, k }
    }

    pub fn get(self, axis: Axis) -> usize {
        match axis {
            Axis::I => self.i,
            Axis::J => self.j,
            Axis::K => self.k,
        }
    }

    pub fn with(mut self, axis: Axis, value: usize) -> Self {
        match axis {
            Axis::I => self.i = value,
            Axis::J => self.j = value,
            Axis::K => self.k = value,
        }
        self
    }

    /// One step along `axis`; `None` when stepping below zero.
    pub fn step(self, axis: Axis, positive: bool) -> Option<Coord> {
        let v = self.get(axis);
        if positive {
            Some(self.with(axis, v + 1))
        } else {
            v.checked_sub(1).map(|w| self.with(axis, w))
        }
    }

    pub fn as_array(self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }
}

impl From<[usize; 3]> for Coord {
    fn from(a: [usize; 3]) -> Self {
        Coord::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// Variable-array extents `(n_i, n_j, n_k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Extents {
    pub n_i: usize,
    pub n_j: usize,
    pub n_k: usize,
}

impl Extents {
    pub const fn new(n_i: usize, n_j: usize, n_k: usize) -> Self {
        Extents { n_i, n_j, n_k }
    }

    pub fn get(self, axis: Axis) -> usize {
        match axis {
            Axis::I => self.n_i,
            Axis::J => self.n_j,
            Axis::K => self.n_k,
        }
    }

    pub fn with(mut self, axis: Axis, value: usize) -> Self {
        match axis {
            Axis::I => self.n_i = value,
            Axis::J => self.n_j = value,
            Axis::K => self.n_k = value,
        }
        self
    }

    pub fn volume(self) -> usize {
        self.n_i * self.n_j * self.n_k
    }

    pub fn contains(self, c: Coord) -> bool {
        c.i < self.n_i && c.j < self.n_j && c.k < self.n_k
    }

    /// Linear index of an interior cube, k fastest.
    pub fn linear(self, c: Coord) -> usize {
        debug_assert!(self.contains(c));
        (c.i * self.n_j + c.j) * self.n_k + c.k
    }

    pub fn coord_of(self, idx: usize) -> Coord {
        let k = idx % self.n_k;
        let rest = idx / self.n_k;
        Coord::new(rest / self.n_j, rest % self.n_j, k)
    }

    /// All interior cubes in linear-index order.
    pub fn cubes(self) -> impl Iterator<Item = Coord> {
        (0..self.volume()).map(move |idx| self.coord_of(idx))
    }

    /// Pipes along `axis` touching cube `c`: the one arriving from below
    /// (absent at layer 0) and the one leaving upward (possibly crossing
    /// the boundary).
    pub fn pipes_along(self, c: Coord, axis: Axis) -> impl Iterator<Item = PipeId> {
        let below = c.step(axis, false).map(|b| PipeId::new(axis, b));
        below.into_iter().chain(std::iter::once(PipeId::new(axis, c)))
    }

    /// Every pipe touching cube `c`, in axis order.
    pub fn incident_pipes(self, c: Coord) -> impl Iterator<Item = PipeId> {
        Axis::ALL.into_iter().flat_map(move |a| self.pipes_along(c, a))
    }

    /// Every pipe variable position: base interior, any axis.
    pub fn all_pipes(self) -> impl Iterator<Item = PipeId> {
        self.cubes()
            .flat_map(|c| Axis::ALL.into_iter().map(move |a| PipeId::new(a, c)))
    }
}

impl fmt::Display for Extents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.n_i, self.n_j, self.n_k)
    }
}

/// Signed axis, e.g. `-K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub axis: Axis,
    pub positive: bool,
}

impl Direction {
    pub const fn new(axis: Axis, positive: bool) -> Self {
        Direction { axis, positive }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.axis)
    }
}

impl FromStr for Direction {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (sign, rest) = s.split_at(s.len().min(1));
        let positive = match sign {
            "+" => true,
            "-" => false,
            _ => return Err(SpecError::Schema(format!("direction `{s}` needs a sign"))),
        };
        Ok(Direction::new(rest.parse()?, positive))
    }
}

/// A pipe spanning `base -> base + unit(axis)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PipeId {
    pub axis: Axis,
    pub base: Coord,
}

impl PipeId {
    pub const fn new(axis: Axis, base: Coord) -> Self {
        PipeId { axis, base }
    }

    /// The far endpoint (may lie outside the extents).
    pub fn tip(self) -> Coord {
        let v = self.base.get(self.axis);
        self.base.with(self.axis, v + 1)
    }

    pub fn crosses_boundary(self, extents: Extents) -> bool {
        self.base.get(self.axis) + 1 == extents.get(self.axis)
    }
}

impl fmt::Display for PipeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exist{}{}", self.axis, self.base)
    }
}

/// Single-qubit Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    /// Does the operator carry a piece connecting the blue (Z) walls?
    pub fn has_z_part(self) -> bool {
        matches!(self, PauliOp::Z | PauliOp::Y)
    }

    /// Does the operator carry a piece connecting the red (X) walls?
    pub fn has_x_part(self) -> bool {
        matches!(self, PauliOp::X | PauliOp::Y)
    }

    pub fn from_parts(x: bool, z: bool) -> PauliOp {
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (true, true) => PauliOp::Y,
            (false, true) => PauliOp::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<PauliOp> {
        match c {
            'I' | '.' | '_' => Some(PauliOp::I),
            'X' => Some(PauliOp::X),
            'Y' => Some(PauliOp::Y),
            'Z' => Some(PauliOp::Z),
            _ => None,
        }
    }
}

/// Flattened Pauli string over the ports, in port-list order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerFlow(pub Vec<PauliOp>);

impl StabilizerFlow {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|p| *p == PauliOp::I)
    }

    pub fn get(&self, port: usize) -> PauliOp {
        self.0[port]
    }
}

impl fmt::Display for StabilizerFlow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for StabilizerFlow {
    type Err = SpecError;

    /// Accepts flattened strings (`IZZZ`) and arrow form (`IZ->ZZ`), which is
    /// flattened by concatenating the input and output substrings.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let flat: String = s
            .replace("->", "")
            .replace('→', "")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        flat.chars()
            .map(|c| PauliOp::from_char(c).ok_or_else(|| SpecError::Schema(format!("bad Pauli letter `{c}` in `{s}`"))))
            .collect::<Result<Vec<_>, _>>()
            .map(StabilizerFlow)
    }
}

/// One port of the subroutine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PortSpec {
    /// Outside point or interior start cube.
    pub location: Coord,
    /// Direction from `location` toward the interior.
    pub direction: Direction,
    /// Axis perpendicular to the port's blue (Z) boundary.
    pub z_basis_dir: Axis,
    pub label: String,
}

impl PortSpec {
    pub fn new(location: Coord, direction: Direction, z_basis_dir: Axis, label: &str) -> Self {
        PortSpec {
            location,
            direction,
            z_basis_dir,
            label: label.to_string(),
        }
    }

    pub fn is_injection(&self) -> bool {
        self.label.starts_with("injection")
    }
}

/// Kind of a named binary variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    YCube,
    ExistI,
    ExistJ,
    ExistK,
    ColorI,
    ColorJ,
    CorrIJ,
    CorrIK,
    CorrJI,
    CorrJK,
    CorrKI,
    CorrKJ,
}

impl VarKind {
    pub const STRUCTURAL: [VarKind; 6] = [
        VarKind::YCube,
        VarKind::ExistI,
        VarKind::ExistJ,
        VarKind::ExistK,
        VarKind::ColorI,
        VarKind::ColorJ,
    ];

    pub const CORRELATION: [VarKind; 6] = [
        VarKind::CorrIJ,
        VarKind::CorrIK,
        VarKind::CorrJI,
        VarKind::CorrJK,
        VarKind::CorrKI,
        VarKind::CorrKJ,
    ];

    pub fn is_correlation(self) -> bool {
        Self::CORRELATION.contains(&self)
    }

    pub fn exist(axis: Axis) -> VarKind {
        match axis {
            Axis::I => VarKind::ExistI,
            Axis::J => VarKind::ExistJ,
            Axis::K => VarKind::ExistK,
        }
    }

    /// Correlation piece inside a pipe along `pipe` lying in the plane
    /// spanned by `pipe` and `plane`.
    pub fn corr(pipe: Axis, plane: Axis) -> VarKind {
        match (pipe, plane) {
            (Axis::I, Axis::J) => VarKind::CorrIJ,
            (Axis::I, Axis::K) => VarKind::CorrIK,
            (Axis::J, Axis::I) => VarKind::CorrJI,
            (Axis::J, Axis::K) => VarKind::CorrJK,
            (Axis::K, Axis::I) => VarKind::CorrKI,
            (Axis::K, Axis::J) => VarKind::CorrKJ,
            _ => panic!("correlation piece needs two distinct axes"),
        }
    }

    /// Position within the correlation block (0..6).
    pub fn corr_index(self) -> Option<usize> {
        Self::CORRELATION.iter().position(|k| *k == self)
    }

    pub fn name(self) -> &'static str {
        match self {
            VarKind::YCube => "YCube",
            VarKind::ExistI => "ExistI",
            VarKind::ExistJ => "ExistJ",
            VarKind::ExistK => "ExistK",
            VarKind::ColorI => "ColorI",
            VarKind::ColorJ => "ColorJ",
            VarKind::CorrIJ => "CorrIJ",
            VarKind::CorrIK => "CorrIK",
            VarKind::CorrJI => "CorrJI",
            VarKind::CorrJK => "CorrJK",
            VarKind::CorrKI => "CorrKI",
            VarKind::CorrKJ => "CorrKJ",
        }
    }

    fn from_name(s: &str) -> Option<VarKind> {
        Self::STRUCTURAL
            .iter()
            .chain(Self::CORRELATION.iter())
            .copied()
            .find(|k| k.name() == s)
    }
}

/// A named variable such as `ExistK[1,0,2]` or `CorrIJ[1,0,1,2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName {
    pub kind: VarKind,
    /// Stabilizer index, only for correlation kinds.
    pub stabilizer: Option<usize>,
    pub coord: Coord,
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coord;
        match self.stabilizer {
            Some(s) => write!(f, "{}[{},{},{},{}]", self.kind.name(), s, c.i, c.j, c.k),
            None => write!(f, "{}[{},{},{}]", self.kind.name(), c.i, c.j, c.k),
        }
    }
}

impl FromStr for VarName {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpecError::Schema(format!("malformed variable name `{s}`"));
        let open = s.find('[').ok_or_else(bad)?;
        let body = s[open..]
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(bad)?;
        let kind = VarKind::from_name(s[..open].trim()).ok_or_else(bad)?;
        let nums = body
            .split(',')
            .map(|n| n.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        match (kind.is_correlation(), nums.as_slice()) {
            (false, [i, j, k]) => Ok(VarName {
                kind,
                stabilizer: None,
                coord: Coord::new(*i, *j, *k),
            }),
            (true, [st, i, j, k]) => Ok(VarName {
                kind,
                stabilizer: Some(*st),
                coord: Coord::new(*i, *j, *k),
            }),
            _ => Err(bad()),
        }
    }
}

/// One structural problem found in a specification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub rule: &'static str,
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(rule: &'static str, location: impl fmt::Display, message: impl Into<String>) -> Self {
        Diagnostic {
            rule,
            location: location.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] at {}: {}", self.rule, self.location, self.message)
    }
}

/// The synthesis problem: allowed volume, ports and required flows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubroutineSpec {
    pub name: String,
    pub extents: Extents,
    pub ports: Vec<PortSpec>,
    pub stabilizers: Vec<StabilizerFlow>,
    pub forbidden_cubes: BTreeSet<Coord>,
    pub pins: BTreeMap<VarName, bool>,
}

impl SubroutineSpec {
    pub fn n_stab(&self) -> usize {
        self.stabilizers.len()
    }

    /// Pipe pinned to exist by each port, in port order. Ports that do not
    /// resolve yield `None`.
    pub fn port_pipes(&self) -> Vec<Option<PipeId>> {
        self.ports.iter().map(|p| port_pipe(p, self.extents).ok()).collect()
    }

    /// Interior start cubes of ports located inside the array.
    pub fn port_cubes(&self) -> BTreeSet<Coord> {
        self.ports
            .iter()
            .filter(|p| self.extents.contains(p.location))
            .map(|p| p.location)
            .collect()
    }

    /// Per axis: whether layer 0 is a padding layer that only hosts the
    /// start cubes of ports pointing in the `+` direction.
    pub fn padding(&self) -> [bool; 3] {
        padding_layers(&self.ports, self.extents)
    }

    /// Extents with padding layers removed.
    pub fn interior_extents(&self) -> Extents {
        let pad = self.padding();
        let mut e = self.extents;
        for a in Axis::ALL {
            if pad[a.index()] {
                e = e.with(a, e.get(a).saturating_sub(1));
            }
        }
        e
    }

    /// Reported spacetime volume (padding layers excluded).
    pub fn volume(&self) -> usize {
        self.interior_extents().volume()
    }

    /// User-forbidden cubes together with the non-port cubes of padding
    /// layers.
    pub fn effective_forbidden(&self) -> BTreeSet<Coord> {
        let mut out = self.forbidden_cubes.clone();
        let pad = self.padding();
        let port_cubes = self.port_cubes();
        for c in self.extents.cubes() {
            let in_pad = Axis::ALL.iter().any(|a| pad[a.index()] && c.get(*a) == 0);
            if in_pad && !port_cubes.contains(&c) {
                out.insert(c);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecFile::from(self)).expect("spec serialization is infallible")
    }
}

/// Per axis: whether some port starts at layer 0 pointing `+`, which
/// makes that layer padding.
pub fn padding_layers(ports: &[PortSpec], extents: Extents) -> [bool; 3] {
    let mut pad = [false; 3];
    for p in ports {
        let a = p.direction.axis;
        if p.direction.positive && extents.contains(p.location) && p.location.get(a) == 0 {
            pad[a.index()] = true;
        }
    }
    pad
}

/// Color bit of a pipe along `axis` whose blue (Z) walls face `blue_normal`.
/// Bit 0 means the blue walls face the cyclic successor of `axis`.
pub fn color_for_blue_normal(axis: Axis, blue_normal: Axis) -> bool {
    debug_assert_ne!(axis, blue_normal);
    blue_normal != axis.next()
}

/// Axis normal to the blue walls of a pipe along `axis` with color `color`.
pub fn blue_normal(axis: Axis, color: bool) -> Axis {
    if color {
        Axis::third(axis, axis.next())
    } else {
        axis.next()
    }
}

/// Resolve the pipe a port pins to exist.
pub fn port_pipe(port: &PortSpec, extents: Extents) -> Result<PipeId, SpecError> {
    let loc = port.location;
    let axis = port.direction.axis;
    let outside: Vec<Axis> = Axis::ALL
        .into_iter()
        .filter(|a| loc.get(*a) >= extents.get(*a))
        .collect();
    let out_of_range = || SpecError::PortOutOfRange {
        location: loc,
        reason: format!(
            "not a valid start point for direction {} within {}",
            port.direction, extents
        ),
    };
    match outside.as_slice() {
        [] => {
            let next = loc.step(axis, port.direction.positive).ok_or_else(out_of_range)?;
            if !extents.contains(next) {
                return Err(out_of_range());
            }
            let base = if port.direction.positive { loc } else { next };
            Ok(PipeId::new(axis, base))
        }
        [a] if *a == axis && !port.direction.positive && loc.get(*a) == extents.get(*a) => {
            let base = loc.with(axis, loc.get(axis) - 1);
            Ok(PipeId::new(axis, base))
        }
        _ => Err(out_of_range()),
    }
}

/// Check every structural invariant; empty means valid.
pub fn validate_spec(spec: &SubroutineSpec) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let e = spec.extents;
    if e.n_i == 0 || e.n_j == 0 || e.n_k == 0 {
        diags.push(Diagnostic::new("empty-extent", e, "all extents must be positive"));
        return diags;
    }
    let mut pipes: BTreeMap<PipeId, usize> = BTreeMap::new();
    for (idx, port) in spec.ports.iter().enumerate() {
        let here = format!("port {idx} {}", port.location);
        if port.z_basis_dir == port.direction.axis {
            diags.push(Diagnostic::new(
                "z-basis-parallel",
                &here,
                format!(
                    "z_basis_dir {} is parallel to direction {}",
                    port.z_basis_dir, port.direction
                ),
            ));
        }
        match port_pipe(port, e) {
            Ok(pipe) => {
                if let Some(prev) = pipes.insert(pipe, idx) {
                    diags.push(Diagnostic::new(
                        "duplicate-port-pipe",
                        &here,
                        format!("pipe {pipe} already claimed by port {prev}"),
                    ));
                }
                let mut ends = vec![pipe.base];
                if e.contains(pipe.tip()) {
                    ends.push(pipe.tip());
                }
                if ends.iter().any(|c| spec.forbidden_cubes.contains(c)) {
                    diags.push(Diagnostic::new(
                        "forbidden-port-conflict",
                        &here,
                        format!("port pipe {pipe} touches a forbidden cube"),
                    ));
                }
            }
            Err(err) => diags.push(Diagnostic::new("port-location-out-of-range", &here, err.to_string())),
        }
    }
    // Two ports starting from the same interior cube would both fan out of it.
    let mut starts = BTreeMap::new();
    for (idx, port) in spec.ports.iter().enumerate() {
        if e.contains(port.location) {
            if let Some(prev) = starts.insert(port.location, idx) {
                diags.push(Diagnostic::new(
                    "duplicate-port-pipe",
                    format!("port {idx} {}", port.location),
                    format!("start cube shared with port {prev}"),
                ));
            }
        }
    }
    if spec.stabilizers.is_empty() {
        diags.push(Diagnostic::new(
            "no-stabilizers",
            &spec.name,
            "at least one stabilizer flow is required",
        ));
    }
    for (s, flow) in spec.stabilizers.iter().enumerate() {
        if flow.len() != spec.ports.len() {
            diags.push(Diagnostic::new(
                "stabilizer-length",
                format!("stabilizer {s}"),
                format!(
                    "flow `{flow}` has {} letters for {} ports",
                    flow.len(),
                    spec.ports.len()
                ),
            ));
        } else if flow.is_identity() {
            diags.push(Diagnostic::new(
                "identity-stabilizer",
                format!("stabilizer {s}"),
                "flow is all identity",
            ));
        }
    }
    for c in &spec.forbidden_cubes {
        if !e.contains(*c) {
            diags.push(Diagnostic::new(
                "forbidden-out-of-range",
                c,
                "forbidden cube lies outside the extents",
            ));
        }
    }
    for name in spec.pins.keys() {
        let ok = e.contains(name.coord)
            && match name.stabilizer {
                Some(s) => s < spec.n_stab(),
                None => true,
            };
        if !ok {
            diags.push(Diagnostic::new(
                "unknown-pin",
                name,
                "pinned variable does not exist for these extents",
            ));
        }
    }
    diags
}

/// Parse and validate a JSON spec file.
pub fn parse_spec(text: &str) -> Result<SubroutineSpec, SpecError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| SpecError::Schema(e.to_string()))?;
    let spec = SubroutineSpec::try_from(file)?;
    let diags = validate_spec(&spec);
    match diags.into_iter().next() {
        None => Ok(spec),
        Some(d) => Err(SpecError::from_diagnostic(&d)),
    }
}

/// On-disk JSON layout of a specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecFile {
    pub name: String,
    pub n_i: usize,
    pub n_j: usize,
    pub n_k: usize,
    pub ports: Vec<PortFile>,
    pub stabilizers: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forbidden_cubes: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pins: BTreeMap<String, u8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PortFile {
    pub location: [usize; 3],
    pub direction: String,
    pub z_basis_dir: String,
    #[serde(default)]
    pub label: String,
}

impl From<&SubroutineSpec> for SpecFile {
    fn from(spec: &SubroutineSpec) -> Self {
        SpecFile {
            name: spec.name.clone(),
            n_i: spec.extents.n_i,
            n_j: spec.extents.n_j,
            n_k: spec.extents.n_k,
            ports: spec
                .ports
                .iter()
                .map(|p| PortFile {
                    location: p.location.as_array(),
                    direction: p.direction.to_string(),
                    z_basis_dir: p.z_basis_dir.to_string(),
                    label: p.label.clone(),
                })
                .collect(),
            stabilizers: spec.stabilizers.iter().map(|s| s.to_string()).collect(),
            forbidden_cubes: spec.forbidden_cubes.iter().map(|c| c.as_array()).collect(),
            pins: spec.pins.iter().map(|(n, v)| (n.to_string(), u8::from(*v))).collect(),
        }
    }
}

impl TryFrom<SpecFile> for SubroutineSpec {
    type Error = SpecError;

    fn try_from(file: SpecFile) -> Result<Self, Self::Error> {
        let ports = file
            .ports
            .into_iter()
            .map(|p| {
                Ok(PortSpec {
                    location: p.location.into(),
                    direction: p.direction.parse()?,
                    z_basis_dir: p.z_basis_dir.parse()?,
                    label: p.label,
                })
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        let stabilizers = file
            .stabilizers
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>, _>>()?;
        let pins = file
            .pins
            .into_iter()
            .map(|(name, v)| match v {
                0 | 1 => Ok((name.parse()?, v == 1)),
                _ => Err(SpecError::Schema(format!("pin `{name}` must be 0 or 1"))),
            })
            .collect::<Result<BTreeMap<_, _>, SpecError>>()?;
        Ok(SubroutineSpec {
            name: file.name,
            extents: Extents::new(file.n_i, file.n_j, file.n_k),
            ports,
            stabilizers,
            forbidden_cubes: file.forbidden_cubes.into_iter().map(Coord::from).collect(),
            pins,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CNOT: &str = include_str!("../specs/cnot.json");

    #[test]
    fn parses_cnot_file() {
        let spec = parse_spec(CNOT).unwrap();
        assert_eq!(spec.name, "cnot");
        assert_eq!(spec.extents, Extents::new(2, 2, 3));
        assert_eq!(spec.ports.len(), 4);
        let p3 = &spec.ports[3];
        assert_eq!(p3.location, Coord::new(1, 0, 3));
        assert_eq!(p3.direction, Direction::new(Axis::K, false));
        assert_eq!(p3.z_basis_dir, Axis::J);
        assert_eq!(spec.volume(), 8);
        assert!(validate_spec(&spec).is_empty());
    }

    #[test]
    fn identity_column_is_valid() {
        let text = r#"{"name":"id","n_i":1,"n_j":1,"n_k":3,
            "ports":[{"location":[0,0,0],"direction":"+K","z_basis_dir":"I"},
                     {"location":[0,0,3],"direction":"-K","z_basis_dir":"I"}],
            "stabilizers":["ZZ","XX"]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.ports.len(), 2);
    }

    #[test]
    fn rejects_short_flow() {
        let mut file: SpecFile = serde_json::from_str(CNOT).unwrap();
        file.stabilizers[1] = "IZZ".into();
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(parse_spec(&text), Err(SpecError::StabilizerLength { .. })));
    }

    #[test]
    fn rejects_parallel_z_basis() {
        let mut file: SpecFile = serde_json::from_str(CNOT).unwrap();
        file.ports[0].z_basis_dir = "K".into();
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(parse_spec(&text), Err(SpecError::ZBasisParallel { .. })));
    }

    #[test]
    fn duplicate_port_pipe_is_diagnosed() {
        let mut spec = parse_spec(CNOT).unwrap();
        // A second port through the top of the control column claims ExistK(0,1,2) again.
        spec.ports.push(PortSpec::new(
            Coord::new(0, 1, 3),
            Direction::new(Axis::K, false),
            Axis::J,
            "dup",
        ));
        for s in &mut spec.stabilizers {
            s.0.push(PauliOp::I);
        }
        let rules: Vec<_> = validate_spec(&spec).into_iter().map(|d| d.rule).collect();
        assert_eq!(rules, vec!["duplicate-port-pipe"]);
    }

    #[test]
    fn forbidden_cube_on_port_pipe() {
        let mut spec = parse_spec(CNOT).unwrap();
        spec.forbidden_cubes.insert(Coord::new(1, 0, 2));
        let rules: Vec<_> = validate_spec(&spec).into_iter().map(|d| d.rule).collect();
        assert_eq!(rules, vec!["forbidden-port-conflict"]);
    }

    #[test]
    fn port_pipe_cases() {
        let e = Extents::new(2, 2, 3);
        let up = PortSpec::new(Coord::new(0, 1, 0), Direction::new(Axis::K, true), Axis::J, "");
        assert_eq!(port_pipe(&up, e).unwrap(), PipeId::new(Axis::K, Coord::new(0, 1, 0)));
        let down = PortSpec::new(Coord::new(1, 0, 3), Direction::new(Axis::K, false), Axis::J, "");
        assert_eq!(port_pipe(&down, e).unwrap(), PipeId::new(Axis::K, Coord::new(1, 0, 2)));
        let side = PortSpec::new(Coord::new(2, 1, 1), Direction::new(Axis::I, false), Axis::J, "");
        assert_eq!(port_pipe(&side, e).unwrap(), PipeId::new(Axis::I, Coord::new(1, 1, 1)));
        let bad = PortSpec::new(Coord::new(2, 1, 3), Direction::new(Axis::I, false), Axis::J, "");
        assert!(port_pipe(&bad, e).is_err());
        let wrong_way = PortSpec::new(Coord::new(1, 0, 3), Direction::new(Axis::K, true), Axis::J, "");
        assert!(port_pipe(&wrong_way, e).is_err());
    }

    #[test]
    fn color_convention() {
        // Red walls facing K on an I pipe is color 0.
        assert!(!color_for_blue_normal(Axis::I, Axis::J));
        assert_eq!(blue_normal(Axis::I, true), Axis::K);
        assert_eq!(blue_normal(Axis::J, false), Axis::K);
        assert_eq!(blue_normal(Axis::K, false), Axis::I);
        for a in Axis::ALL {
            for c in [false, true] {
                assert_eq!(color_for_blue_normal(a, blue_normal(a, c)), c);
            }
        }
    }

    #[test]
    fn arrow_flows_flatten() {
        let f: StabilizerFlow = "IZ->ZZ".parse().unwrap();
        assert_eq!(f.to_string(), "IZZZ");
        let g: StabilizerFlow = "X. → XX".parse().unwrap();
        assert_eq!(g.to_string(), "XIXX");
    }

    #[test]
    fn var_names_round_trip() {
        for text in ["ExistK[1,0,2]", "CorrIJ[1,0,1,2]", "YCube[0,0,0]"] {
            let n: VarName = text.parse().unwrap();
            assert_eq!(n.to_string(), text);
        }
        assert!("CorrIJ[1,0,1]".parse::<VarName>().is_err());
        assert!("ExistQ[1,0,1]".parse::<VarName>().is_err());
    }
}
