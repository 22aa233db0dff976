//! glTF 2.0 export of pipe diagrams and correlation-surface overlays.
//!
//! Lattice axes map to scene axes as I -> +x, K -> +y (up), J -> -z. Cubes
//! are unit boxes spaced `1 + elongation` apart, so pipes are `elongation`
//! long.

mod check;

use std::collections::BTreeMap;

use base64::Engine;
use serde_json::{json, Value};

pub use check::check_gltf;

use crate::error::LasreError;
use crate::lasre::Lasre;
use crate::spec::{blue_normal, Axis, Coord, PipeId};

pub type Rgba = [f32; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct Palette {
    pub x: Rgba,
    pub z: Rgba,
    pub y: Rgba,
    pub wall: Rgba,
    pub port: Rgba,
    /// Faces no pipe determines.
    pub neutral: Rgba,
    pub corr_x: Rgba,
    pub corr_z: Rgba,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            x: [0.85, 0.15, 0.15, 1.0],
            z: [0.15, 0.3, 0.9, 1.0],
            y: [0.2, 0.75, 0.25, 1.0],
            wall: [0.95, 0.85, 0.1, 1.0],
            port: [1.0, 1.0, 1.0, 1.0],
            neutral: [0.6, 0.6, 0.6, 1.0],
            corr_x: [1.0, 0.4, 0.4, 0.45],
            corr_z: [0.4, 0.55, 1.0, 0.45],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    /// Pipe length in cube edge lengths; at least 1.
    pub elongation: f32,
    /// Stabilizer whose correlation surface is overlaid.
    pub corr: Option<usize>,
    pub palette: Palette,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            elongation: 2.0,
            corr: None,
            palette: Palette::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Paint {
    X,
    Z,
    Y,
    Wall,
    Port,
    Neutral,
    CorrX,
    CorrZ,
}

impl Paint {
    fn name(self) -> &'static str {
        match self {
            Paint::X => "x_boundary",
            Paint::Z => "z_boundary",
            Paint::Y => "y_cube",
            Paint::Wall => "domain_wall",
            Paint::Port => "injection",
            Paint::Neutral => "neutral",
            Paint::CorrX => "corr_x",
            Paint::CorrZ => "corr_z",
        }
    }

    fn rgba(self, p: &Palette) -> Rgba {
        match self {
            Paint::X => p.x,
            Paint::Z => p.z,
            Paint::Y => p.y,
            Paint::Wall => p.wall,
            Paint::Port => p.port,
            Paint::Neutral => p.neutral,
            Paint::CorrX => p.corr_x,
            Paint::CorrZ => p.corr_z,
        }
    }
}

/// Axis-aligned box in lattice axes: half-sizes and center offset, with
/// one paint per face ordered (-I, +I, -J, +J, -K, +K).
#[derive(Clone, Copy, Debug, PartialEq)]
struct Slab {
    half: [f32; 3],
    offset: [f32; 3],
    faces: [Paint; 6],
}

fn uniform(paint: Paint) -> [Paint; 6] {
    [paint; 6]
}

fn scene_xyz(lattice: [f32; 3]) -> [f32; 3] {
    [lattice[0], lattice[2], -lattice[1]]
}

struct Builder<'a> {
    palette: &'a Palette,
    bin: Vec<u8>,
    accessors: Vec<Value>,
    buffer_views: Vec<Value>,
    materials: Vec<Value>,
    material_of: BTreeMap<Paint, usize>,
    /// Face geometry accessors keyed by box bits and face index.
    face_of: BTreeMap<([u32; 6], usize), usize>,
    quad_indices: Option<usize>,
    meshes: Vec<Value>,
    mesh_of: BTreeMap<String, usize>,
    nodes: Vec<Value>,
}

impl<'a> Builder<'a> {
    fn new(palette: &'a Palette) -> Self {
        Builder {
            palette,
            bin: Vec::new(),
            accessors: Vec::new(),
            buffer_views: Vec::new(),
            materials: Vec::new(),
            material_of: BTreeMap::new(),
            face_of: BTreeMap::new(),
            quad_indices: None,
            meshes: Vec::new(),
            mesh_of: BTreeMap::new(),
            nodes: Vec::new(),
        }
    }

    fn view(&mut self, bytes: &[u8], target: u32) -> usize {
        while !self.bin.len().is_multiple_of(4) {
            self.bin.push(0);
        }
        let offset = self.bin.len();
        self.bin.extend_from_slice(bytes);
        self.buffer_views.push(json!({
            "buffer": 0,
            "byteOffset": offset,
            "byteLength": bytes.len(),
            "target": target,
        }));
        self.buffer_views.len() - 1
    }

    fn material(&mut self, paint: Paint) -> usize {
        if let Some(&m) = self.material_of.get(&paint) {
            return m;
        }
        let rgba = paint.rgba(self.palette);
        let mut m = json!({
            "name": paint.name(),
            "pbrMetallicRoughness": {
                "baseColorFactor": rgba,
                "metallicFactor": 0.0,
                "roughnessFactor": 1.0,
            },
            "doubleSided": true,
            "extensions": { "KHR_materials_unlit": {} },
        });
        if rgba[3] < 1.0 {
            m["alphaMode"] = "BLEND".into();
        }
        self.materials.push(m);
        self.material_of.insert(paint, self.materials.len() - 1);
        self.materials.len() - 1
    }

    fn indices(&mut self) -> usize {
        if let Some(a) = self.quad_indices {
            return a;
        }
        let idx: Vec<u8> = [0u16, 1, 2, 0, 2, 3].iter().flat_map(|v| v.to_le_bytes()).collect();
        let view = self.view(&idx, 34963);
        self.accessors.push(json!({
            "bufferView": view,
            "componentType": 5123,
            "count": 6,
            "type": "SCALAR",
        }));
        self.quad_indices = Some(self.accessors.len() - 1);
        self.accessors.len() - 1
    }

    /// Accessor with the four corners of face `f` of a box.
    fn face(&mut self, half: [f32; 3], offset: [f32; 3], f: usize) -> usize {
        let mut key = [0u32; 6];
        for a in 0..3 {
            key[a] = half[a].to_bits();
            key[3 + a] = offset[a].to_bits();
        }
        if let Some(&acc) = self.face_of.get(&(key, f)) {
            return acc;
        }
        let axis = f / 2;
        let sign = if f.is_multiple_of(2) { -1.0 } else { 1.0 };
        let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
        let mut corners = Vec::with_capacity(4);
        for (su, sv) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            let mut p = offset;
            p[axis] += sign * half[axis];
            p[u] += su * half[u];
            p[v] += sv * half[v];
            corners.push(scene_xyz(p));
        }
        let mut min = corners[0];
        let mut max = corners[0];
        for c in &corners {
            for a in 0..3 {
                min[a] = min[a].min(c[a]);
                max[a] = max[a].max(c[a]);
            }
        }
        let bytes: Vec<u8> = corners.iter().flatten().flat_map(|x| x.to_le_bytes()).collect();
        let view = self.view(&bytes, 34962);
        self.accessors.push(json!({
            "bufferView": view,
            "componentType": 5126,
            "count": 4,
            "type": "VEC3",
            "min": min,
            "max": max,
        }));
        self.face_of.insert((key, f), self.accessors.len() - 1);
        self.accessors.len() - 1
    }

    fn mesh(&mut self, slabs: &[Slab]) -> usize {
        let key = format!("{slabs:?}");
        if let Some(&m) = self.mesh_of.get(&key) {
            return m;
        }
        let indices = self.indices();
        let mut prims = Vec::new();
        for s in slabs {
            for (f, paint) in s.faces.iter().enumerate() {
                let pos = self.face(s.half, s.offset, f);
                let mat = self.material(*paint);
                prims.push(json!({
                    "attributes": { "POSITION": pos },
                    "indices": indices,
                    "material": mat,
                }));
            }
        }
        self.meshes.push(json!({ "primitives": prims }));
        self.mesh_of.insert(key, self.meshes.len() - 1);
        self.meshes.len() - 1
    }

    fn node(&mut self, name: String, center: [f32; 3], slabs: &[Slab]) {
        let mesh = self.mesh(slabs);
        self.nodes.push(json!({
            "name": name,
            "mesh": mesh,
            "translation": scene_xyz(center),
        }));
    }

    fn finish(self) -> Vec<u8> {
        let mut doc = json!({
            "asset": { "version": "2.0", "generator": "las-synth" },
            "scene": 0,
            "scenes": [{ "nodes": (0..self.nodes.len()).collect::<Vec<_>>() }],
            "nodes": self.nodes,
        });
        if !self.meshes.is_empty() {
            let uri = format!(
                "data:application/octet-stream;base64,{}",
                base64::engine::general_purpose::STANDARD.encode(&self.bin)
            );
            doc["meshes"] = self.meshes.into();
            doc["materials"] = self.materials.into();
            doc["accessors"] = self.accessors.into();
            doc["bufferViews"] = self.buffer_views.into();
            doc["buffers"] = json!([{ "byteLength": self.bin.len(), "uri": uri }]);
            doc["extensionsUsed"] = json!(["KHR_materials_unlit"]);
        }
        serde_json::to_vec(&doc).expect("glTF serialization is infallible")
    }
}

fn face_index(axis: Axis, positive: bool) -> usize {
    2 * axis.index() + usize::from(positive)
}

/// Paint of the walls normal to `normal` on a pipe along `axis`.
fn wall_paint(axis: Axis, color: bool, normal: Axis) -> Paint {
    if blue_normal(axis, color) == normal {
        Paint::Z
    } else {
        Paint::X
    }
}

struct Scene<'l> {
    l: &'l Lasre,
    pitch: f32,
}

impl Scene<'_> {
    fn center(&self, c: Coord) -> [f32; 3] {
        let a = c.as_array();
        [
            a[0] as f32 * self.pitch,
            a[1] as f32 * self.pitch,
            a[2] as f32 * self.pitch,
        ]
    }

    fn pipe_center(&self, p: PipeId) -> [f32; 3] {
        let mut c = self.center(p.base);
        c[p.axis.index()] += self.pitch / 2.0;
        c
    }

    /// Color bit of `p` at its `upper` end; K pipes need derived colors.
    fn color_at(&self, p: PipeId, upper: bool) -> bool {
        match p.axis {
            Axis::K => {
                let g = if upper { &self.l.color_kp } else { &self.l.color_km };
                g.as_ref().map(|g| g.get(p.base)).unwrap_or(false)
            }
            _ => self.l.color(p),
        }
    }

    fn pipe_faces(&self, p: PipeId, upper: bool) -> [Paint; 6] {
        let mut faces = uniform(Paint::Neutral);
        let color = self.color_at(p, upper);
        for n in p.axis.others() {
            let paint = wall_paint(p.axis, color, n);
            faces[face_index(n, false)] = paint;
            faces[face_index(n, true)] = paint;
        }
        faces
    }

    fn pipe_slabs(&self, p: PipeId) -> Vec<Slab> {
        let len = self.pitch - 1.0;
        let a = p.axis.index();
        let walled = p.axis == Axis::K && self.l.domain_walls.contains(&p.base);
        if !walled {
            let mut half = [0.5; 3];
            half[a] = len / 2.0;
            return vec![Slab {
                half,
                offset: [0.0; 3],
                faces: self.pipe_faces(p, false),
            }];
        }
        // Lower and upper halves carry their own end colors.
        let mut half = [0.5; 3];
        half[a] = len / 4.0;
        let mut lo = [0.0; 3];
        lo[a] = -len / 4.0;
        let mut hi = [0.0; 3];
        hi[a] = len / 4.0;
        vec![
            Slab {
                half,
                offset: lo,
                faces: self.pipe_faces(p, false),
            },
            Slab {
                half,
                offset: hi,
                faces: self.pipe_faces(p, true),
            },
        ]
    }

    fn cube_faces(&self, c: Coord, injection: bool) -> [Paint; 6] {
        if self.l.ycube.get(c) {
            return uniform(Paint::Y);
        }
        if injection {
            return uniform(Paint::Port);
        }
        let mut faces = uniform(Paint::Neutral);
        for n in Axis::ALL {
            let owner = self.l.pipes_at(c).into_iter().find(|p| p.axis != n);
            if let Some(p) = owner {
                let paint = wall_paint(p.axis, self.color_at(p, p.base != c), n);
                faces[face_index(n, false)] = paint;
                faces[face_index(n, true)] = paint;
            }
        }
        faces
    }
}

fn base(b: &mut Builder, l: &Lasre, opts: &RenderOptions) {
    let scene = Scene {
        l,
        pitch: 1.0 + opts.elongation.max(1.0),
    };
    let injection_cubes: Vec<Coord> = l
        .ports
        .iter()
        .filter(|p| p.is_injection() && l.extents.contains(p.location))
        .map(|p| p.location)
        .collect();
    for c in l.occupied_cubes() {
        let slab = Slab {
            half: [0.5; 3],
            offset: [0.0; 3],
            faces: scene.cube_faces(c, injection_cubes.contains(&c)),
        };
        b.node(format!("cube{c}"), scene.center(c), &[slab]);
    }
    for p in l.pipes() {
        let slabs = scene.pipe_slabs(p);
        b.node(p.to_string(), scene.pipe_center(p), &slabs);
    }
    for &w in &l.domain_walls {
        let p = PipeId::new(Axis::K, w);
        if !l.exists(p) {
            continue;
        }
        let band = Slab {
            half: [0.56, 0.56, (scene.pitch - 1.0) / 16.0],
            offset: [0.0; 3],
            faces: uniform(Paint::Wall),
        };
        b.node(format!("wall{w}"), scene.pipe_center(p), &[band]);
    }
}

fn overlay(b: &mut Builder, l: &Lasre, s: usize, opts: &RenderOptions) {
    let scene = Scene {
        l,
        pitch: 1.0 + opts.elongation.max(1.0),
    };
    for p in l.pipes() {
        for plane in p.axis.others() {
            if !l.corr(s, p, plane) {
                continue;
            }
            let thin = Axis::third(p.axis, plane);
            let mut half = [0.0; 3];
            half[p.axis.index()] = (scene.pitch - 1.0) / 2.0;
            half[plane.index()] = 0.45;
            half[thin.index()] = 0.01;
            // The sheet ends on the walls normal to `plane`; a walled K pipe
            // is tinted by its lower half.
            let paint = match wall_paint(p.axis, scene.color_at(p, false), plane) {
                Paint::Z => Paint::CorrZ,
                _ => Paint::CorrX,
            };
            let rect = Slab {
                half,
                offset: [0.0; 3],
                faces: uniform(paint),
            };
            b.node(
                format!("corr{s}_{}{}{}", p.axis.letter(), plane.letter(), p.base),
                scene.pipe_center(p),
                &[rect],
            );
        }
    }
}

/// Render the pipe diagram. `options.corr` is ignored; see `corr_overlay`.
pub fn to_gltf(lasre: &Lasre, options: &RenderOptions) -> Vec<u8> {
    let mut b = Builder::new(&options.palette);
    base(&mut b, lasre, options);
    b.finish()
}

/// The pipe diagram plus translucent sheets for each set correlation bit of
/// stabilizer `s`.
pub fn corr_overlay(lasre: &Lasre, s: usize, options: &RenderOptions) -> Result<Vec<u8>, LasreError> {
    if s >= lasre.n_stab() {
        return Err(LasreError::StabilizerIndex {
            index: s,
            n_stab: lasre.n_stab(),
        });
    }
    let mut b = Builder::new(&options.palette);
    base(&mut b, lasre, options);
    overlay(&mut b, lasre, s, options);
    Ok(b.finish())
}

/// Dispatch on `options.corr`.
pub fn render(lasre: &Lasre, options: &RenderOptions) -> Result<Vec<u8>, LasreError> {
    match options.corr {
        Some(s) => corr_overlay(lasre, s, options),
        None => Ok(to_gltf(lasre, options)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasre::tests::solved_cnot;
    use crate::lasre::{color_k_pipes, prune};
    use crate::spec::Extents;

    fn nodes(bytes: &[u8]) -> Vec<String> {
        let v: Value = serde_json::from_slice(bytes).unwrap();
        v["nodes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|n| n["name"].as_str().unwrap().to_string())
            .collect()
    }

    #[test]
    fn empty_lasre_has_no_meshes() {
        let l = Lasre::empty(Extents::new(2, 2, 2), vec![], vec![]);
        let g = to_gltf(&l, &RenderOptions::default());
        assert!(check_gltf(&g).is_empty());
        let v: Value = serde_json::from_slice(&g).unwrap();
        assert!(v.get("meshes").is_none());
        assert!(nodes(&g).is_empty());
    }

    #[test]
    fn node_count_is_cubes_plus_pipes() {
        let l = color_k_pipes(&prune(&solved_cnot())).unwrap();
        let g = to_gltf(&l, &RenderOptions::default());
        assert_eq!(check_gltf(&g), Vec::<String>::new());
        assert_eq!(
            nodes(&g).len(),
            l.occupied_cubes().len() + l.pipe_count() + l.domain_walls.len()
        );
        assert_eq!(g, to_gltf(&l, &RenderOptions::default()));
    }

    #[test]
    fn overlay_index_is_checked() {
        let l = color_k_pipes(&prune(&solved_cnot())).unwrap();
        assert!(corr_overlay(&l, 4, &RenderOptions::default()).is_err());
    }

    #[test]
    fn empty_overlay_equals_base() {
        let mut l = color_k_pipes(&prune(&solved_cnot())).unwrap();
        for g in l.corr[0].iter_mut() {
            *g = crate::lasre::BitGrid::new(l.extents);
        }
        let opts = RenderOptions::default();
        assert_eq!(corr_overlay(&l, 0, &opts).unwrap(), to_gltf(&l, &opts));
    }
}
