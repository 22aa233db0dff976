//! Structural checks on emitted glTF documents.

use base64::Engine;
use serde_json::Value;

fn array<'a>(doc: &'a Value, key: &str) -> &'a [Value] {
    doc.get(key).and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[])
}

fn index(v: &Value, key: &str) -> Option<usize> {
    v.get(key).and_then(Value::as_u64).map(|x| x as usize)
}

fn element_size(acc: &Value) -> Option<usize> {
    let comp = match acc["componentType"].as_u64()? {
        5120 | 5121 => 1,
        5122 | 5123 => 2,
        5125 | 5126 => 4,
        _ => return None,
    };
    let n = match acc["type"].as_str()? {
        "SCALAR" => 1,
        "VEC2" => 2,
        "VEC3" => 3,
        "VEC4" => 4,
        "MAT4" => 16,
        _ => return None,
    };
    Some(comp * n)
}

/// Problems found in a glTF JSON document with embedded buffers; empty
/// means every reference resolves and every accessor fits its view.
pub fn check_gltf(bytes: &[u8]) -> Vec<String> {
    let mut out = Vec::new();
    let doc: Value = match serde_json::from_slice(bytes) {
        Ok(v) => v,
        Err(e) => return vec![format!("not JSON: {e}")],
    };
    if doc["asset"]["version"] != "2.0" {
        out.push("asset.version is not 2.0".into());
    }
    let mut buffer_lens = Vec::new();
    for (i, b) in array(&doc, "buffers").iter().enumerate() {
        let declared = index(b, "byteLength").unwrap_or(0);
        let data = b["uri"]
            .as_str()
            .and_then(|u| u.strip_prefix("data:application/octet-stream;base64,"))
            .and_then(|d| base64::engine::general_purpose::STANDARD.decode(d).ok());
        match data {
            Some(d) if d.len() == declared => buffer_lens.push(d.len()),
            Some(d) => {
                out.push(format!("buffer {i}: byteLength {declared} but {} bytes", d.len()));
                buffer_lens.push(d.len());
            }
            None => {
                out.push(format!("buffer {i}: missing or undecodable data URI"));
                buffer_lens.push(0);
            }
        }
    }
    let views = array(&doc, "bufferViews");
    for (i, v) in views.iter().enumerate() {
        let buf = index(v, "buffer");
        let end = index(v, "byteOffset").unwrap_or(0) + index(v, "byteLength").unwrap_or(0);
        match buf.and_then(|b| buffer_lens.get(b)) {
            Some(&len) if end <= len => {}
            Some(_) => out.push(format!("bufferView {i} overruns its buffer")),
            None => out.push(format!("bufferView {i} references a missing buffer")),
        }
    }
    let accessors = array(&doc, "accessors");
    for (i, a) in accessors.iter().enumerate() {
        let Some(view) = index(a, "bufferView").and_then(|v| views.get(v)) else {
            out.push(format!("accessor {i} references a missing bufferView"));
            continue;
        };
        let Some(size) = element_size(a) else {
            out.push(format!("accessor {i} has an unknown element type"));
            continue;
        };
        let need = index(a, "byteOffset").unwrap_or(0) + size * index(a, "count").unwrap_or(0);
        if need > index(view, "byteLength").unwrap_or(0) {
            out.push(format!("accessor {i} needs {need} bytes beyond its view"));
        }
    }
    let materials = array(&doc, "materials").len();
    let meshes = array(&doc, "meshes");
    for (i, m) in meshes.iter().enumerate() {
        for (j, p) in array(m, "primitives").iter().enumerate() {
            let pos = p["attributes"]["POSITION"].as_u64().map(|x| x as usize);
            match pos.and_then(|x| accessors.get(x)) {
                Some(acc) if acc["type"] == "VEC3" => {
                    if acc.get("min").is_none() || acc.get("max").is_none() {
                        out.push(format!("mesh {i} primitive {j}: POSITION lacks min/max"));
                    }
                }
                _ => out.push(format!("mesh {i} primitive {j}: bad POSITION accessor")),
            }
            if let Some(ix) = index(p, "indices") {
                match accessors.get(ix) {
                    Some(acc) if index(acc, "count").unwrap_or(0).is_multiple_of(3) => {}
                    _ => out.push(format!("mesh {i} primitive {j}: bad index accessor")),
                }
            }
            if index(p, "material").is_some_and(|m| m >= materials) {
                out.push(format!("mesh {i} primitive {j}: missing material"));
            }
        }
    }
    let nodes = array(&doc, "nodes");
    for (i, n) in nodes.iter().enumerate() {
        if index(n, "mesh").is_some_and(|m| m >= meshes.len()) {
            out.push(format!("node {i}: missing mesh"));
        }
    }
    for (i, s) in array(&doc, "scenes").iter().enumerate() {
        for n in array(s, "nodes") {
            if n.as_u64().is_none_or(|n| n as usize >= nodes.len()) {
                out.push(format!("scene {i}: bad node reference"));
            }
        }
    }
    out
}
