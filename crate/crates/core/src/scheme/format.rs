//! The JSON scheme file format, version 1.

use super::{Label, MarkedSphere, OrbitPortrait, PortraitPoint, TreeMappingScheme};
use crate::arith::{fmt_rat, parse_rat};
use crate::rational::RationalMap;
use crate::tree::{Edge, TreePair};
use crate::treemap::TreeMap;
use crate::value::ComplexValue;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const TMS_VERSION: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("schema version mismatch: expected {TMS_VERSION}, found {0}")]
    SchemaVersionMismatch(u64),
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
}

fn field(field: impl Into<String>, msg: impl Into<String>) -> FormatError {
    FormatError::Field { field: field.into(), msg: msg.into() }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileScheme {
    tms_version: u64,
    tree: FileTree,
    tree_map: FileTreeMap,
    spheres: BTreeMap<usize, FileSphere>,
    maps: BTreeMap<usize, FileMap>,
    portrait: FilePortrait,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTree {
    vertices: Vec<FileVertex>,
    edges: Vec<FileEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileVertex {
    id: usize,
    in_t0: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEdge {
    a: usize,
    b: usize,
    length: String,
    in_t0: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTreeMap {
    vertex_images: BTreeMap<usize, usize>,
    edge_degrees: BTreeMap<usize, u32>,
    vertex_degrees: BTreeMap<usize, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSphere {
    markings: BTreeMap<usize, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileMap {
    num: Vec<String>,
    den: Vec<String>,
    degree: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePortrait {
    points: Vec<FilePoint>,
    successors: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePoint {
    sphere: usize,
    value: String,
    labels: Vec<String>,
    local_degree: u32,
}

fn cv(s: &str, at: impl Fn() -> String) -> Result<ComplexValue, FormatError> {
    ComplexValue::parse(s).map_err(|m| field(at(), m))
}

pub fn parse(text: &str) -> Result<TreeMappingScheme, FormatError> {
    let raw: FileScheme = match serde_json::from_str(text) {
        Ok(r) => r,
        Err(e) => {
            // report a version mismatch in preference to field errors
            if let Ok(v) = serde_json::from_str::<serde_json::Value>(text) {
                if let Some(ver) = v.get("tms_version").and_then(|x| x.as_u64()) {
                    if ver != TMS_VERSION {
                        return Err(FormatError::SchemaVersionMismatch(ver));
                    }
                }
            }
            return Err(FormatError::Parse { line: e.line(), column: e.column(), msg: e.to_string() });
        }
    };
    if raw.tms_version != TMS_VERSION {
        return Err(FormatError::SchemaVersionMismatch(raw.tms_version));
    }
    let n = raw.tree.vertices.len();
    let mut in_t0 = vec![None; n];
    for (i, v) in raw.tree.vertices.iter().enumerate() {
        if v.id >= n || in_t0[v.id].is_some() {
            return Err(field(format!("tree.vertices[{i}].id"), "ids must be dense and distinct"));
        }
        in_t0[v.id] = Some(v.in_t0);
    }
    let in_t0: Vec<bool> = in_t0.into_iter().map(|x| x.unwrap()).collect();
    let mut edges = Vec::new();
    for (i, e) in raw.tree.edges.iter().enumerate() {
        let length = parse_rat(&e.length).map_err(|m| field(format!("tree.edges[{i}].length"), m))?;
        edges.push(Edge { a: e.a, b: e.b, length, in_t0: e.in_t0 });
    }
    let tree = TreePair::new(in_t0, edges).map_err(|e| field("tree", e.to_string()))?;
    let map = TreeMap {
        vertex_image: raw.tree_map.vertex_images,
        edge_degree: raw.tree_map.edge_degrees,
        vertex_degree: raw.tree_map.vertex_degrees,
    };
    for (v, w) in &map.vertex_image {
        if *v >= n || *w >= n {
            return Err(field(format!("tree_map.vertex_images.{v}"), "vertex does not exist"));
        }
    }
    for e in map.edge_degree.keys() {
        if *e >= tree.edges().len() {
            return Err(field(format!("tree_map.edge_degrees.{e}"), "edge does not exist"));
        }
    }
    for (e, d) in &map.edge_degree {
        if *d == 0 {
            return Err(field(format!("tree_map.edge_degrees.{e}"), "degree must be positive"));
        }
    }
    for (v, d) in &map.vertex_degree {
        if *v >= n || *d == 0 {
            return Err(field(format!("tree_map.vertex_degrees.{v}"), "bad vertex or degree"));
        }
    }
    let mut spheres = vec![MarkedSphere::default(); n];
    for (v, s) in raw.spheres {
        if v >= n {
            return Err(field(format!("spheres.{v}"), "vertex does not exist"));
        }
        for (e, z) in s.markings {
            if e >= tree.edges().len() {
                return Err(field(format!("spheres.{v}.markings.{e}"), "edge does not exist"));
            }
            let val = cv(&z, || format!("spheres.{v}.markings.{e}"))?;
            spheres[v].markings.insert(e, val);
        }
    }
    let mut maps = BTreeMap::new();
    for (v, m) in raw.maps {
        let num = m
            .num
            .iter()
            .enumerate()
            .map(|(i, z)| cv(z, || format!("maps.{v}.num[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let den = m
            .den
            .iter()
            .enumerate()
            .map(|(i, z)| cv(z, || format!("maps.{v}.den[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if m.degree == 0 {
            return Err(field(format!("maps.{v}.degree"), "degree must be positive"));
        }
        maps.insert(v, RationalMap { num, den, degree: m.degree });
    }
    let mut points = Vec::new();
    for (i, p) in raw.portrait.points.iter().enumerate() {
        let value = cv(&p.value, || format!("portrait.points[{i}].value"))?;
        let labels = p
            .labels
            .iter()
            .map(|l| Label::decode(l).ok_or_else(|| field(format!("portrait.points[{i}].labels"), format!("bad label {l:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        points.push(PortraitPoint { sphere: p.sphere, value, labels, local_degree: p.local_degree });
    }
    let mut successors = BTreeMap::new();
    for (k, [i, j]) in raw.portrait.successors.iter().enumerate() {
        if *i >= points.len() || *j >= points.len() {
            return Err(field(format!("portrait.successors[{k}]"), "point index out of range"));
        }
        if successors.insert(*i, *j).is_some() {
            return Err(field(format!("portrait.successors[{k}]"), "duplicate successor"));
        }
    }
    Ok(TreeMappingScheme { tree, map, spheres, maps, portrait: OrbitPortrait { points, successors } })
}

pub fn serialize(s: &TreeMappingScheme) -> String {
    let tp = &s.tree;
    let raw = FileScheme {
        tms_version: TMS_VERSION,
        tree: FileTree {
            vertices: (0..tp.num_vertices()).map(|id| FileVertex { id, in_t0: tp.in_t0(id) }).collect(),
            edges: tp
                .edges()
                .iter()
                .map(|e| FileEdge { a: e.a, b: e.b, length: fmt_rat(&e.length), in_t0: e.in_t0 })
                .collect(),
        },
        tree_map: FileTreeMap {
            vertex_images: s.map.vertex_image.clone(),
            edge_degrees: s.map.edge_degree.clone(),
            vertex_degrees: s.map.vertex_degree.clone(),
        },
        spheres: s
            .spheres
            .iter()
            .enumerate()
            .map(|(v, sp)| (v, FileSphere { markings: sp.markings.iter().map(|(e, z)| (*e, z.to_string())).collect() }))
            .collect(),
        maps: s
            .maps
            .iter()
            .map(|(v, m)| {
                (
                    *v,
                    FileMap {
                        num: m.num.iter().map(|z| z.to_string()).collect(),
                        den: m.den.iter().map(|z| z.to_string()).collect(),
                        degree: m.degree,
                    },
                )
            })
            .collect(),
        portrait: FilePortrait {
            points: s
                .portrait
                .points
                .iter()
                .map(|p| FilePoint {
                    sphere: p.sphere,
                    value: p.value.to_string(),
                    labels: p.labels.iter().map(|l| l.encode()).collect(),
                    local_degree: p.local_degree,
                })
                .collect(),
            successors: s.portrait.successors.iter().map(|(i, j)| [*i, *j]).collect(),
        },
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("serializable");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
  "tms_version": 1,
  "tree": {"vertices": [{"id": 0, "in_t0": true}], "edges": []},
  "tree_map": {"vertex_images": {"0": 0}, "edge_degrees": {}, "vertex_degrees": {"0": 2}},
  "spheres": {"0": {"markings": {}}},
  "maps": {"0": {"num": ["0,0", "0,0", "1,0"], "den": ["1,0"], "degree": 2}},
  "portrait": {
    "points": [
      {"sphere": 0, "value": "0,0", "labels": ["critical:2", "exposed"], "local_degree": 2},
      {"sphere": 0, "value": "inf", "labels": ["critical:2", "exposed"], "local_degree": 2}
    ],
    "successors": [[0, 0], [1, 1]]
  }
}"#;

    #[test]
    fn tiny_round_trip() {
        let s = parse(TINY).unwrap();
        assert!(s.portrait_closure_check().passed());
        let again = parse(&serialize(&s)).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn rejections() {
        let bad_len = TINY.replace(r#""edges": []"#, r#""edges": [{"a": 0, "b": 1, "length": "1/0", "in_t0": true}]"#);
        assert!(matches!(parse(&bad_len), Err(FormatError::Field { .. })));
        let missing = TINY.replace(r#""edges": []"#, r#""edges": [{"a": 0, "b": 7, "length": "1", "in_t0": true}]"#);
        assert!(matches!(parse(&missing), Err(FormatError::Field { .. })));
        let version = TINY.replace(r#""tms_version": 1"#, r#""tms_version": 2"#);
        assert_eq!(parse(&version), Err(FormatError::SchemaVersionMismatch(2)));
        let unknown = TINY.replace(r#""tms_version": 1,"#, r#""tms_version": 1, "extra": 0,"#);
        assert!(matches!(parse(&unknown), Err(FormatError::Parse { .. })));
    }
}
