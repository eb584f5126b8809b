//! Subdividing a single edge and reducing recovers the original scheme.

#![allow(dead_code)]

use std::collections::BTreeMap;
use tms_core::arith::{rat, Rat};
use tms_core::catalog;
use tms_core::scheme::TreeMappingScheme;
use tms_core::surgery::subdivide;
use tms_core::tree::TreePoint;
use tms_core::validate::reduce::{check_irreducible, reduce_to_irreducible};
use tms_core::validate::check_hpcf;

/// Edges keyed by endpoints, markings keyed by the neighbour: independent
/// of edge numbering.
pub fn canon(s: &TreeMappingScheme) -> String {
    let tp = &s.tree;
    let mut edges = BTreeMap::new();
    let mut marks = BTreeMap::new();
    for (i, e) in tp.edges().iter().enumerate() {
        let key = (e.a.min(e.b), e.a.max(e.b));
        edges.insert(key, (e.length.clone(), e.in_t0, s.map.edge_degree.get(&i).copied()));
        for (v, w) in [(e.a, e.b), (e.b, e.a)] {
            marks.insert((v, w), s.spheres[v].markings.get(&i).map(|z| z.to_string()));
        }
    }
    let flags: Vec<bool> = (0..tp.num_vertices()).map(|v| tp.in_t0(v)).collect();
    format!(
        "{flags:?}\n{edges:?}\n{marks:?}\n{:?}\n{:?}\n{:?}",
        s.map.vertex_image, s.map.vertex_degree, s.maps
    )
}

/// An interior offset on e that reaches a vertex in the fewest steps,
/// pulled back through edges that map onto a single edge.
pub fn vertex_preimage(s: &TreeMappingScheme, e: usize, depth: usize) -> Option<Rat> {
    let tp = &s.tree;
    if depth == 0 || !tp.edge(e).in_t0 {
        return None;
    }
    let arc = s.map.image_arc(tp, e).unwrap();
    let sigma = &arc.length / &tp.edge(e).length;
    if let Some(st) = arc.steps.get(1) {
        return Some(&st.start / &sigma);
    }
    let st = &arc.steps[0];
    let y = vertex_preimage(s, st.edge, depth - 1)?;
    let d = if st.forward { y } else { &tp.edge(st.edge).length - y };
    Some(d / sigma)
}

pub fn cut_point(s: &TreeMappingScheme, e: usize) -> TreePoint {
    let t = vertex_preimage(s, e, 64).unwrap_or_else(|| &s.tree.edge(e).length / rat(2, 1));
    TreePoint::Interior { edge: e, offset: t }
}

/// x and its forward orbit up to the first vertex or repetition.
pub fn forward_cuts(s: &TreeMappingScheme, x: TreePoint) -> Option<Vec<TreePoint>> {
    let mut pts = vec![x];
    loop {
        let y = s.map.eval_point(&s.tree, pts.last().unwrap()).ok()?;
        if matches!(y, TreePoint::Vertex(_)) || pts.contains(&y) {
            return Some(pts);
        }
        if !s.tree.point_in_t0(&y) {
            return None;
        }
        pts.push(y);
    }
}

/// Every T0 edge of every catalog entry: subdivide at an admissible cut,
/// reduce, compare. Returns the number of cases.
pub fn round_trip_all() -> Result<usize, String> {
    let mut cases = 0;
    for name in catalog::NAMES {
        let s = catalog::get(name).unwrap().scheme;
        let base = canon(&s);
        if canon(&reduce_to_irreducible(&s).map_err(|e| e.to_string())?) != base {
            return Err(format!("{name} is not irreducible"));
        }
        for e in s.tree.e0() {
            let cuts = forward_cuts(&s, cut_point(&s, e)).ok_or(format!("{name}: no admissible cut on edge {e}"))?;
            let (t, _) = subdivide(&s, &cuts).map_err(|x| format!("{name} edge {e}: {x}"))?;
            if !check_hpcf(&t, &Default::default()).pass() {
                return Err(format!("{name} edge {e}: subdivision invalid"));
            }
            if check_irreducible(&t).pass() {
                return Err(format!("{name} edge {e}: subdivision still irreducible"));
            }
            let r = reduce_to_irreducible(&t).map_err(|x| x.to_string())?;
            if canon(&r) != base {
                return Err(format!("{name} edge {e}: not recovered"));
            }
            if canon(&reduce_to_irreducible(&r).map_err(|x| x.to_string())?) != canon(&r) {
                return Err(format!("{name} edge {e}: not idempotent"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}
