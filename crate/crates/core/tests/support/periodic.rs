//! Periodic points checked against a piecewise-affine brute force: each edge
//! is cut at the exact preimages of vertices until F^p is affine on every
//! piece, and fixed points of F^p are solved piece by piece.

#![allow(dead_code)]

use std::collections::BTreeSet;
use tms_core::arith::{rat, Rat};
use tms_core::scheme::TreeMappingScheme;
use tms_core::tree::{TreePair, TreePoint};
use tms_core::treemap::TreeMap;

/// F evaluated from the vertex images and edge degrees alone.
pub fn step(tp: &TreePair, m: &TreeMap, x: &TreePoint) -> Option<TreePoint> {
    match x {
        TreePoint::Vertex(v) => tp.in_t0(*v).then(|| TreePoint::Vertex(m.vertex_image[v])),
        TreePoint::Interior { edge, offset } => {
            let ed = tp.edge(*edge);
            if !ed.in_t0 {
                return None;
            }
            let d = Rat::from_integer(m.edge_degree[edge].into());
            tp.point_along(m.vertex_image[&ed.a], m.vertex_image[&ed.b], &(offset * d))
        }
    }
}

pub fn edges_at(tp: &TreePair, x: &TreePoint) -> Vec<usize> {
    match x {
        TreePoint::Vertex(v) => tp.adjacent(*v).iter().map(|(e, _)| *e).collect(),
        TreePoint::Interior { edge, .. } => vec![*edge],
    }
}

pub fn offset_on(tp: &TreePair, e: usize, x: &TreePoint) -> Option<Rat> {
    let ed = tp.edge(e);
    match x {
        TreePoint::Vertex(v) if *v == ed.a => Some(rat(0, 1)),
        TreePoint::Vertex(v) if *v == ed.b => Some(ed.length.clone()),
        TreePoint::Interior { edge, offset } if *edge == e => Some(offset.clone()),
        _ => None,
    }
}

pub fn pieces(tp: &TreePair, m: &TreeMap, e: usize, lo: Rat, hi: Rat, p: usize, out: &mut BTreeSet<TreePoint>) {
    let mut a = tp.point_on_edge(e, lo.clone()).unwrap();
    let mut b = tp.point_on_edge(e, hi.clone()).unwrap();
    for k in 0..=p {
        let ea = edges_at(tp, &a);
        let common = edges_at(tp, &b).into_iter().find(|x| ea.contains(x));
        let Some(c) = common else {
            let (steps, total) = tp.path(&a, &b);
            let first = tp.edge(steps[0].edge);
            let dist = match &a {
                TreePoint::Interior { offset, .. } if steps[0].forward => &first.length - offset,
                TreePoint::Interior { offset, .. } => offset.clone(),
                TreePoint::Vertex(_) => first.length.clone(),
            };
            let mid = &lo + (&hi - &lo) * dist / total;
            pieces(tp, m, e, lo, mid.clone(), p, out);
            pieces(tp, m, e, mid, hi, p, out);
            return;
        };
        if k == p {
            break;
        }
        if !tp.edge(c).in_t0 {
            return;
        }
        a = step(tp, m, &a).unwrap();
        b = step(tp, m, &b).unwrap();
    }
    let (Some(oa), Some(ob)) = (offset_on(tp, e, &a), offset_on(tp, e, &b)) else { return };
    let slope = (&ob - &oa) / (&hi - &lo);
    assert!(slope != rat(1, 1), "F^{p} is the identity on a piece of edge {e}");
    let x = (&oa - &slope * &lo) / (rat(1, 1) - &slope);
    if x >= lo && x <= hi && x > rat(0, 1) && x < tp.edge(e).length {
        out.insert(TreePoint::Interior { edge: e, offset: x });
    }
}

pub fn minimal_period(tp: &TreePair, m: &TreeMap, x: &TreePoint, p: usize) -> bool {
    let mut y = x.clone();
    for k in 1..=p {
        y = step(tp, m, &y).unwrap();
        if &y == x {
            return k == p;
        }
    }
    false
}

pub fn oracle(s: &TreeMappingScheme, p: usize) -> (BTreeSet<usize>, BTreeSet<TreePoint>) {
    let (tp, m) = (&s.tree, &s.map);
    let mut pts = BTreeSet::new();
    for e in tp.e0() {
        pieces(tp, m, e, rat(0, 1), tp.edge(e).length.clone(), p, &mut pts);
    }
    pts.retain(|x| minimal_period(tp, m, x, p));
    let verts = tp.v0().into_iter().filter(|&v| minimal_period(tp, m, &TreePoint::Vertex(v), p)).collect();
    (verts, pts)
}

pub fn enumerated(s: &TreeMappingScheme, p: usize) -> (BTreeSet<usize>, BTreeSet<TreePoint>) {
    let pp = s.map.periodic_points(&s.tree, p).unwrap();
    let verts = pp.vertex_cycles.into_iter().flatten().collect();
    let pts = pp.orbits.into_iter().flat_map(|o| o.orbit).collect();
    (verts, pts)
}

