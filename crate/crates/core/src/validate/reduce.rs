//! Irreducibility and reduction to the irreducible scheme.

use super::{extensions, Entry, ValidationReport};
use crate::report::CheckReport;
use crate::scheme::{MarkedSphere, OrbitPortrait, SchemeError, TreeMappingScheme};
use crate::tree::{Edge, TreePair, TreePoint};
use crate::treemap::{Extension, TreeMap};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IrreducibleSets {
    pub q: BTreeSet<usize>,
    pub p: BTreeSet<usize>,
    pub b0: BTreeSet<usize>,
    pub b1: BTreeSet<usize>,
    pub critical: Vec<usize>,
    pub primitive: Vec<usize>,
}

fn forward_closure(s: &TreeMappingScheme, seeds: BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set = seeds;
    loop {
        let add: Vec<usize> = set
            .iter()
            .filter(|&&v| s.tree.in_t0(v))
            .filter_map(|&v| s.map.image(v).ok())
            .filter(|w| !set.contains(w))
            .collect();
        if add.is_empty() {
            return set;
        }
        set.extend(add);
    }
}

pub fn irreducible_sets(s: &TreeMappingScheme) -> IrreducibleSets {
    let tp = &s.tree;
    let (comps, exts) = extensions(s);
    let mut critical = Vec::new();
    let mut targets = BTreeSet::new();
    for (u, ext) in exts.iter().enumerate() {
        match ext {
            Ok(Extension::CaseB { .. }) => critical.push(u),
            Ok(Extension::CaseA { covering, target, .. }) => {
                if !covering {
                    critical.push(u);
                }
                targets.insert(*target);
            }
            Err(_) => {}
        }
    }
    let primitive = (0..comps.len()).filter(|u| !targets.contains(u)).collect();
    let mut seeds: BTreeSet<usize> = BTreeSet::new();
    for &i in &s.exposed_sets().exposed_critical {
        seeds.insert(s.portrait.points[i].sphere);
    }
    for &u in &critical {
        seeds.extend(comps[u].boundary.iter().copied());
    }
    let q = forward_closure(s, seeds);
    let mut pseeds = q.clone();
    for c in &comps {
        pseeds.extend(c.boundary.iter().copied());
    }
    let p = forward_closure(s, pseeds);
    let b0 = tp.v0().into_iter().filter(|&v| tp.t0_valence(v) >= 3).collect();
    let b1 = (0..tp.num_vertices()).filter(|&v| tp.valence(v) >= 3).collect();
    IrreducibleSets { q, p, b0, b1, critical, primitive }
}

pub fn check_irreducible(s: &TreeMappingScheme) -> ValidationReport {
    let tp = &s.tree;
    let sets = irreducible_sets(s);
    let comps = tp.omega_components();
    let mut r1 = CheckReport::new();
    let pts: Vec<TreePoint> = sets.q.iter().map(|&v| TreePoint::Vertex(v)).collect();
    let hull = tp.convex_hull(&pts);
    for v in 0..tp.num_vertices() {
        if !hull.vertices.contains(&v) {
            r1.fail(format!("vertex {v} lies outside the convex hull of Q"));
        }
    }
    if tp.num_vertices() > 1 && hull.edges.len() != tp.edges().len() {
        r1.fail("the convex hull of Q misses some edges");
    }
    let mut r2 = CheckReport::new();
    for v in tp.v0() {
        if !sets.p.contains(&v) && !sets.b0.contains(&v) {
            r2.fail(format!("vertex {v} is neither in P nor a branch point of T0"));
        }
    }
    for v in sets.p.iter().chain(&sets.b0) {
        if !tp.in_t0(*v) {
            r2.fail(format!("vertex {v} of P lies outside V0"));
        }
    }
    let mut r3 = CheckReport::new();
    for &u in &sets.primitive {
        let crit = sets.critical.contains(&u);
        let branch = comps[u].inner.iter().any(|v| sets.b1.contains(v));
        if !crit && !branch {
            r3.fail(format!("primitive component {u} is neither critical nor contains a branch point"));
        }
    }
    ValidationReport {
        entries: vec![
            Entry::from_check("irreducible.1", r1),
            Entry::from_check("irreducible.2", r2),
            Entry::from_check("irreducible.3", r3),
        ],
    }
}

/// A rebuilt edge: endpoints and flags in old vertex ids, plus the old edge
/// ids it replaces.
struct NewEdge {
    edge: Edge,
    old: Vec<usize>,
}

/// Renumbers a scheme onto a subset of its vertices and a regrouping of its
/// edges, then rederives the portrait.
fn rebuild(
    s: &TreeMappingScheme,
    in_t0: &[bool],
    keep: &[usize],
    mut edges: Vec<NewEdge>,
    map: &TreeMap,
    extra_maps: BTreeMap<usize, crate::rational::RationalMap>,
) -> Result<TreeMappingScheme, SchemeError> {
    let mut vmap = BTreeMap::new();
    for (i, &v) in keep.iter().enumerate() {
        vmap.insert(v, i);
    }
    edges.sort_by_key(|e| *e.old.iter().min().unwrap());
    let mut emap = BTreeMap::new();
    let mut new_edges = Vec::new();
    for (i, ne) in edges.iter().enumerate() {
        for &o in &ne.old {
            emap.insert(o, i);
        }
        let (a, b) = (vmap[&ne.edge.a], vmap[&ne.edge.b]);
        new_edges.push(Edge { a, b, length: ne.edge.length.clone(), in_t0: ne.edge.in_t0 });
    }
    let tree = TreePair::new(keep.iter().map(|&v| in_t0[v]).collect(), new_edges)
        .map_err(|e| SchemeError::Invalid(e.to_string()))?;
    let mut nmap = TreeMap::default();
    for &v in keep {
        if !in_t0[v] {
            continue;
        }
        let w = map.image(v)?;
        let nw = *vmap.get(&w).ok_or_else(|| SchemeError::Invalid(format!("vertex {v} maps to removed vertex {w}")))?;
        nmap.vertex_image.insert(vmap[&v], nw);
        nmap.vertex_degree.insert(vmap[&v], map.vertex_deg(v));
    }
    for ne in &edges {
        if ne.edge.in_t0 {
            let d = ne.old.iter().find_map(|o| map.edge_degree.get(o)).copied().unwrap_or(1);
            nmap.edge_degree.insert(emap[&ne.old[0]], d);
        }
    }
    let mut spheres = Vec::new();
    for &v in keep {
        let mut sp = MarkedSphere::default();
        for (e, z) in &s.spheres[v].markings {
            if let Some(&ne) = emap.get(e) {
                let ed = tree.edge(ne);
                if ed.a == vmap[&v] || ed.b == vmap[&v] {
                    sp.markings.insert(ne, z.clone());
                }
            }
        }
        spheres.push(sp);
    }
    let mut maps = BTreeMap::new();
    for (v, m) in s.maps.iter().chain(extra_maps.iter()) {
        if let Some(&nv) = vmap.get(v) {
            maps.insert(nv, m.clone());
        }
    }
    let mut crit = BTreeMap::new();
    for (v, zs) in s.declared_critical() {
        if let Some(&nv) = vmap.get(&v) {
            if in_t0[v] {
                crit.insert(nv, zs);
            }
        }
    }
    let mut out = TreeMappingScheme { tree, map: nmap, spheres, maps, portrait: OrbitPortrait::default() };
    out.derive_portrait(&crit)?;
    Ok(out)
}

fn identity_edges(tp: &TreePair, in_t0: &[bool]) -> Vec<NewEdge> {
    tp.edges()
        .iter()
        .enumerate()
        .map(|(i, e)| NewEdge { edge: Edge { in_t0: e.in_t0 && in_t0[e.a] && in_t0[e.b], ..e.clone() }, old: vec![i] })
        .collect()
}

/// One reduction step, or None at a fixpoint.
fn reduce_step(s: &TreeMappingScheme) -> Result<Option<TreeMappingScheme>, SchemeError> {
    let tp = &s.tree;
    let n = tp.num_vertices();
    let sets = irreducible_sets(s);
    let in_t0: Vec<bool> = tp.in_t0_flags().to_vec();
    let images: BTreeSet<usize> = s.map.vertex_image.values().copied().collect();

    // trim to the hull of Q
    if !sets.q.is_empty() {
        let pts: Vec<TreePoint> = sets.q.iter().map(|&v| TreePoint::Vertex(v)).collect();
        let hull = tp.convex_hull(&pts);
        if hull.vertices.len() < n {
            let keep: Vec<usize> = hull.vertices.iter().copied().collect();
            let edges = identity_edges(tp, &in_t0).into_iter().filter(|e| hull.edges.contains(&e.old[0])).collect();
            return rebuild(s, &in_t0, &keep, edges, &s.map, BTreeMap::new()).map(Some);
        }
    }

    // fill primitive covering gaps that carry a witness map
    let (comps, exts) = extensions(s);
    for &u in &sets.primitive {
        let c = &comps[u];
        if sets.critical.contains(&u) || c.inner.iter().any(|v| sets.b1.contains(v)) {
            continue;
        }
        let Ok(Extension::CaseA { center_image, degrees, center_degree, covering: true, .. }) = &exts[u] else {
            continue;
        };
        let p = c.center.unwrap();
        if !s.maps.contains_key(&p) || c.inner.len() != 1 {
            continue;
        }
        let mut flags = in_t0.clone();
        flags[p] = true;
        let mut map = s.map.clone();
        map.vertex_image.insert(p, *center_image);
        map.vertex_degree.insert(p, *center_degree);
        for (_, e, d) in degrees {
            map.edge_degree.insert(*e, *d);
        }
        let edges = tp
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| NewEdge { edge: Edge { in_t0: e.in_t0 || c.edges.contains(&i), ..e.clone() }, old: vec![i] })
            .collect();
        let keep: Vec<usize> = (0..n).collect();
        return rebuild(s, &flags, &keep, edges, &map, BTreeMap::new()).map(Some);
    }

    // delete vertices of V0 outside P ∪ B0
    for v in tp.v0() {
        if sets.p.contains(&v) || sets.b0.contains(&v) || images.contains(&v) {
            continue;
        }
        let adj = tp.adjacent(v).to_vec();
        let keep: Vec<usize> = (0..n).filter(|&w| w != v).collect();
        match adj.as_slice() {
            [(e, _)] => {
                let edges = identity_edges(tp, &in_t0).into_iter().filter(|x| x.old[0] != *e).collect();
                return rebuild(s, &in_t0, &keep, edges, &s.map, BTreeMap::new()).map(Some);
            }
            [(e1, u), (e2, w)] => {
                let (d1, d2) = (s.map.edge_degree.get(e1), s.map.edge_degree.get(e2));
                if !tp.edge(*e1).in_t0 || !tp.edge(*e2).in_t0 || d1 != d2 {
                    continue;
                }
                // F must not fold at v
                let (fu, fv, fw) = (s.map.image(*u)?, s.map.image(v)?, s.map.image(*w)?);
                if fu == fw || tp.vertex_distance(fu, fw) != tp.vertex_distance(fu, fv) + tp.vertex_distance(fv, fw) {
                    continue;
                }
                let (lo, hi) = if e1 < e2 { (*e1, *e2) } else { (*e2, *e1) };
                let far_lo = tp.other_end(lo, v);
                let far_hi = tp.other_end(hi, v);
                let ed = tp.edge(lo);
                let merged = if ed.a == far_lo {
                    Edge { a: far_lo, b: far_hi, length: &ed.length + &tp.edge(hi).length, in_t0: true }
                } else {
                    Edge { a: far_hi, b: far_lo, length: &ed.length + &tp.edge(hi).length, in_t0: true }
                };
                let mut edges: Vec<NewEdge> =
                    identity_edges(tp, &in_t0).into_iter().filter(|x| x.old[0] != lo && x.old[0] != hi).collect();
                edges.push(NewEdge { edge: merged, old: vec![lo, hi] });
                return rebuild(s, &in_t0, &keep, edges, &s.map, BTreeMap::new()).map(Some);
            }
            _ => {}
        }
    }
    Ok(None)
}

/// Reduces to the irreducible scheme by trimming, filling and deleting until
/// nothing changes.
pub fn reduce_to_irreducible(s: &TreeMappingScheme) -> Result<TreeMappingScheme, SchemeError> {
    let mut cur = s.clone();
    for _ in 0..10_000 {
        match reduce_step(&cur)? {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(SchemeError::Invalid("reduction did not terminate".into()))
}
