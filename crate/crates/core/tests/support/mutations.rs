//! Targeted mutations of catalog schemes, each failing exactly one condition.

#![allow(dead_code)]

use std::collections::BTreeMap;
use tms_core::arith::{rat, GaussRat};
use tms_core::catalog;
use tms_core::rational::RationalMap;
use tms_core::scheme::build::{cx, inf, int_map};
use tms_core::scheme::TreeMappingScheme;
use tms_core::tree::{Edge, TreePair};
use tms_core::validate::check_hpcf;
use tms_core::value::ComplexValue;

// interval layout shared by mcmullen, basilica-cantor and cantor-z3
pub const A: usize = 0;
pub const B: usize = 1;
pub const BP: usize = 3;
pub const AP: usize = 4;

pub fn entry(name: &str) -> TreeMappingScheme {
    catalog::get(name).unwrap().scheme
}

pub fn q(n: i64, d: i64) -> ComplexValue {
    ComplexValue::Exact(GaussRat::real(rat(n, d)))
}

/// Replaces sphere maps and rederives the portrait from the markings plus
/// the given non-marking critical points.
pub fn with_maps(
    mut s: TreeMappingScheme,
    maps: Vec<(usize, RationalMap)>,
    critical: Vec<(usize, Vec<ComplexValue>)>,
) -> TreeMappingScheme {
    for (v, f) in maps {
        s.maps.insert(v, f);
    }
    let crit: BTreeMap<usize, Vec<ComplexValue>> = critical.into_iter().collect();
    s.derive_portrait(&crit).unwrap();
    s
}

pub fn with_lengths(s: TreeMappingScheme, lengths: &[(usize, tms_core::arith::Rat)]) -> TreeMappingScheme {
    let (in_t0, mut edges) = s.tree.clone().into_parts();
    for (e, l) in lengths {
        edges[*e].length = l.clone();
    }
    TreeMappingScheme { tree: TreePair::new(in_t0, edges).unwrap(), ..s }
}

/// Attaches a fixed leaf edge of degree 1 at `at`, marked `z` there; the
/// leaf carries the identity.
pub fn invariant_leaf(s: TreeMappingScheme, at: usize, z: ComplexValue) -> TreeMappingScheme {
    let crit = s.declared_critical();
    let (mut in_t0, mut edges) = s.tree.clone().into_parts();
    let leaf = in_t0.len();
    let e = edges.len();
    in_t0.push(true);
    edges.push(Edge { a: at, b: leaf, length: rat(1, 5), in_t0: true });
    let mut t = TreeMappingScheme { tree: TreePair::new(in_t0, edges).unwrap(), ..s };
    t.map.vertex_image.insert(leaf, leaf);
    t.map.edge_degree.insert(e, 1);
    t.map.vertex_degree.insert(leaf, 1);
    t.spheres.push(Default::default());
    t.spheres[at].markings.insert(e, z);
    t.spheres[leaf].markings.insert(e, cx(0, 0));
    t.maps.insert(leaf, RationalMap::identity());
    t.derive_portrait(&crit).unwrap();
    t
}

pub fn failed(s: &TreeMappingScheme) -> Vec<String> {
    check_hpcf(s, &Default::default()).failed().into_iter().map(String::from).collect()
}

pub fn mutations() -> Vec<(&'static str, &'static str, TreeMappingScheme)> {
    let mut out = Vec::new();

    // i: vertex degree disagrees with the sphere map
    let mut s = entry("cantor-z3");
    s.map.vertex_degree.insert(A, 2);
    out.push(("i", "vertex degree 2 under a cubic", s));
    // i: edge degree 2 between ends of local degree 3, lengths kept geometric
    let mut s = entry("cantor-z3");
    s.map.edge_degree.insert(0, 2);
    let s = with_lengths(s, &[(0, rat(1, 2)), (1, rat(1, 12)), (2, rat(1, 12))]);
    out.push(("i", "mismatched edge-end degrees", s));

    // ii: length perturbations
    let s = with_lengths(entry("cantor-z3"), &[(0, rat(7, 20)), (1, rat(3, 20))]);
    out.push(("ii", "left arm lengthened", s));
    let s = with_lengths(entry("mcmullen"), &[(3, rat(3, 10)), (2, rat(7, 60))]);
    out.push(("ii", "right arm shortened", s));

    // iii: the two sides of the gap collapse to different points
    let s = with_maps(entry("basilica-cantor"), vec![(BP, int_map(&[1, 0, 0, 1], &[0, 0, 0, 1]))], vec![(A, vec![inf()])]);
    out.push(("iii", "B' side shifted onto the basilica cycle", s));
    let s = with_maps(entry("basilica-cantor"), vec![(B, int_map(&[1, 0, 1], &[1]))], vec![(A, vec![inf()])]);
    out.push(("iii", "B side shifted onto the basilica cycle", s));

    // iv: an extra critical point falls into a repelling-type fixed point
    let s = with_maps(entry("cantor-z3"), vec![(A, int_map(&[0, 0, 0, 9], &[4, 9]))], vec![(A, vec![inf(), q(-2, 3)]), (AP, vec![cx(0, 0)])]);
    out.push(("iv", "critical point -2/3 lands on the fixed point 4/3", s));
    let s = with_maps(entry("cantor-z3"), vec![(AP, int_map(&[1], &[0, 0, 3, 2]))], vec![(A, vec![inf()]), (AP, vec![cx(0, 0), cx(-1, 0)])]);
    out.push(("iv", "critical point -1 on A' lands on 1", s));
    let s = with_maps(entry("mcmullen"), vec![(AP, int_map(&[1], &[0, 0, 3, 2]))], vec![(A, vec![inf()]), (AP, vec![cx(0, 0), cx(-1, 0)])]);
    out.push(("iv", "same on the McMullen scheme", s));

    // v: both gap sides moved to 1, which is fixed and not critical
    let s = with_maps(
        entry("mcmullen"),
        vec![(B, int_map(&[1, 0, 1], &[1])), (BP, int_map(&[1, 0, 0, 1], &[0, 0, 0, 1]))],
        vec![(A, vec![inf()]), (AP, vec![cx(0, 0)])],
    );
    out.push(("v", "gap of the McMullen scheme collapses onto 1", s));
    let s = with_maps(
        entry("cantor-z3"),
        vec![(B, int_map(&[1, 0, 0, 1], &[1])), (BP, int_map(&[1, 0, 0, 1], &[0, 0, 0, 1]))],
        vec![(A, vec![inf()]), (AP, vec![cx(0, 0)])],
    );
    out.push(("v", "gap of the cubic Cantor scheme collapses onto 1", s));

    // vi: an invariant edge
    out.push(("vi", "invariant leaf at the fixed point 1 of z^2", invariant_leaf(entry("mcmullen"), A, cx(1, 0))));
    out.push(("vi", "invariant leaf at the fixed point 1 of z^3", invariant_leaf(entry("cantor-z3"), A, cx(1, 0))));
    out
}

