//! Finite metric trees with exact edge lengths, the pair T0 ⊆ T1, and the
//! complementary open forest Ω.

use crate::arith::Rat;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("edge {0} references a missing vertex")]
    MissingVertex(usize),
    #[error("edge {0} has non-positive length")]
    NonPositiveLength(usize),
    #[error("edge {0} is a loop")]
    Loop(usize),
    #[error("the edge graph is not a tree")]
    NotATree,
    #[error("edge {0} is in T0 but an endpoint is not")]
    EdgeEndpointOutsideT0(usize),
    #[error("edge {edge} has no point at offset {offset}")]
    BadOffset { edge: usize, offset: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: Rat,
    pub in_t0: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreePoint {
    Vertex(usize),
    /// Offset measured from the edge's `a` endpoint, strictly inside the edge.
    Interior { edge: usize, offset: Rat },
}

/// One traversed edge of an arc. `forward` means a → b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreePair {
    in_t0: Vec<bool>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
    // parent[r][v] = (edge, parent vertex) on the path from v toward r
    parent: Vec<Vec<Option<(usize, usize)>>>,
    depth: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaComponent {
    pub edges: Vec<usize>,
    /// Vertices of the open component (not in T0).
    pub inner: Vec<usize>,
    pub boundary: Vec<usize>,
    pub center: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Subtree {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    /// Partially covered edges as (edge, lo, hi) offsets.
    pub partial: Vec<(usize, Rat, Rat)>,
}

impl TreePair {
    pub fn new(in_t0: Vec<bool>, edges: Vec<Edge>) -> Result<Self, TreeError> {
        let n = in_t0.len();
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.a >= n || e.b >= n {
                return Err(TreeError::MissingVertex(i));
            }
            if e.a == e.b {
                return Err(TreeError::Loop(i));
            }
            if !e.length.is_positive() {
                return Err(TreeError::NonPositiveLength(i));
            }
            if e.in_t0 && !(in_t0[e.a] && in_t0[e.b]) {
                return Err(TreeError::EdgeEndpointOutsideT0(i));
            }
            adj[e.a].push((i, e.b));
            adj[e.b].push((i, e.a));
        }
        if n == 0 || edges.len() + 1 != n {
            return Err(TreeError::NotATree);
        }
        let mut parent = Vec::with_capacity(n);
        let mut depth = Vec::with_capacity(n);
        for r in 0..n {
            let mut par = vec![None; n];
            let mut dep = vec![usize::MAX; n];
            dep[r] = 0;
            let mut queue = VecDeque::from([r]);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in &adj[v] {
                    if dep[w] == usize::MAX {
                        dep[w] = dep[v] + 1;
                        par[w] = Some((e, v));
                        queue.push_back(w);
                    }
                }
            }
            if dep.iter().any(|&d| d == usize::MAX) {
                return Err(TreeError::NotATree);
            }
            parent.push(par);
            depth.push(dep);
        }
        Ok(TreePair { in_t0, edges, adj, parent, depth })
    }

    pub fn num_vertices(&self) -> usize {
        self.in_t0.len()
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }
    pub fn in_t0(&self, v: usize) -> bool {
        self.in_t0[v]
    }
    pub fn in_t0_flags(&self) -> &[bool] {
        &self.in_t0
    }
    /// (edge, neighbor) pairs at v.
    pub fn adjacent(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }
    pub fn valence(&self, v: usize) -> usize {
        self.adj[v].len()
    }
    pub fn t0_valence(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|(e, _)| self.edges[*e].in_t0).count()
    }
    pub fn v0(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| self.in_t0[v]).collect()
    }
    pub fn e0(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].in_t0).collect()
    }
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let ed = &self.edges[e];
        if ed.a == v {
            ed.b
        } else {
            ed.a
        }
    }
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|(_, w)| *w == v).map(|(e, _)| *e)
    }
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| self.valence(v) == 1).collect()
    }

    /// Oriented edges of the arc from vertex u to vertex v.
    pub fn vertex_path(&self, u: usize, v: usize) -> Vec<Step> {
        // walk from u toward v using parents rooted at v
        let mut out = Vec::with_capacity(self.depth[v][u]);
        let mut cur = u;
        while cur != v {
            let (e, next) = self.parent[v][cur].expect("connected tree");
            out.push(Step { edge: e, forward: self.edges[e].a == cur });
            cur = next;
        }
        out
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> Rat {
        self.vertex_path(u, v).iter().map(|s| self.edges[s.edge].length.clone()).sum()
    }

    /// Canonical point at offset t from the `a` end of edge e.
    pub fn point_on_edge(&self, e: usize, t: Rat) -> Result<TreePoint, TreeError> {
        let ed = &self.edges[e];
        if t.is_negative() || t > ed.length {
            return Err(TreeError::BadOffset { edge: e, offset: crate::arith::fmt_rat(&t) });
        }
        Ok(if t.is_zero() {
            TreePoint::Vertex(ed.a)
        } else if t == ed.length {
            TreePoint::Vertex(ed.b)
        } else {
            TreePoint::Interior { edge: e, offset: t }
        })
    }

    pub fn contains(&self, x: &TreePoint) -> bool {
        match x {
            TreePoint::Vertex(v) => *v < self.num_vertices(),
            TreePoint::Interior { edge, offset } => {
                *edge < self.edges.len() && offset.is_positive() && *offset < self.edges[*edge].length
            }
        }
    }

    pub fn point_in_t0(&self, x: &TreePoint) -> bool {
        match x {
            TreePoint::Vertex(v) => self.in_t0[*v],
            TreePoint::Interior { edge, .. } => self.edges[*edge].in_t0,
        }
    }

    /// Endpoints reachable from x with their distances.
    fn anchors(&self, x: &TreePoint) -> Vec<(usize, Rat)> {
        match x {
            TreePoint::Vertex(v) => vec![(*v, Rat::zero())],
            TreePoint::Interior { edge, offset } => {
                let ed = &self.edges[*edge];
                vec![(ed.a, offset.clone()), (ed.b, &ed.length - offset)]
            }
        }
    }

    /// The unique arc from x to y and its length. End edges may be partial.
    pub fn path(&self, x: &TreePoint, y: &TreePoint) -> (Vec<Step>, Rat) {
        if x == y {
            return (vec![], Rat::zero());
        }
        if let (TreePoint::Interior { edge: e1, offset: t1 }, TreePoint::Interior { edge: e2, offset: t2 }) = (x, y) {
            if e1 == e2 {
                return (vec![Step { edge: *e1, forward: t2 > t1 }], (t2 - t1).abs());
            }
        }
        let mut best: Option<(Rat, usize, usize)> = None;
        for (u, du) in self.anchors(x) {
            for (v, dv) in self.anchors(y) {
                let d = &du + &dv + self.vertex_distance(u, v);
                if best.as_ref().is_none_or(|b| d < b.0) {
                    best = Some((d, u, v));
                }
            }
        }
        let (d, u, v) = best.unwrap();
        let mut steps = Vec::new();
        if let TreePoint::Interior { edge, .. } = x {
            steps.push(Step { edge: *edge, forward: self.edges[*edge].b == u });
        }
        steps.extend(self.vertex_path(u, v));
        if let TreePoint::Interior { edge, .. } = y {
            steps.push(Step { edge: *edge, forward: self.edges[*edge].a == v });
        }
        (steps, d)
    }

    pub fn distance(&self, x: &TreePoint, y: &TreePoint) -> Rat {
        self.path(x, y).1
    }

    /// Point at distance `dist` from vertex u along the arc toward vertex v.
    pub fn point_along(&self, u: usize, v: usize, dist: &Rat) -> Option<TreePoint> {
        let mut acc = Rat::zero();
        let mut cur = u;
        if dist.is_zero() {
            return Some(TreePoint::Vertex(u));
        }
        for s in self.vertex_path(u, v) {
            let len = &self.edges[s.edge].length;
            let next = &acc + len;
            if *dist < next {
                let into = dist - &acc;
                let off = if s.forward { into } else { len - into };
                return self.point_on_edge(s.edge, off).ok();
            }
            cur = self.other_end(s.edge, cur);
            if *dist == next {
                return Some(TreePoint::Vertex(cur));
            }
            acc = next;
        }
        None
    }

    /// Components of T1 − T0.
    pub fn omega_components(&self) -> Vec<OmegaComponent> {
        let n = self.num_vertices();
        let mut seen_edge = vec![false; self.edges.len()];
        let mut out = Vec::new();
        for start in 0..self.edges.len() {
            if self.edges[start].in_t0 || seen_edge[start] {
                continue;
            }
            let mut edges = BTreeSet::new();
            let mut inner = BTreeSet::new();
            let mut boundary = BTreeSet::new();
            let mut stack = vec![start];
            seen_edge[start] = true;
            while let Some(e) = stack.pop() {
                edges.insert(e);
                for v in [self.edges[e].a, self.edges[e].b] {
                    if self.in_t0[v] {
                        boundary.insert(v);
                    } else if inner.insert(v) {
                        for &(f, _) in &self.adj[v] {
                            if !seen_edge[f] && !self.edges[f].in_t0 {
                                seen_edge[f] = true;
                                stack.push(f);
                            }
                        }
                    }
                }
            }
            // closure valence of each vertex
            let mut val = vec![0usize; n];
            for &e in &edges {
                val[self.edges[e].a] += 1;
                val[self.edges[e].b] += 1;
            }
            let non_end: Vec<usize> = (0..n).filter(|&v| val[v] >= 2).collect();
            let center = match non_end.as_slice() {
                [c] if !self.in_t0[*c] => Some(*c),
                _ => None,
            };
            out.push(OmegaComponent {
                edges: edges.into_iter().collect(),
                inner: inner.into_iter().collect(),
                boundary: boundary.into_iter().collect(),
                center,
            });
        }
        // isolated non-T0 vertices cannot occur: every vertex has an edge in a tree with ≥ 2 vertices
        out
    }

    pub fn is_star_shaped(&self, c: &OmegaComponent) -> bool {
        c.center.is_some()
    }

    /// Smallest subtree containing the points.
    pub fn convex_hull(&self, pts: &[TreePoint]) -> Subtree {
        let mut hull = Subtree::default();
        let Some(first) = pts.first() else { return hull };
        if let TreePoint::Vertex(v) = first {
            hull.vertices.insert(*v);
        }
        let mut partial: BTreeMap<usize, (Rat, Rat)> = BTreeMap::new();
        let mut add_partial = |e: usize, lo: Rat, hi: Rat| {
            let ent = partial.entry(e).or_insert((lo.clone(), hi.clone()));
            if lo < ent.0 {
                ent.0 = lo;
            }
            if hi > ent.1 {
                ent.1 = hi;
            }
        };
        if let TreePoint::Interior { edge, offset } = first {
            add_partial(*edge, offset.clone(), offset.clone());
        }
        for p in &pts[1..] {
            let (steps, _) = self.path(first, p);
            let k = steps.len();
            for (i, s) in steps.iter().enumerate() {
                let e = s.edge;
                let len = self.edges[e].length.clone();
                // portion of this edge covered by the arc
                let mut lo = Rat::zero();
                let mut hi = len.clone();
                if i == 0 {
                    if let TreePoint::Interior { edge, offset } = first {
                        if *edge == e {
                            if s.forward {
                                lo = offset.clone();
                            } else {
                                hi = offset.clone();
                            }
                        }
                    }
                }
                if i + 1 == k {
                    if let TreePoint::Interior { edge, offset } = p {
                        if *edge == e {
                            if s.forward {
                                hi = hi.min(offset.clone());
                            } else {
                                lo = lo.max(offset.clone());
                            }
                        }
                    }
                }
                if lo.is_zero() && hi == len {
                    hull.edges.insert(e);
                } else {
                    add_partial(e, lo, hi);
                }
            }
            if let TreePoint::Vertex(v) = p {
                hull.vertices.insert(*v);
            }
        }
        for &e in &hull.edges {
            hull.vertices.insert(self.edges[e].a);
            hull.vertices.insert(self.edges[e].b);
        }
        for (e, (lo, hi)) in partial {
            if hull.edges.contains(&e) {
                continue;
            }
            let len = self.edges[e].length.clone();
            if lo.is_zero() {
                hull.vertices.insert(self.edges[e].a);
            }
            if hi == len {
                hull.vertices.insert(self.edges[e].b);
            }
            if lo.is_zero() && hi == len {
                hull.edges.insert(e);
            } else {
                hull.partial.push((e, lo, hi));
            }
        }
        hull
    }

    /// Σ_v max(ν(v) − 2, 0).
    pub fn tree_defect_sum(&self) -> usize {
        (0..self.num_vertices()).map(|v| self.valence(v).saturating_sub(2)).sum()
    }

    /// Rebuilds with modified parts; used by mutation and surgery code.
    pub fn into_parts(self) -> (Vec<bool>, Vec<Edge>) {
        (self.in_t0, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn interval() -> TreePair {
        // A=0, B=1/3, B'=2/3, A'=1 with T0 = [A,B] ∪ [B',A']
        let e = |a, b, l: Rat, t| Edge { a, b, length: l, in_t0: t };
        TreePair::new(
            vec![true, true, true, true],
            vec![e(0, 1, rat(1, 3), true), e(1, 2, rat(1, 3), false), e(2, 3, rat(1, 3), true)],
        )
        .unwrap()
    }

    fn star(k: usize) -> TreePair {
        let edges = (1..=k).map(|i| Edge { a: 0, b: i, length: int(1), in_t0: true }).collect();
        TreePair::new(vec![true; k + 1], edges).unwrap()
    }

    #[test]
    fn path_on_interval() {
        let t = interval();
        let (s, d) = t.path(&TreePoint::Vertex(0), &TreePoint::Vertex(1));
        assert_eq!(d, rat(1, 3));
        assert_eq!(s, vec![Step { edge: 0, forward: true }]);
        assert_eq!(t.path(&TreePoint::Vertex(2), &TreePoint::Vertex(2)).1, int(0));
        let x = t.point_on_edge(2, rat(1, 12)).unwrap();
        assert_eq!(t.distance(&TreePoint::Vertex(0), &x), rat(3, 4));
        assert_eq!(t.distance(&x, &TreePoint::Vertex(0)), rat(3, 4));
    }

    #[test]
    fn star_leaves_distance() {
        let t = star(3);
        assert_eq!(t.distance(&TreePoint::Vertex(1), &TreePoint::Vertex(2)), int(2));
        assert_eq!(t.tree_defect_sum(), 1);
        assert_eq!(t.leaves().len(), 3);
    }

    #[test]
    fn omega_of_interval_gap_has_no_center() {
        let t = interval();
        let om = t.omega_components();
        assert_eq!(om.len(), 1);
        assert_eq!(om[0].boundary, vec![1, 2]);
        assert_eq!(om[0].center, None);
    }

    #[test]
    fn hull_of_two_star_leaves() {
        let t = star(3);
        let h = t.convex_hull(&[TreePoint::Vertex(1), TreePoint::Vertex(2)]);
        assert_eq!(h.vertices, BTreeSet::from([0, 1, 2]));
        assert_eq!(h.edges, BTreeSet::from([0, 1]));
        let single = t.convex_hull(&[TreePoint::Vertex(3)]);
        assert_eq!(single.vertices, BTreeSet::from([3]));
        assert!(single.edges.is_empty());
    }

    #[test]
    fn rejects_cycles_and_bad_lengths() {
        let e = |a, b| Edge { a, b, length: int(1), in_t0: true };
        assert_eq!(TreePair::new(vec![true; 3], vec![e(0, 1), e(1, 2), e(2, 0)]).unwrap_err(), TreeError::NotATree);
        let bad = Edge { a: 0, b: 1, length: int(0), in_t0: true };
        assert_eq!(TreePair::new(vec![true; 2], vec![bad]).unwrap_err(), TreeError::NonPositiveLength(0));
        let t0bad = Edge { a: 0, b: 1, length: int(1), in_t0: true };
        assert_eq!(TreePair::new(vec![true, false], vec![t0bad]).unwrap_err(), TreeError::EdgeEndpointOutsideT0(0));
    }

    #[test]
    fn single_vertex_tree_is_legal() {
        let t = TreePair::new(vec![true], vec![]).unwrap();
        assert!(t.omega_components().is_empty());
        assert_eq!(t.tree_defect_sum(), 0);
    }
}
