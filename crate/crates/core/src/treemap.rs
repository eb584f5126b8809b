//! Piecewise-linear tree maps F: T0 → T1 given by a vertex map and a local
//! degree function.

use crate::arith::{fmt_rat, Rat};
use crate::tree::{OmegaComponent, Step, TreePair, TreePoint};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeMapError {
    #[error("point is outside T0")]
    PointOutsideDomain,
    #[error("edge {0} has both endpoints mapped to the same vertex")]
    DegenerateImage(usize),
    #[error("vertex {0} has no image")]
    MissingImage(usize),
    #[error("edge {0} has no degree")]
    MissingDegree(usize),
    #[error("interval of fixed points on edge {0}")]
    ExpansionViolation(usize),
    #[error("not a branched covering at vertex {0}")]
    NotABranchedCovering(usize),
    #[error("degree sums disagree: {0} vs {1}")]
    InconsistentDegree(u64, u64),
    #[error("component is not star-shaped")]
    NotStarShaped,
    #[error("boundary images do not bound a component of Ω")]
    BoundaryImageMismatch,
    #[error("not extendable: {0}")]
    NotExtendable(String),
    #[error("vertex {0} is not periodic with the requested period")]
    NotPeriodic(usize),
    #[error("no periodic point of period {period} above {threshold} on edge {edge}")]
    NoPeriodicPoint { edge: usize, threshold: String, period: usize },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct TreeMap {
    pub vertex_image: BTreeMap<usize, usize>,
    pub edge_degree: BTreeMap<usize, u32>,
    pub vertex_degree: BTreeMap<usize, u32>,
}

/// One full edge of an image arc, with the arclength at which it starts.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcStep {
    pub edge: usize,
    pub forward: bool,
    pub start: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageArc {
    pub from: usize,
    pub to: usize,
    pub steps: Vec<ArcStep>,
    pub length: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoveringType {
    GeneralMap,
    BranchedCovering,
    Covering,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexDegreeCheck {
    pub vertex: usize,
    pub ineq_1: bool,
    pub ineq_2: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    pub vertices: Vec<VertexDegreeCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricReport {
    /// (edge, image length, expected length)
    pub offending: Vec<(usize, String, String)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeReport {
    pub pass: bool,
    pub trapped: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extension {
    /// F(∂U) = ∂W; `degrees` lists (boundary vertex, edge [p,a], degree).
    CaseA {
        target: usize,
        center_image: usize,
        degrees: Vec<(usize, usize, u32)>,
        center_degree: u32,
        covering: bool,
    },
    CaseB {
        vertex: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseReport {
    pub pass: bool,
    /// Case A cycles of components.
    pub cycles: Vec<Vec<usize>>,
    /// Components whose chain ends at a non-extendable component.
    pub broken: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ItineraryOrbit {
    pub period: usize,
    /// Orbit representative: the least point of the orbit.
    pub point: TreePoint,
    pub orbit: Vec<TreePoint>,
    pub edge_itinerary: Vec<usize>,
    pub multiplier: BigInt,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PeriodicPoints {
    /// Vertex cycles, each rotated to start at its least vertex.
    pub vertex_cycles: Vec<Vec<usize>>,
    pub orbits: Vec<ItineraryOrbit>,
}

impl TreeMap {
    pub fn image(&self, v: usize) -> Result<usize, TreeMapError> {
        self.vertex_image.get(&v).copied().ok_or(TreeMapError::MissingImage(v))
    }

    pub fn edge_deg(&self, e: usize) -> Result<u32, TreeMapError> {
        self.edge_degree.get(&e).copied().ok_or(TreeMapError::MissingDegree(e))
    }

    pub fn vertex_deg(&self, v: usize) -> u32 {
        self.vertex_degree.get(&v).copied().unwrap_or(1)
    }

    /// Structural checks: every V0 vertex has an image, every E0 edge a degree
    /// and a non-degenerate image.
    pub fn check(&self, tp: &TreePair) -> Result<(), TreeMapError> {
        for v in tp.v0() {
            let w = self.image(v)?;
            if w >= tp.num_vertices() {
                return Err(TreeMapError::MissingImage(v));
            }
        }
        for e in tp.e0() {
            self.edge_deg(e)?;
            self.image_arc(tp, e)?;
        }
        Ok(())
    }

    /// The arc [F(a), F(b)] for e = [a,b] ∈ E0.
    pub fn image_arc(&self, tp: &TreePair, e: usize) -> Result<ImageArc, TreeMapError> {
        let ed = tp.edge(e);
        if !ed.in_t0 {
            return Err(TreeMapError::PointOutsideDomain);
        }
        let (fa, fb) = (self.image(ed.a)?, self.image(ed.b)?);
        if fa == fb {
            return Err(TreeMapError::DegenerateImage(e));
        }
        let mut start = Rat::zero();
        let mut steps = Vec::new();
        for Step { edge, forward } in tp.vertex_path(fa, fb) {
            let len = tp.edge(edge).length.clone();
            steps.push(ArcStep { edge, forward, start: start.clone() });
            start += len;
        }
        Ok(ImageArc { from: fa, to: fb, steps, length: start })
    }

    /// F(x) for x ∈ T0, by arclength fraction along the image arc.
    pub fn eval_point(&self, tp: &TreePair, x: &TreePoint) -> Result<TreePoint, TreeMapError> {
        if !tp.point_in_t0(x) {
            return Err(TreeMapError::PointOutsideDomain);
        }
        match x {
            TreePoint::Vertex(v) => Ok(TreePoint::Vertex(self.image(*v)?)),
            TreePoint::Interior { edge, offset } => {
                let arc = self.image_arc(tp, *edge)?;
                let dist = offset * &arc.length / &tp.edge(*edge).length;
                Ok(point_on_arc(tp, &arc, &dist))
            }
        }
    }

    /// D_aF: the direction at F(a) of the image of edge e at a.
    pub fn tangent_image(&self, tp: &TreePair, a: usize, e: usize) -> Result<usize, TreeMapError> {
        let b = tp.other_end(e, a);
        let (fa, fb) = (self.image(a)?, self.image(b)?);
        if fa == fb {
            return Err(TreeMapError::DegenerateImage(e));
        }
        Ok(tp.vertex_path(fa, fb)[0].edge)
    }

    fn t0_edges_at(tp: &TreePair, a: usize) -> Vec<usize> {
        tp.adjacent(a).iter().map(|(e, _)| *e).filter(|e| tp.edge(*e).in_t0).collect()
    }

    fn vertex_inequalities(&self, tp: &TreePair, a: usize) -> Result<(bool, bool, bool, bool), TreeMapError> {
        let deg = self.vertex_deg(a) as i64;
        let edges = Self::t0_edges_at(tp, a);
        let mut sum1 = 0i64;
        let mut groups: BTreeMap<usize, i64> = BTreeMap::new();
        for &e in &edges {
            let d = self.edge_deg(e)? as i64;
            sum1 += d - 1;
            *groups.entry(self.tangent_image(tp, a, e)?).or_default() += d;
        }
        let ineq1 = 2 * deg - 2 >= sum1;
        let eq1 = 2 * deg - 2 == sum1;
        let ineq2 = groups.values().all(|&s| deg >= s);
        let eq2 = groups.values().all(|&s| deg == s);
        Ok((ineq1, ineq2, eq1, eq2))
    }

    pub fn check_degree_function(&self, tp: &TreePair) -> Result<DegreeReport, TreeMapError> {
        let mut vertices = Vec::new();
        for a in tp.v0() {
            let (i1, i2, _, _) = self.vertex_inequalities(tp, a)?;
            vertices.push(VertexDegreeCheck { vertex: a, ineq_1: i1, ineq_2: i2 });
        }
        let pass = vertices.iter().all(|v| v.ineq_1 && v.ineq_2);
        Ok(DegreeReport { vertices, pass })
    }

    pub fn covering_type_at(&self, tp: &TreePair, a: usize) -> Result<CoveringType, TreeMapError> {
        let (_, _, eq1, eq2) = self.vertex_inequalities(tp, a)?;
        Ok(match (eq2, eq1) {
            (true, true) => CoveringType::Covering,
            (true, false) => CoveringType::BranchedCovering,
            _ => CoveringType::GeneralMap,
        })
    }

    pub fn is_geometric(&self, tp: &TreePair) -> Result<GeometricReport, TreeMapError> {
        let mut offending = Vec::new();
        for e in tp.e0() {
            let arc = self.image_arc(tp, e)?;
            let want = tp.edge(e).length.clone() * Rat::from_integer(self.edge_deg(e)?.into());
            if arc.length != want {
                offending.push((e, fmt_rat(&arc.length), fmt_rat(&want)));
            }
        }
        Ok(GeometricReport { pass: offending.is_empty(), offending })
    }

    /// Degree of the restriction of F to the given edges and vertices, which
    /// must form a branched covering onto its image.
    pub fn degree_of_branched_covering(
        &self,
        tp: &TreePair,
        edges: &[usize],
        vertices: &[usize],
    ) -> Result<u64, TreeMapError> {
        for &a in vertices {
            if self.covering_type_at(tp, a)? == CoveringType::GeneralMap {
                return Err(TreeMapError::NotABranchedCovering(a));
            }
        }
        let mut edge_sums: BTreeMap<usize, u64> = BTreeMap::new();
        let mut vertex_sums: BTreeMap<usize, u64> = BTreeMap::new();
        for &a in vertices {
            *vertex_sums.entry(self.image(a)?).or_default() += self.vertex_deg(a) as u64;
        }
        for &e in edges {
            let d = self.edge_deg(e)? as u64;
            let arc = self.image_arc(tp, e)?;
            let mut cur = arc.from;
            for (i, s) in arc.steps.iter().enumerate() {
                *edge_sums.entry(s.edge).or_default() += d;
                if i > 0 {
                    *vertex_sums.entry(cur).or_default() += d;
                }
                cur = tp.other_end(s.edge, cur);
            }
        }
        let mut all = edge_sums.values().chain(vertex_sums.values());
        let first = *all.next().ok_or(TreeMapError::NotABranchedCovering(usize::MAX))?;
        for &x in all {
            if x != first {
                return Err(TreeMapError::InconsistentDegree(first, x));
            }
        }
        Ok(first)
    }

    /// Edge-escape test: every E0 edge must eventually cover an edge outside T0.
    pub fn escape_check(&self, tp: &TreePair) -> Result<EscapeReport, TreeMapError> {
        let e0 = tp.e0();
        let mut covers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut escapes: BTreeSet<usize> = BTreeSet::new();
        for &e in &e0 {
            let arc = self.image_arc(tp, e)?;
            let c: Vec<usize> = arc.steps.iter().map(|s| s.edge).collect();
            if c.iter().any(|&x| !tp.edge(x).in_t0) {
                escapes.insert(e);
            }
            covers.insert(e, c);
        }
        loop {
            let before = escapes.len();
            for &e in &e0 {
                if !escapes.contains(&e) && covers[&e].iter().any(|x| escapes.contains(x)) {
                    escapes.insert(e);
                }
            }
            if escapes.len() == before {
                break;
            }
        }
        let trapped: Vec<usize> = e0.iter().copied().filter(|e| !escapes.contains(e)).collect();
        let mut g = DiGraph::<usize, ()>::new();
        let idx: BTreeMap<usize, _> = trapped.iter().map(|&e| (e, g.add_node(e))).collect();
        for &e in &trapped {
            for x in &covers[&e] {
                if let Some(&j) = idx.get(x) {
                    g.add_edge(idx[&e], j, ());
                }
            }
        }
        let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .filter(|c| c.len() > 1 || g.contains_edge(c[0], c[0]))
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| g[n]).collect();
                v.sort();
                v
            })
            .collect();
        sccs.sort();
        Ok(EscapeReport { pass: trapped.is_empty(), trapped: sccs })
    }

    /// Candidate extension over a star-shaped Ω component. `degree_at(a, e)`
    /// supplies the local degree of f_a at the marking of edge e.
    pub fn extend_on_component(
        &self,
        tp: &TreePair,
        comps: &[OmegaComponent],
        u: usize,
        degree_at: &dyn Fn(usize, usize) -> Option<u32>,
    ) -> Result<Extension, TreeMapError> {
        let cu = &comps[u];
        let p = cu.center.ok_or(TreeMapError::NotStarShaped)?;
        let images: BTreeSet<usize> = cu.boundary.iter().map(|&a| self.image(a)).collect::<Result<_, _>>()?;
        if images.len() == 1 {
            let v = *images.iter().next().unwrap();
            return Ok(Extension::CaseB { vertex: v });
        }
        let (target, w) = comps
            .iter()
            .enumerate()
            .find(|(_, w)| w.boundary.iter().copied().collect::<BTreeSet<_>>() == images)
            .ok_or(TreeMapError::BoundaryImageMismatch)?;
        let q = w.center.ok_or_else(|| TreeMapError::NotExtendable("target component has no center".into()))?;
        let mut degrees = Vec::new();
        let mut groups: BTreeMap<usize, u32> = BTreeMap::new();
        for &a in &cu.boundary {
            let e = tp
                .edge_between(p, a)
                .ok_or_else(|| TreeMapError::NotExtendable(format!("boundary vertex {a} is not adjacent to the center")))?;
            let d = degree_at(a, e).ok_or_else(|| TreeMapError::NotExtendable(format!("no local degree at vertex {a}")))?;
            let fa = self.image(a)?;
            let dist = tp.vertex_distance(q, fa);
            if dist != &tp.edge(e).length * Rat::from_integer(d.into()) {
                return Err(TreeMapError::NotExtendable(format!("edge {e} is not geometric")));
            }
            *groups.entry(tp.vertex_path(q, fa)[0].edge).or_default() += d;
            degrees.push((a, e, d));
        }
        let center_degree = *groups.values().next().unwrap();
        if groups.values().any(|&s| s != center_degree) {
            return Err(TreeMapError::NotExtendable("branched-covering equality fails at the center".into()));
        }
        if groups.len() != tp.valence(q) {
            return Err(TreeMapError::NotExtendable("extension misses a direction at the target center".into()));
        }
        let ram: i64 = degrees.iter().map(|(_, _, d)| *d as i64 - 1).sum();
        let covering = 2 * center_degree as i64 - 2 == ram;
        Ok(Extension::CaseA { target, center_image: q, degrees, center_degree, covering })
    }

    /// Follows the induced map on Ω components until case B.
    pub fn omega_orbit_eventually_collapses(&self, ext: &[Result<Extension, TreeMapError>]) -> CollapseReport {
        let mut cycles = Vec::new();
        let mut broken = Vec::new();
        let mut seen_cycles: BTreeSet<Vec<usize>> = BTreeSet::new();
        for start in 0..ext.len() {
            let mut path = vec![start];
            let mut cur = start;
            loop {
                match &ext[cur] {
                    Ok(Extension::CaseB { .. }) => break,
                    Err(_) => {
                        broken.push(start);
                        break;
                    }
                    Ok(Extension::CaseA { target, .. }) => {
                        if let Some(pos) = path.iter().position(|&x| x == *target) {
                            let mut cyc = path[pos..].to_vec();
                            let m = cyc.iter().enumerate().min_by_key(|(_, v)| **v).unwrap().0;
                            cyc.rotate_left(m);
                            if seen_cycles.insert(cyc.clone()) {
                                cycles.push(cyc);
                            }
                            break;
                        }
                        path.push(*target);
                        cur = *target;
                    }
                }
            }
        }
        CollapseReport { pass: cycles.is_empty() && broken.is_empty(), cycles, broken }
    }

    /// Minimal period of x under F, if x is periodic with period ≤ bound.
    pub fn point_period(&self, tp: &TreePair, x: &TreePoint, bound: usize) -> Option<usize> {
        let mut y = x.clone();
        for k in 1..=bound {
            y = self.eval_point(tp, &y).ok()?;
            if &y == x {
                return Some(k);
            }
        }
        None
    }

    /// F-cycle of a periodic vertex, starting at v.
    pub fn vertex_cycle(&self, tp: &TreePair, v: usize) -> Option<Vec<usize>> {
        let mut cyc = vec![v];
        let mut cur = v;
        for _ in 0..tp.num_vertices() {
            if !tp.in_t0(cur) {
                return None;
            }
            cur = self.image(cur).ok()?;
            if cur == v {
                return Some(cyc);
            }
            cyc.push(cur);
        }
        None
    }

    /// All points of minimal period p: vertex cycles and interior orbits.
    pub fn periodic_points(&self, tp: &TreePair, p: usize) -> Result<PeriodicPoints, TreeMapError> {
        let mut out = PeriodicPoints::default();
        for v in tp.v0() {
            if let Some(c) = self.vertex_cycle(tp, v) {
                if c.len() == p && c.iter().min() == Some(&v) {
                    out.vertex_cycles.push(c);
                }
            }
        }
        let ctx = Ctx::new(self, tp)?;
        let mut found: BTreeMap<Vec<TreePoint>, ItineraryOrbit> = BTreeMap::new();
        for e0 in tp.e0() {
            let mut sols = Vec::new();
            ctx.dfs(e0, p, None, &mut |t, itin, slope| {
                sols.push((t, itin.to_vec(), slope));
                false
            })?;
            for (t, itin, slope) in sols {
                let x = TreePoint::Interior { edge: e0, offset: t };
                if self.point_period(tp, &x, p) != Some(p) {
                    continue;
                }
                let orbit = self.orbit_of(tp, &x, p)?;
                let mut key = orbit.clone();
                key.sort();
                if found.contains_key(&key) {
                    continue;
                }
                let rot = orbit.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).unwrap().0;
                let mut orbit_r = orbit.clone();
                orbit_r.rotate_left(rot);
                let mut itin_r = itin.clone();
                itin_r.rotate_left(rot);
                let mut mult: BigInt = itin.iter().map(|&e| BigInt::from(self.edge_degree[&e])).product();
                if slope.is_negative() {
                    mult = -mult;
                }
                found.insert(
                    key,
                    ItineraryOrbit {
                        period: p,
                        point: orbit_r[0].clone(),
                        orbit: orbit_r,
                        edge_itinerary: itin_r,
                        multiplier: mult,
                    },
                );
            }
        }
        let mut orbits: Vec<ItineraryOrbit> = found.into_values().collect();
        orbits.sort_by(|a, b| a.point.cmp(&b.point));
        out.orbits = orbits;
        Ok(out)
    }

    fn orbit_of(&self, tp: &TreePair, x: &TreePoint, p: usize) -> Result<Vec<TreePoint>, TreeMapError> {
        let mut v = vec![x.clone()];
        for _ in 1..p {
            let y = self.eval_point(tp, v.last().unwrap())?;
            v.push(y);
        }
        Ok(v)
    }

    /// Least point of minimal period p on edge e with offset strictly above
    /// `threshold`.
    pub fn smallest_periodic_above(
        &self,
        tp: &TreePair,
        edge: usize,
        threshold: &Rat,
        p: usize,
    ) -> Result<TreePoint, TreeMapError> {
        let ctx = Ctx::new(self, tp)?;
        let mut best: Option<Rat> = None;
        ctx.dfs(edge, p, Some(threshold), &mut |t, _, _| {
            if t <= *threshold {
                return false;
            }
            let x = TreePoint::Interior { edge, offset: t.clone() };
            if self.point_period(tp, &x, p) == Some(p) {
                best = Some(t);
                return true;
            }
            false
        })?;
        match best {
            Some(t) => Ok(TreePoint::Interior { edge, offset: t }),
            None => Err(TreeMapError::NoPeriodicPoint { edge, threshold: fmt_rat(threshold), period: p }),
        }
    }
}

/// Point at arclength `dist` from the start of an image arc.
fn point_on_arc(tp: &TreePair, arc: &ImageArc, dist: &Rat) -> TreePoint {
    if dist.is_zero() {
        return TreePoint::Vertex(arc.from);
    }
    if *dist == arc.length {
        return TreePoint::Vertex(arc.to);
    }
    // the last step whose start is ≤ dist
    let i = arc.steps.partition_point(|s| s.start <= *dist) - 1;
    let s = &arc.steps[i];
    let len = &tp.edge(s.edge).length;
    let into = dist - &s.start;
    let off = if s.forward { into } else { len - into };
    tp.point_on_edge(s.edge, off).expect("offset within edge")
}

/// Precomputed arcs for the itinerary search.
struct Ctx<'a> {
    tp: &'a TreePair,
    arcs: BTreeMap<usize, (ImageArc, Rat)>,
}

impl<'a> Ctx<'a> {
    fn new(f: &TreeMap, tp: &'a TreePair) -> Result<Self, TreeMapError> {
        let mut arcs = BTreeMap::new();
        for e in tp.e0() {
            let arc = f.image_arc(tp, e)?;
            let sigma = &arc.length / &tp.edge(e).length;
            arcs.insert(e, (arc, sigma));
        }
        Ok(Ctx { tp, arcs })
    }

    /// Depth-first search over itineraries of length p starting and ending on
    /// e0, visiting branches in increasing order of the e0 coordinate. The
    /// callback receives each fixed point strictly inside its cylinder and
    /// returns true to stop.
    fn dfs(
        &self,
        e0: usize,
        p: usize,
        floor: Option<&Rat>,
        found: &mut dyn FnMut(Rat, &[usize], Rat) -> bool,
    ) -> Result<(), TreeMapError> {
        let len = self.tp.edge(e0).length.clone();
        let mut itin = vec![e0];
        self.rec(e0, p, floor, Rat::zero(), len, Rat::one(), Rat::zero(), &mut itin, found)
            .map(|_| ())
    }

    /// State: t ∈ [lo, hi] on e0 maps to coordinate m t + c on the current edge.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        e0: usize,
        p: usize,
        floor: Option<&Rat>,
        lo: Rat,
        hi: Rat,
        m: Rat,
        c: Rat,
        itin: &mut Vec<usize>,
        found: &mut dyn FnMut(Rat, &[usize], Rat) -> bool,
    ) -> Result<bool, TreeMapError> {
        if let Some(fl) = floor {
            if hi <= *fl {
                return Ok(false);
            }
        }
        let cur = *itin.last().unwrap();
        if itin.len() == p + 1 {
            if cur != e0 {
                return Ok(false);
            }
            let one = Rat::one();
            if m == one {
                if c.is_zero() {
                    return Err(TreeMapError::ExpansionViolation(e0));
                }
                return Ok(false);
            }
            let t = &c / (&one - &m);
            if lo < t && t < hi {
                itin.pop();
                let stop = found(t, itin, m.clone());
                itin.push(cur);
                return Ok(stop);
            }
            return Ok(false);
        }
        let Some((arc, sigma)) = self.arcs.get(&cur) else {
            return Ok(false);
        };
        // children in order of increasing t
        let mut kids = Vec::new();
        for s in &arc.steps {
            if !self.tp.edge(s.edge).in_t0 {
                continue;
            }
            let el = self.tp.edge(s.edge).length.clone();
            // u-range on the current edge for this step
            let ulo = &s.start / sigma;
            let uhi = (&s.start + &el) / sigma;
            // pull back to t via u = m t + c
            let (t1, t2) = ((&ulo - &c) / &m, (&uhi - &c) / &m);
            let (a, b) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            let nlo = if a > lo { a } else { lo.clone() };
            let nhi = if b < hi { b } else { hi.clone() };
            if nlo >= nhi {
                continue;
            }
            // u' = σu − start (forward) or el − (σu − start)
            let (nm, nc) = if s.forward {
                (sigma * &m, sigma * &c - &s.start)
            } else {
                (-(sigma * &m), &el - (sigma * &c - &s.start))
            };
            kids.push((nlo, nhi, nm, nc, s.edge));
        }
        kids.sort_by(|x, y| x.0.cmp(&y.0));
        for (nlo, nhi, nm, nc, e) in kids {
            itin.push(e);
            let stop = self.rec(e0, p, floor, nlo, nhi, nm, nc, itin, found)?;
            itin.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::tree::Edge;

    /// [0,1/3] ∪ [2/3,1] tent: A→A, B→A', B'→A', A'→A.
    fn z3_tent() -> (TreePair, TreeMap) {
        let e = |a, b, l: Rat, t| Edge { a, b, length: l, in_t0: t };
        let tp = TreePair::new(
            vec![true, true, false, true, true],
            vec![e(0, 1, rat(1, 3), true), e(1, 2, rat(1, 6), false), e(2, 3, rat(1, 6), false), e(3, 4, rat(1, 3), true)],
        )
        .unwrap();
        let f = TreeMap {
            vertex_image: BTreeMap::from([(0, 0), (1, 4), (3, 4), (4, 0)]),
            edge_degree: BTreeMap::from([(0, 3), (3, 3)]),
            vertex_degree: BTreeMap::from([(0, 3), (1, 3), (3, 3), (4, 3)]),
        };
        (tp, f)
    }

    fn at(x: Rat) -> TreePoint {
        // coordinate on [0,1] of the tent tree
        let tp = z3_tent().0;
        let e = if x <= rat(1, 3) { (0, x) } else if x <= rat(1, 2) { (1, x - rat(1, 3)) } else if x <= rat(2, 3) { (2, x - rat(1, 2)) } else { (3, x - rat(2, 3)) };
        tp.point_on_edge(e.0, e.1).unwrap()
    }

    #[test]
    fn tent_eval_fixes_three_quarters() {
        let (tp, f) = z3_tent();
        assert_eq!(f.eval_point(&tp, &at(rat(3, 4))).unwrap(), at(rat(3, 4)));
        assert_eq!(f.eval_point(&tp, &at(rat(1, 9))).unwrap(), at(rat(1, 3)));
        assert_eq!(f.eval_point(&tp, &at(rat(1, 2))), Err(TreeMapError::PointOutsideDomain));
    }

    #[test]
    fn tent_periodic_points() {
        let (tp, f) = z3_tent();
        let p1 = f.periodic_points(&tp, 1).unwrap();
        assert_eq!(p1.vertex_cycles, vec![vec![0]]);
        assert_eq!(p1.orbits.len(), 1);
        assert_eq!(p1.orbits[0].point, at(rat(3, 4)));
        assert_eq!(p1.orbits[0].multiplier, BigInt::from(-3));
        let p2 = f.periodic_points(&tp, 2).unwrap();
        assert_eq!(p2.orbits.len(), 1);
        assert_eq!(p2.orbits[0].orbit, vec![at(rat(3, 10)), at(rat(9, 10))]);
        assert_eq!(p2.orbits[0].multiplier, BigInt::from(-9));
        let a1 = f.smallest_periodic_above(&tp, 3, &rat(1, 12), 2).unwrap();
        assert_eq!(a1, at(rat(9, 10)));
    }

    #[test]
    fn tent_checks() {
        let (tp, f) = z3_tent();
        assert!(f.is_geometric(&tp).unwrap().pass);
        assert!(f.check_degree_function(&tp).unwrap().pass);
        assert!(f.escape_check(&tp).unwrap().pass);
        assert_eq!(f.covering_type_at(&tp, 0).unwrap(), CoveringType::BranchedCovering);
        let deg = f.degree_of_branched_covering(&tp, &[0, 3], &[0, 1, 3, 4]).unwrap();
        assert_eq!(deg, 6);
        let om = tp.omega_components();
        let ext = f.extend_on_component(&tp, &om, 0, &|_, _| Some(1)).unwrap();
        assert_eq!(ext, Extension::CaseB { vertex: 4 });
    }

    #[test]
    fn invariant_edge_is_trapped() {
        let tp = TreePair::new(vec![true, true], vec![Edge { a: 0, b: 1, length: int(1), in_t0: true }]).unwrap();
        let f = TreeMap {
            vertex_image: BTreeMap::from([(0, 0), (1, 1)]),
            edge_degree: BTreeMap::from([(0, 1)]),
            vertex_degree: BTreeMap::from([(0, 1), (1, 1)]),
        };
        let r = f.escape_check(&tp).unwrap();
        assert!(!r.pass);
        assert_eq!(r.trapped, vec![vec![0]]);
        assert_eq!(f.periodic_points(&tp, 1), Err(TreeMapError::ExpansionViolation(0)));
    }

    #[test]
    fn degree_function_violation() {
        // deg(a) = 2 with three adjacent edges of degree 2
        let edges = (1..=3).map(|i| Edge { a: 0, b: i, length: int(1), in_t0: true }).collect();
        let tp = TreePair::new(vec![true; 4], edges).unwrap();
        let f = TreeMap {
            vertex_image: BTreeMap::from([(0, 0), (1, 1), (2, 2), (3, 3)]),
            edge_degree: BTreeMap::from([(0, 2), (1, 2), (2, 2)]),
            vertex_degree: BTreeMap::from([(0, 2), (1, 2), (2, 2), (3, 2)]),
        };
        let r = f.check_degree_function(&tp).unwrap();
        assert!(!r.pass);
        assert!(!r.vertices[0].ineq_1);
    }
}
