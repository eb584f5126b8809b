//! Grafting at periodic points, the two towers and the diagonal schedule.

use crate::arith::{rat, Rat};
use crate::poly::Poly;
use crate::rational::RationalMap;
use crate::scheme::build::{cx, inf, int_map, SchemeBuilder};
use crate::scheme::{MarkedSphere, SchemeError, TreeMappingScheme};
use crate::tree::{Edge, TreePair, TreePoint};
use crate::value::ComplexValue;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurgeryError {
    #[error("graft target is a vertex")]
    TargetIsVertex,
    #[error("target is not periodic")]
    NotPeriodic,
    #[error("orbit point {0:?} is a branch point or lies on the attached segment")]
    BranchPointOnOrbit(TreePoint),
    #[error("parameter does not close the critical orbit: H(a) = {0}")]
    ParameterNotPostcriticallyClosing(String),
    #[error("no periodic point of period {period} above the previous one")]
    NoPeriodicPoint { period: usize },
    #[error("no sampled n satisfies the schedule at level {0}")]
    ScheduleUnsatisfiable(usize),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Rebuilds a scheme from parts and rederives its portrait.
fn assemble(
    in_t0: Vec<bool>,
    edges: Vec<Edge>,
    map: crate::treemap::TreeMap,
    spheres: Vec<MarkedSphere>,
    maps: BTreeMap<usize, RationalMap>,
    critical: &BTreeMap<usize, Vec<ComplexValue>>,
) -> Result<TreeMappingScheme, SchemeError> {
    let tree = TreePair::new(in_t0, edges).map_err(|e| SchemeError::Invalid(e.to_string()))?;
    let mut s = TreeMappingScheme { tree, map, spheres, maps, portrait: Default::default() };
    s.derive_portrait(critical)?;
    Ok(s)
}

/// The edge at v on the path toward vertex 0.
fn root_edge(tp: &TreePair, v: usize) -> Option<usize> {
    tp.vertex_path(v, 0).first().map(|s| s.edge)
}

/// Möbius map sending 0 and ∞ to the given distinct marked values.
fn moebius_to(at0: &ComplexValue, at_inf: &ComplexValue) -> Result<RationalMap, SchemeError> {
    if at0.same(at_inf) {
        return Err(SchemeError::Invalid(format!("subdivision markings coincide at {at0}")));
    }
    Ok(match (at0, at_inf) {
        (_, ComplexValue::Infinity) => RationalMap::identity().add_constant(at0),
        (ComplexValue::Infinity, _) => RationalMap::monomial(-1).add_constant(at_inf),
        (ComplexValue::Exact(a), ComplexValue::Exact(b)) => {
            let one = crate::arith::GaussRat::one();
            RationalMap::from_exact(Poly(vec![a.clone(), b.clone()]), Poly(vec![one.clone(), one]))
        }
        _ => {
            let (a, b) = (at0.to_c64().unwrap(), at_inf.to_c64().unwrap());
            let one = Complex64::new(1.0, 0.0);
            let tol = at0.tol().max(at_inf.tol());
            RationalMap::from_approx(Poly(vec![a, b]), Poly(vec![one, one]), tol, 1)
        }
    })
}

/// Splits edges at interior points. New vertices get marking ∞ toward
/// vertex 0 and 0 away from it, and the map M∘z^l with l the edge degree.
/// Returns the new vertex for each input point, in order.
pub fn subdivide(s: &TreeMappingScheme, points: &[TreePoint]) -> Result<(TreeMappingScheme, Vec<usize>), SurgeryError> {
    let (mut in_t0, mut edges) = s.tree.clone().into_parts();
    let mut map = s.map.clone();
    let mut spheres = s.spheres.clone();
    let mut by_edge: BTreeMap<usize, Vec<(Rat, usize)>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        match p {
            TreePoint::Vertex(_) => return Err(SurgeryError::TargetIsVertex),
            TreePoint::Interior { edge, offset } => by_edge.entry(*edge).or_default().push((offset.clone(), i)),
        }
    }
    let mut new_vertex = vec![usize::MAX; points.len()];
    for (e, mut cuts) in by_edge {
        cuts.sort();
        cuts.dedup_by(|a, b| a.0 == b.0);
        let old = edges[e].clone();
        let deg = map.edge_degree.get(&e).copied();
        let mut prev_v = old.a;
        let mut prev_t = Rat::from_integer(0.into());
        let mut cur_edge = e;
        for (t, i) in &cuts {
            let w = in_t0.len();
            in_t0.push(old.in_t0);
            spheres.push(MarkedSphere::default());
            edges[cur_edge] = Edge { a: prev_v, b: w, length: t - &prev_t, in_t0: old.in_t0 };
            let next = edges.len();
            edges.push(Edge { a: w, b: old.b, length: &old.length - t, in_t0: old.in_t0 });
            if let Some(d) = deg {
                map.edge_degree.insert(next, d);
            }
            for (j, p) in points.iter().enumerate() {
                if let TreePoint::Interior { edge, offset } = p {
                    if *edge == e && offset == t {
                        new_vertex[j] = w;
                    }
                }
            }
            let _ = i;
            prev_v = w;
            prev_t = t.clone();
            cur_edge = next;
        }
        // the far endpoint now sits on the last piece
        if cur_edge != e {
            if let Some(z) = spheres[old.b].markings.remove(&e) {
                spheres[old.b].markings.insert(cur_edge, z);
            }
        }
    }
    // images and maps need the new tree for directions
    let tree = TreePair::new(in_t0.clone(), edges.clone()).map_err(|e| SchemeError::Invalid(e.to_string()))?;
    for (j, p) in points.iter().enumerate() {
        let w = new_vertex[j];
        let pieces: Vec<usize> = tree.adjacent(w).iter().map(|(e, _)| *e).collect();
        let up = root_edge(&tree, w).expect("new vertex is not the root");
        for &e in &pieces {
            spheres[w].markings.insert(e, if e == up { inf() } else { cx(0, 0) });
        }
        let fp = s.map.eval_point(&s.tree, p).map_err(SchemeError::from)?;
        let img = match &fp {
            TreePoint::Vertex(v) => *v,
            q => {
                let k = points.iter().position(|x| x == q).ok_or(SurgeryError::NotPeriodic)?;
                new_vertex[k]
            }
        };
        map.vertex_image.insert(w, img);
    }
    let mut maps = s.maps.clone();
    for &w in new_vertex.iter() {
        if maps.contains_key(&w) {
            continue;
        }
        let up = root_edge(&tree, w).unwrap();
        let down = tree.adjacent(w).iter().map(|(e, _)| *e).find(|&e| e != up).unwrap();
        let l = map.edge_deg(up).map_err(SchemeError::from)?;
        let img = map.image(w).map_err(SchemeError::from)?;
        let t_up = map.tangent_image(&tree, w, up).map_err(SchemeError::from)?;
        let t_down = map.tangent_image(&tree, w, down).map_err(SchemeError::from)?;
        let mk = |e: usize| spheres[img].markings.get(&e).cloned();
        let (z_inf, z0) = (mk(t_up), mk(t_down));
        let (Some(z_inf), Some(z0)) = (z_inf, z0) else {
            return Err(SchemeError::Invalid(format!("image of vertex {w} lacks markings")).into());
        };
        let m = moebius_to(&z0, &z_inf)?;
        map.vertex_degree.insert(w, l);
        maps.insert(w, m.compose(&RationalMap::monomial(l as i64)));
    }
    let out = assemble(in_t0, edges, map, spheres, maps, &s.declared_critical())?;
    Ok((out, new_vertex))
}

#[derive(Clone, Debug)]
pub struct SurgerySpec {
    pub target: TreePoint,
    /// The attached segment is [target, toward]; toward must be a leaf.
    pub toward: usize,
    pub a: ComplexValue,
}

/// Replaces the Jordan component at an interior periodic orbit by one of
/// complex type: each orbit point X_j gets an attached edge S_j, the last
/// map of the cycle is shifted by a, and every vertex that mapped to the
/// leaf now maps to the end of S_0.
pub fn graft(s: &TreeMappingScheme, spec: &SurgerySpec) -> Result<TreeMappingScheme, SurgeryError> {
    if matches!(spec.target, TreePoint::Vertex(_)) {
        return Err(SurgeryError::TargetIsVertex);
    }
    let bound = 4 * s.tree.num_vertices().max(1) * 1024;
    let q = s.map.point_period(&s.tree, &spec.target, bound).ok_or(SurgeryError::NotPeriodic)?;
    let mut orbit = vec![spec.target.clone()];
    for _ in 1..q {
        let y = s.map.eval_point(&s.tree, orbit.last().unwrap()).map_err(SchemeError::from)?;
        orbit.push(y);
    }
    for x in &orbit {
        if matches!(x, TreePoint::Vertex(_)) {
            return Err(SurgeryError::BranchPointOnOrbit(x.clone()));
        }
    }
    let toward = spec.toward;
    // S = [X0, toward] must be free of vertices and other orbit points
    let len_s = s.tree.distance(&orbit[0], &TreePoint::Vertex(toward));
    for x in &orbit[1..] {
        let d0 = s.tree.distance(&orbit[0], x);
        let d1 = s.tree.distance(x, &TreePoint::Vertex(toward));
        if d0 + d1 == len_s {
            return Err(SurgeryError::BranchPointOnOrbit(x.clone()));
        }
    }
    let (mut t, xs) = subdivide(s, &orbit)?;
    let x0 = xs[0];
    if t.tree.vertex_path(x0, toward).len() != 1 || t.tree.valence(toward) != 1 {
        return Err(SurgeryError::BranchPointOnOrbit(orbit[0].clone()));
    }
    let s_edge = t.tree.vertex_path(x0, toward)[0].edge;
    let z_toward = t.marking(x0, s_edge).cloned().expect("marked");
    // h_j and H(a)
    let last = xs[q - 1];
    let shifted = t.map_at(last)?.add_constant(&spec.a);
    t.maps.insert(last, shifted);
    let mut marks = Vec::with_capacity(q);
    let mut z = spec.a.clone();
    for &x in &xs {
        marks.push(z.clone());
        z = t.apply(x, &z)?;
    }
    if !z.compare(&z_toward).equal {
        return Err(SurgeryError::ParameterNotPostcriticallyClosing(z.to_string()));
    }
    let critical = t.declared_critical();
    let TreeMappingScheme { tree, mut map, mut spheres, mut maps, .. } = t;
    let (mut in_t0, mut edges) = tree.into_parts();
    let redirect: Vec<usize> = map.vertex_image.iter().filter(|(_, &w)| w == toward).map(|(&v, _)| v).collect();
    let mut ds = Vec::with_capacity(q);
    for (j, &x) in xs.iter().enumerate() {
        let d = in_t0.len();
        in_t0.push(true);
        let e = edges.len();
        edges.push(Edge { a: x, b: d, length: len_s.clone(), in_t0: true });
        map.edge_degree.insert(e, 1);
        spheres[x].markings.insert(e, marks[j].clone());
        let mut sp = MarkedSphere::default();
        sp.markings.insert(e, inf());
        spheres.push(sp);
        maps.insert(d, RationalMap::identity());
        map.vertex_degree.insert(d, 1);
        ds.push(d);
    }
    for j in 0..q {
        map.vertex_image.insert(ds[j], if j + 1 < q { ds[j + 1] } else { toward });
    }
    for v in redirect {
        map.vertex_image.insert(v, ds[0]);
    }
    Ok(assemble(in_t0, edges, map, spheres, maps, &critical)?)
}

/// a_m = e^{iπ/(D+1)} with D = 3^(2^m): the root of a^(D+1) = −1 of least
/// positive argument.
pub fn tower_parameter(m: u32) -> ComplexValue {
    let d = 3f64.powi(2i32.pow(m));
    let z = Complex64::from_polar(1.0, std::f64::consts::PI / (d + 1.0));
    ComplexValue::approx(z.re, z.im)
}

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub k: usize,
    pub scheme: TreeMappingScheme,
    /// Offsets of A_0, A_1, ... from B' on [B', A'] of the base scheme.
    pub offsets: Vec<Rat>,
    /// Vertex ids of B' and A'; they are the same at every level.
    pub b_prime: usize,
    pub a_prime: usize,
}

impl TowerLevel {
    pub fn point(&self, m: usize) -> TreePoint {
        self.scheme.tree.point_along(self.b_prime, self.a_prime, &self.offsets[m]).expect("A_m on [B', A']")
    }

    /// p_{k,m}.
    pub fn expected_period(&self, m: usize) -> usize {
        let k = self.k;
        if m <= k {
            3usize.pow(m as u32)
        } else {
            2usize.pow((m - k) as u32) * 3usize.pow(k as u32)
        }
    }
}

/// Offsets of A_0..A_{count−1}: A_m is the least point of period 2^m under
/// the base map above A_{m−1} on [B', A'].
pub fn tower_offsets(base: &TreeMappingScheme, b_prime: usize, a_prime: usize, count: usize) -> Result<Vec<Rat>, SurgeryError> {
    let e = base.tree.edge_between(b_prime, a_prime).expect("edge [B', A']");
    let from_a = base.tree.edge(e).a == b_prime;
    let len = base.tree.edge(e).length.clone();
    let mut out: Vec<Rat> = Vec::new();
    for m in 0..count {
        let p = 1usize << m;
        let thr = out.last().cloned().unwrap_or_else(|| rat(0, 1));
        let thr_edge = if from_a { thr.clone() } else { &len - &thr };
        let x = if from_a {
            base.map.smallest_periodic_above(&base.tree, e, &thr_edge, p)
        } else {
            return Err(SurgeryError::NoPeriodicPoint { period: p });
        };
        match x {
            Ok(TreePoint::Interior { offset, .. }) => out.push(offset),
            _ => return Err(SurgeryError::NoPeriodicPoint { period: p }),
        }
    }
    Ok(out)
}

/// Level k of the Cantor tower, with A_m located for m ≤ k + 2.
pub fn cantor_tower(k: usize) -> Result<TowerLevel, SurgeryError> {
    let base = crate::catalog::schemes::cantor_z3();
    let (b_prime, a_prime) = (3, 4);
    let offsets = tower_offsets(&base, b_prime, a_prime, k + 3)?;
    let mut level = TowerLevel { k: 0, scheme: base, offsets, b_prime, a_prime };
    for m in 0..k {
        let target = level.point(m);
        let spec = SurgerySpec { target, toward: a_prime, a: tower_parameter(m as u32) };
        level.scheme = graft(&level.scheme, &spec)?;
        level.k = m + 1;
    }
    Ok(level)
}

/// The scheme with buried component 1/(z−1)², raised to degree d by
/// replacing the map at X3 with z^k/(z^k − (z−1)^k), k = d − 2.
pub fn godillon_scheme(d: u32) -> TreeMappingScheme {
    assert!(d >= 3, "degree at least 3");
    let mut s = SchemeBuilder::new();
    let a = s.vertex(true);
    let x1 = s.vertex(true);
    let x2 = s.vertex(true);
    let x3 = s.vertex(true);
    let x4 = s.vertex(true);
    let b = s.vertex(true);
    let g = s.vertex(false);
    let bp = s.vertex(true);
    let ap = s.vertex(true);
    let e1 = s.edge(a, x1, rat(1, 1), Some(2));
    let e2 = s.edge(a, x2, rat(2, 1), Some(2));
    let eb = s.edge(a, b, rat(1, 1), Some(1));
    let e4 = s.edge(a, x4, rat(1, 1), Some(1));
    let ebg = s.edge(b, g, rat(1, 2), None);
    let egb = s.edge(g, bp, rat(1, 2), None);
    let eba = s.edge(bp, ap, rat(1, 1), Some(1));
    let e3 = s.edge(ap, x3, rat(1, 1), Some(1));
    s.mark(a, eb, cx(0, 0)).mark(a, e1, cx(1, 0)).mark(a, e2, inf()).mark(a, e4, cx(2, 0));
    s.mark(x1, e1, inf()).mark(x2, e2, inf()).mark(x4, e4, inf()).mark(x3, e3, inf());
    s.mark(b, eb, inf()).mark(b, ebg, cx(0, 0));
    s.mark(g, ebg, cx(0, 0)).mark(g, egb, inf());
    s.mark(bp, egb, inf()).mark(bp, eba, cx(0, 0));
    s.mark(ap, eba, inf()).mark(ap, e3, cx(0, 0));
    s.map(a, a, int_map(&[1], &[1, -2, 1])).map(ap, a, int_map(&[2, -1], &[1, -1]));
    s.map(b, x1, RationalMap::identity()).map(bp, x1, RationalMap::monomial(-1));
    s.map(x1, x2, RationalMap::monomial(2)).map(x2, x3, RationalMap::monomial(2));
    s.critical(x1, vec![cx(0, 0)]).critical(x2, vec![cx(0, 0)]);
    let k = d - 2;
    if k == 1 {
        s.map(x3, x4, RationalMap::identity());
    } else {
        let (zk, zm1) = (godillon_power(k, false), godillon_power(k, true));
        let den: Vec<i64> = (0..=k as usize).map(|i| zk.get(i).copied().unwrap_or(0) - zm1[i]).collect();
        s.map(x3, x4, int_map(&zk, &den));
        s.critical(x3, vec![cx(0, 0), cx(1, 0)]);
    }
    s.map(x4, x1, RationalMap::identity());
    s.build().expect("godillon scheme")
}

/// Coefficients of z^k, or of (z−1)^k when `shifted`.
fn godillon_power(k: u32, shifted: bool) -> Vec<i64> {
    let mut c = vec![1i64];
    for _ in 0..k {
        let mut n = vec![0i64; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            n[i + 1] += x;
            if shifted {
                n[i] -= x;
            }
        }
        c = n;
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScheduleRow {
    pub k: usize,
    pub n: f64,
    /// Worst sup distance over the checks of this level.
    pub worst: f64,
}

/// For each level k, the least sampled n with every distance of levels
/// j ≤ k below 1/k. `levels[j]` lists (n, distance) samples.
pub fn diagonal_schedule(levels: &[Vec<(f64, f64)>]) -> Result<Vec<ScheduleRow>, SurgeryError> {
    let mut out = Vec::new();
    for k in 1..=levels.len() {
        let tol = 1.0 / k as f64;
        let mut ns: Vec<f64> = levels[..k].iter().flat_map(|l| l.iter().map(|x| x.0)).collect();
        ns.sort_by(f64::total_cmp);
        ns.dedup();
        let found = ns.into_iter().find_map(|n| {
            let mut worst = 0.0f64;
            for l in &levels[..k] {
                let d = l.iter().find(|x| x.0 == n)?.1;
                worst = worst.max(d);
            }
            (worst < tol).then_some(ScheduleRow { k, n, worst })
        });
        out.push(found.ok_or(SurgeryError::ScheduleUnsatisfiable(k))?);
    }
    Ok(out)
}
