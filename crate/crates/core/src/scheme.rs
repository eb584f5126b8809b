//! Marked spheres, mapping schemes, orbit portraits and their compatibility
//! checks.

use crate::rational::{MapError, RationalMap};
use crate::report::CheckReport;
use crate::tree::TreePair;
use crate::treemap::{TreeMap, TreeMapError};
use crate::value::ComplexValue;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

pub mod build;
pub mod format;

/// Portrait size above which an orbit is treated as infinite.
pub const PORTRAIT_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("vertex {0} is not periodic with the requested period inside V0")]
    NotPeriodic(usize),
    #[error("vertex {0} has no rational map")]
    MissingMap(usize),
    #[error("map at vertex {vertex}: {err}")]
    Map { vertex: usize, err: MapError },
    #[error(transparent)]
    TreeMap(#[from] TreeMapError),
    #[error("portrait exceeds {PORTRAIT_CAP} points; some orbit is not finite")]
    NonFinitePortrait,
    #[error("invalid scheme: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct MarkedSphere {
    /// Adjacent edge id → marked point.
    pub markings: BTreeMap<usize, ComplexValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Marked(usize),
    Critical(u32),
    Exposed,
}

impl Label {
    pub fn encode(&self) -> String {
        match self {
            Label::Marked(e) => format!("marked:{e}"),
            Label::Critical(m) => format!("critical:{m}"),
            Label::Exposed => "exposed".into(),
        }
    }
    pub fn decode(s: &str) -> Option<Label> {
        if s == "exposed" {
            return Some(Label::Exposed);
        }
        if let Some(e) = s.strip_prefix("marked:") {
            return e.parse().ok().map(Label::Marked);
        }
        if let Some(m) = s.strip_prefix("critical:") {
            return m.parse().ok().filter(|&m: &u32| m >= 2).map(Label::Critical);
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PortraitPoint {
    pub sphere: usize,
    pub value: ComplexValue,
    pub labels: Vec<Label>,
    pub local_degree: u32,
}

impl PortraitPoint {
    pub fn is_exposed(&self) -> bool {
        self.labels.contains(&Label::Exposed)
    }
    pub fn critical(&self) -> Option<u32> {
        self.labels.iter().find_map(|l| match l {
            Label::Critical(m) => Some(*m),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct OrbitPortrait {
    pub points: Vec<PortraitPoint>,
    pub successors: BTreeMap<usize, usize>,
}

impl OrbitPortrait {
    pub fn find(&self, sphere: usize, z: &ComplexValue) -> Option<usize> {
        self.points.iter().position(|p| p.sphere == sphere && p.value.same(z))
    }

    /// Forward orbit of a point until the first repeat; the second value is
    /// the index in the returned list where the cycle starts.
    pub fn orbit(&self, start: usize) -> (Vec<usize>, Option<usize>) {
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        let mut cur = start;
        loop {
            if let Some(&i) = seen.get(&cur) {
                return (out, Some(i));
            }
            seen.insert(cur, out.len());
            out.push(cur);
            match self.successors.get(&cur) {
                Some(&n) => cur = n,
                None => return (out, None),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeMappingScheme {
    pub tree: TreePair,
    pub map: TreeMap,
    pub spheres: Vec<MarkedSphere>,
    pub maps: BTreeMap<usize, RationalMap>,
    pub portrait: OrbitPortrait,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExposedSets {
    pub exposed: Vec<usize>,
    pub exposed_critical: Vec<usize>,
    /// Cycles of exposed points containing a critical point, each starting
    /// at its least index.
    pub critical_cycles: Vec<Vec<usize>>,
}

impl TreeMappingScheme {
    pub fn marking(&self, a: usize, e: usize) -> Option<&ComplexValue> {
        self.spheres.get(a)?.markings.get(&e)
    }

    pub fn map_at(&self, a: usize) -> Result<&RationalMap, SchemeError> {
        self.maps.get(&a).ok_or(SchemeError::MissingMap(a))
    }

    pub fn apply(&self, a: usize, z: &ComplexValue) -> Result<ComplexValue, SchemeError> {
        self.map_at(a)?.eval(z).map_err(|err| SchemeError::Map { vertex: a, err })
    }

    pub fn local_degree(&self, a: usize, z: &ComplexValue) -> Result<u32, SchemeError> {
        if !self.tree.in_t0(a) {
            return Ok(1);
        }
        self.map_at(a)?.local_degree(z).map_err(|err| SchemeError::Map { vertex: a, err })
    }

    /// f^p on the sphere of v, as one reduced rational map.
    pub fn compose_cycle(&self, v: usize, p: usize) -> Result<RationalMap, SchemeError> {
        let mut acc = RationalMap::identity();
        let mut cur = v;
        for _ in 0..p {
            if !self.tree.in_t0(cur) {
                return Err(SchemeError::NotPeriodic(v));
            }
            acc = self.map_at(cur)?.compose(&acc);
            cur = self.map.image(cur)?;
        }
        if cur != v {
            return Err(SchemeError::NotPeriodic(v));
        }
        Ok(acc)
    }

    /// Every adjacent edge is marked, markings are distinct, maps and tree map
    /// are well formed.
    pub fn check_structure(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let tp = &self.tree;
        if self.spheres.len() != tp.num_vertices() {
            r.fail(format!("{} spheres for {} vertices", self.spheres.len(), tp.num_vertices()));
            return r;
        }
        for (a, s) in self.spheres.iter().enumerate() {
            let adj: BTreeSet<usize> = tp.adjacent(a).iter().map(|(e, _)| *e).collect();
            let keys: BTreeSet<usize> = s.markings.keys().copied().collect();
            if adj != keys {
                r.fail(format!("sphere {a}: markings {keys:?} do not match adjacent edges {adj:?}"));
            }
            let vals: Vec<&ComplexValue> = s.markings.values().collect();
            for i in 0..vals.len() {
                for j in i + 1..vals.len() {
                    let c = vals[i].compare(vals[j]);
                    r.numeric |= c.numeric;
                    if c.equal {
                        r.fail(format!("sphere {a}: markings {} and {} coincide", vals[i], vals[j]));
                    }
                }
            }
        }
        for a in tp.v0() {
            match self.maps.get(&a) {
                None => r.fail(format!("vertex {a}: no rational map")),
                Some(m) => {
                    if let Err(e) = m.check() {
                        r.fail(format!("vertex {a}: {e}"));
                    }
                    r.numeric |= !m.is_exact();
                }
            }
        }
        // maps outside V0 are extension witnesses and sit at Ω centers
        let centers: BTreeSet<usize> = tp.omega_components().iter().filter_map(|c| c.center).collect();
        for (a, m) in &self.maps {
            if *a >= tp.num_vertices() || !(tp.in_t0(*a) || centers.contains(a)) {
                r.fail(format!("vertex {a}: rational map given outside V0"));
            } else if !tp.in_t0(*a) {
                if let Err(e) = m.check() {
                    r.fail(format!("witness at vertex {a}: {e}"));
                }
            }
        }
        if let Err(e) = self.map.check(tp) {
            r.fail(format!("tree map: {e}"));
        }
        r
    }

    /// f_a(ψ_a(v)) = ψ_F(a)(D_aF(v)) for every T0 direction v at a ∈ V0.
    pub fn check_markings(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let tp = &self.tree;
        for a in tp.v0() {
            for &(e, _) in tp.adjacent(a) {
                if !tp.edge(e).in_t0 {
                    continue;
                }
                let res = (|| -> Result<(ComplexValue, ComplexValue), String> {
                    let z = self.marking(a, e).ok_or("missing marking")?;
                    let w = self.apply(a, z).map_err(|x| x.to_string())?;
                    let fa = self.map.image(a).map_err(|x| x.to_string())?;
                    let de = self.map.tangent_image(tp, a, e).map_err(|x| x.to_string())?;
                    let target = self.marking(fa, de).ok_or("missing target marking")?.clone();
                    Ok((w, target))
                })();
                match res {
                    Err(msg) => r.fail(format!("vertex {a}, edge {e}: {msg}")),
                    Ok((w, target)) => {
                        let c = w.compare(&target);
                        r.numeric |= c.numeric;
                        if !c.equal {
                            r.fail(format!("vertex {a}, edge {e}: image {w} but marking {target}"));
                        }
                    }
                }
            }
        }
        r
    }

    /// Local degrees at both ends of every E0 edge agree with the tree map's
    /// edge degree; vertex degrees equal the map degrees.
    pub fn check_compatible_degrees(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let tp = &self.tree;
        for e in tp.e0() {
            let ed = tp.edge(e);
            let want = self.map.edge_degree.get(&e).copied();
            for a in [ed.a, ed.b] {
                let got = self
                    .marking(a, e)
                    .ok_or_else(|| "missing marking".to_string())
                    .and_then(|z| self.local_degree(a, z).map_err(|x| x.to_string()));
                r.numeric |= self.maps.get(&a).is_some_and(|m| !m.is_exact());
                match (got, want) {
                    (Ok(d), Some(w)) if d == w => {}
                    (Ok(d), w) => r.fail(format!("edge {e} at vertex {a}: local degree {d}, edge degree {w:?}")),
                    (Err(x), _) => r.fail(format!("edge {e} at vertex {a}: {x}")),
                }
            }
        }
        for a in tp.v0() {
            if let Some(m) = self.maps.get(&a) {
                let vd = self.map.vertex_degree.get(&a).copied();
                if vd != Some(m.degree) {
                    r.fail(format!("vertex {a}: vertex degree {vd:?}, map degree {}", m.degree));
                }
            }
        }
        r
    }

    /// Labels a value on a sphere would carry.
    fn labels_for(&self, sphere: usize, z: &ComplexValue, local_degree: u32) -> Vec<Label> {
        let mut labels: Vec<Label> = self.spheres[sphere]
            .markings
            .iter()
            .filter(|(_, m)| m.same(z))
            .map(|(e, _)| Label::Marked(*e))
            .collect();
        if local_degree >= 2 {
            labels.push(Label::Critical(local_degree));
        }
        if labels.iter().all(|l| !matches!(l, Label::Marked(_))) {
            labels.push(Label::Exposed);
        }
        labels
    }

    /// Builds the portrait as the forward closure of all markings and the
    /// given critical points.
    pub fn derive_portrait(&mut self, critical: &BTreeMap<usize, Vec<ComplexValue>>) -> Result<(), SchemeError> {
        let mut seeds: Vec<(usize, ComplexValue)> = Vec::new();
        for (a, s) in self.spheres.iter().enumerate() {
            for z in s.markings.values() {
                seeds.push((a, z.clone()));
            }
            if let Some(cs) = critical.get(&a) {
                for z in cs {
                    seeds.push((a, z.clone()));
                }
            }
        }
        let mut pts: Vec<(usize, ComplexValue)> = Vec::new();
        let mut succ = BTreeMap::new();
        let find = |pts: &Vec<(usize, ComplexValue)>, a: usize, z: &ComplexValue| {
            pts.iter().position(|(b, w)| *b == a && w.same(z))
        };
        let mut queue = VecDeque::new();
        for (a, z) in seeds {
            if find(&pts, a, &z).is_none() {
                pts.push((a, z));
                queue.push_back(pts.len() - 1);
            }
        }
        while let Some(i) = queue.pop_front() {
            let (a, z) = pts[i].clone();
            if !self.tree.in_t0(a) {
                continue;
            }
            let w = self.apply(a, &z)?;
            let b = self.map.image(a)?;
            let j = match find(&pts, b, &w) {
                Some(j) => j,
                None => {
                    if pts.len() >= PORTRAIT_CAP {
                        return Err(SchemeError::NonFinitePortrait);
                    }
                    pts.push((b, w));
                    queue.push_back(pts.len() - 1);
                    pts.len() - 1
                }
            };
            succ.insert(i, j);
        }
        // canonical order: by sphere, then finite values by (re, im), then infinity
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&i, &j| {
            let key = |k: usize| {
                let z = pts[k].1.to_c64();
                (pts[k].0, z.is_none(), z.map(|c| (c.re, c.im)).unwrap_or((0.0, 0.0)))
            };
            let (a, b) = (key(i), key(j));
            (a.0, a.1).cmp(&(b.0, b.1)).then(a.2 .0.total_cmp(&b.2 .0)).then(a.2 .1.total_cmp(&b.2 .1))
        });
        let mut new_idx = vec![0; pts.len()];
        for (n, &i) in order.iter().enumerate() {
            new_idx[i] = n;
        }
        let mut points = Vec::with_capacity(pts.len());
        for &i in &order {
            let (a, z) = &pts[i];
            let ld = self.local_degree(*a, z)?;
            points.push(PortraitPoint { sphere: *a, value: z.clone(), labels: self.labels_for(*a, z, ld), local_degree: ld });
        }
        let successors = succ.into_iter().map(|(i, j)| (new_idx[i], new_idx[j])).collect();
        self.portrait = OrbitPortrait { points, successors };
        Ok(())
    }

    /// Critical points recorded in the portrait, per sphere.
    pub fn declared_critical(&self) -> BTreeMap<usize, Vec<ComplexValue>> {
        let mut out: BTreeMap<usize, Vec<ComplexValue>> = BTreeMap::new();
        for p in &self.portrait.points {
            if p.critical().is_some() {
                out.entry(p.sphere).or_default().push(p.value.clone());
            }
        }
        out
    }

    /// Verifies closure, successor values, labels, local degrees and
    /// completeness of the declared critical set.
    pub fn portrait_closure_check(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let tp = &self.tree;
        let por = &self.portrait;
        for (i, p) in por.points.iter().enumerate() {
            if p.sphere >= tp.num_vertices() {
                r.fail(format!("point {i}: sphere {} does not exist", p.sphere));
                continue;
            }
            r.numeric |= !p.value.is_exact();
            let ld = match self.local_degree(p.sphere, &p.value) {
                Ok(d) => d,
                Err(e) => {
                    r.fail(format!("point {i}: {e}"));
                    continue;
                }
            };
            if ld != p.local_degree {
                r.fail(format!("point {i}: declared local degree {}, actual {ld}", p.local_degree));
            }
            let mut want = self.labels_for(p.sphere, &p.value, ld);
            let mut have = p.labels.clone();
            want.sort();
            have.sort();
            if want != have {
                r.fail(format!("point {i}: labels {have:?}, expected {want:?}"));
            }
            match (tp.in_t0(p.sphere), por.successors.get(&i)) {
                (true, None) => r.fail(format!("point {i} on sphere {} has no successor", p.sphere)),
                (false, Some(_)) => r.fail(format!("point {i} on sphere {} outside V0 has a successor", p.sphere)),
                (true, Some(&j)) => {
                    let Some(q) = por.points.get(j) else {
                        r.fail(format!("point {i}: successor {j} does not exist"));
                        continue;
                    };
                    if self.map.image(p.sphere).ok() != Some(q.sphere) {
                        r.fail(format!("point {i}: successor lies on sphere {}, not the image sphere", q.sphere));
                    }
                    match self.apply(p.sphere, &p.value) {
                        Ok(w) => {
                            let c = w.compare(&q.value);
                            r.numeric |= c.numeric;
                            if !c.equal {
                                r.fail(format!("point {i}: image {w} differs from successor value {}", q.value));
                            }
                        }
                        Err(e) => r.fail(format!("point {i}: {e}")),
                    }
                }
                (false, None) => {}
            }
        }
        for (a, s) in self.spheres.iter().enumerate() {
            for (e, z) in &s.markings {
                if por.find(a, z).is_none() {
                    r.fail(format!("marking of edge {e} on sphere {a} missing from the portrait"));
                }
            }
        }
        for a in tp.v0() {
            let Some(m) = self.maps.get(&a) else { continue };
            let sum: u32 = por.points.iter().filter(|p| p.sphere == a).filter_map(|p| p.critical()).map(|c| c - 1).sum();
            if sum != 2 * m.degree - 2 {
                r.fail(format!("sphere {a}: declared critical multiplicities sum to {sum}, expected {}", 2 * m.degree - 2));
            }
        }
        r
    }

    pub fn exposed_sets(&self) -> ExposedSets {
        let por = &self.portrait;
        let exposed: Vec<usize> = (0..por.points.len()).filter(|&i| por.points[i].is_exposed()).collect();
        let exposed_critical: Vec<usize> =
            exposed.iter().copied().filter(|&i| por.points[i].critical().is_some()).collect();
        let mut cycles = BTreeSet::new();
        for i in 0..por.points.len() {
            let (orb, start) = por.orbit(i);
            let Some(s) = start else { continue };
            if s != 0 {
                continue;
            }
            let cyc = orb;
            if cyc.iter().all(|&j| por.points[j].is_exposed()) && cyc.iter().any(|&j| por.points[j].critical().is_some()) {
                let m = cyc.iter().enumerate().min_by_key(|(_, v)| **v).unwrap().0;
                let mut c = cyc.clone();
                c.rotate_left(m);
                cycles.insert(c);
            }
        }
        ExposedSets { exposed, exposed_critical, critical_cycles: cycles.into_iter().collect() }
    }

    /// True when the forward orbit of a portrait point stays exposed and
    /// reaches an exposed critical cycle. `skip_first` ignores the point
    /// itself.
    pub fn reaches_exposed_critical_cycle(&self, i: usize, skip_first: bool) -> bool {
        let por = &self.portrait;
        let (orb, start) = por.orbit(i);
        let Some(s) = start else { return false };
        let from = usize::from(skip_first);
        if orb.iter().skip(from).any(|&j| !por.points[j].is_exposed()) {
            return false;
        }
        if skip_first && s == 0 && !por.points[i].is_exposed() {
            return false;
        }
        orb[s..].iter().any(|&j| por.points[j].critical().is_some())
    }

    pub fn is_exact(&self) -> bool {
        self.maps.values().all(|m| m.is_exact())
            && self.spheres.iter().all(|s| s.markings.values().all(|z| z.is_exact()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::tree::Edge;

    /// One fixed vertex with f = z² and no edges.
    fn single(f: RationalMap) -> TreeMappingScheme {
        let tree = TreePair::new(vec![true], vec![]).unwrap();
        let d = f.degree;
        TreeMappingScheme {
            tree,
            map: TreeMap {
                vertex_image: BTreeMap::from([(0, 0)]),
                edge_degree: BTreeMap::new(),
                vertex_degree: BTreeMap::from([(0, d)]),
            },
            spheres: vec![MarkedSphere::default()],
            maps: BTreeMap::from([(0, f)]),
            portrait: OrbitPortrait::default(),
        }
    }

    #[test]
    fn square_portrait_is_closed() {
        let mut s = single(RationalMap::monomial(2));
        let crit = BTreeMap::from([(0, vec![ComplexValue::zero(), ComplexValue::Infinity])]);
        s.derive_portrait(&crit).unwrap();
        assert_eq!(s.portrait.points.len(), 2);
        assert!(s.portrait_closure_check().passed());
        let ex = s.exposed_sets();
        assert_eq!(ex.critical_cycles.len(), 2);
    }

    #[test]
    fn zeta8_orbit_closes_and_omission_fails() {
        let z8 = ComplexValue::approx(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
        let f = RationalMap::monomial(-3).add_constant(&z8);
        let mut s = single(f);
        let crit = BTreeMap::from([(0, vec![ComplexValue::zero(), ComplexValue::Infinity])]);
        s.derive_portrait(&crit).unwrap();
        assert_eq!(s.portrait.points.len(), 3);
        let r = s.portrait_closure_check();
        assert!(r.passed() && r.numeric);
        // drop ζ8
        let k = s.portrait.find(0, &z8).unwrap();
        s.portrait.points.remove(k);
        s.portrait.successors.retain(|a, b| *a != k && *b != k);
        assert!(!s.portrait_closure_check().passed());
    }

    #[test]
    fn compose_cycle_two_steps() {
        // A ↔ B swapped, maps z² and 1/z³
        let tree = TreePair::new(vec![true, true], vec![Edge { a: 0, b: 1, length: rat(1, 1), in_t0: false }]).unwrap();
        let s = TreeMappingScheme {
            tree,
            map: TreeMap {
                vertex_image: BTreeMap::from([(0, 1), (1, 0)]),
                edge_degree: BTreeMap::new(),
                vertex_degree: BTreeMap::from([(0, 2), (1, 3)]),
            },
            spheres: vec![MarkedSphere::default(), MarkedSphere::default()],
            maps: BTreeMap::from([(0, RationalMap::monomial(2)), (1, RationalMap::monomial(-3))]),
            portrait: OrbitPortrait::default(),
        };
        assert_eq!(s.compose_cycle(0, 2).unwrap(), RationalMap::monomial(-6));
        assert_eq!(s.compose_cycle(0, 1), Err(SchemeError::NotPeriodic(0)));
    }
}
