//! The six hyperbolic post-critical finiteness conditions, irreducibility and
//! reduction.

pub mod hurwitz;
pub mod reduce;

use crate::report::{CheckReport, Status};
use crate::scheme::{Label, TreeMappingScheme};
use crate::tree::OmegaComponent;
use crate::treemap::{Extension, TreeMapError};
use hurwitz::{hurwitz_realizable, Hurwitz, HurwitzData};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub mode: Mode,
    pub hurwitz_bound: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { mode: Mode::Strict, hurwitz_bound: hurwitz::DEFAULT_BOUND }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub condition: String,
    pub status: Status,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl Entry {
    pub fn from_check(condition: &str, r: CheckReport) -> Self {
        Entry { condition: condition.into(), status: r.status(), witnesses: r.witnesses, notes: r.notes }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<Entry>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.status.ok())
    }
    pub fn get(&self, condition: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.condition == condition)
    }
    pub fn failed(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| !e.status.ok()).map(|e| e.condition.as_str()).collect()
    }
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{:<14} {}", e.condition, e.status);
            for w in &e.witnesses {
                let _ = writeln!(out, "    witness: {w}");
            }
            for n in &e.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        out
    }
}

/// Ω components with the candidate extension of each.
pub fn extensions(s: &TreeMappingScheme) -> (Vec<OmegaComponent>, Vec<Result<Extension, TreeMapError>>) {
    let comps = s.tree.omega_components();
    let degree_at = |a: usize, e: usize| s.marking(a, e).and_then(|z| s.local_degree(a, z).ok());
    let ext = (0..comps.len()).map(|u| s.map.extend_on_component(&s.tree, &comps, u, &degree_at)).collect();
    (comps, ext)
}

/// The edge of U at the boundary vertex a.
pub fn boundary_edge(s: &TreeMappingScheme, c: &OmegaComponent, a: usize) -> Option<usize> {
    s.tree.adjacent(a).iter().map(|(e, _)| *e).find(|e| c.edges.contains(e))
}

pub fn check_hpcf(s: &TreeMappingScheme, opts: &ValidateOptions) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let steps: [(&str, &dyn Fn() -> CheckReport); 6] = [
        ("i", &|| condition_i(s)),
        ("ii", &|| condition_ii(s)),
        ("iii", &|| condition_iii(s, opts.hurwitz_bound)),
        ("iv", &|| condition_iv(s)),
        ("v", &|| condition_v(s)),
        ("vi", &|| condition_vi(s)),
    ];
    for (id, f) in steps {
        let e = Entry::from_check(id, f());
        let failed = !e.status.ok();
        rep.entries.push(e);
        if failed && opts.mode == Mode::Lenient {
            break;
        }
    }
    rep
}

/// Structure, marking compatibility, compatible local degrees and the
/// degree-function inequalities.
pub fn condition_i(s: &TreeMappingScheme) -> CheckReport {
    let mut r = s.check_structure();
    if !r.passed() {
        return r;
    }
    r.merge(s.check_markings());
    r.merge(s.check_compatible_degrees());
    match s.map.check_degree_function(&s.tree) {
        Ok(d) => {
            for v in d.vertices {
                if !v.ineq_1 {
                    r.fail(format!("vertex {}: inequality 2deg-2 >= sum(deg(e)-1) fails", v.vertex));
                }
                if !v.ineq_2 {
                    r.fail(format!("vertex {}: tangent-direction degree inequality fails", v.vertex));
                }
            }
        }
        Err(e) => r.fail(e.to_string()),
    }
    r
}

pub fn condition_ii(s: &TreeMappingScheme) -> CheckReport {
    let mut r = CheckReport::new();
    match s.map.is_geometric(&s.tree) {
        Ok(g) => {
            for (e, got, want) in g.offending {
                r.fail(format!("edge {e}: image length {got}, expected {want}"));
            }
        }
        Err(e) => r.fail(e.to_string()),
    }
    r
}

/// Branch data of a case-A extension: one partition per boundary vertex of
/// the target, padded with simple branch points.
pub fn case_a_branch_data(s: &TreeMappingScheme, degrees: &[(usize, usize, u32)], n: u32) -> Option<HurwitzData> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, _, d) in degrees {
        groups.entry(s.map.image(*a).ok()?).or_default().push(*d as usize);
    }
    let n = n as usize;
    let mut data: Vec<Vec<usize>> = groups.into_values().collect();
    let used: usize = data.iter().map(|p| n - p.len()).sum();
    if used > 2 * n - 2 {
        return None;
    }
    for _ in 0..(2 * n - 2 - used) {
        let mut p = vec![2];
        p.extend(std::iter::repeat(1).take(n - 2));
        data.push(p);
    }
    Some(HurwitzData { degree: n, branch_data: data })
}

pub fn condition_iii(s: &TreeMappingScheme, bound: usize) -> CheckReport {
    let mut r = CheckReport::new();
    let (comps, exts) = extensions(s);
    for (u, (c, ext)) in comps.iter().zip(&exts).enumerate() {
        match ext {
            Err(e) => r.fail(format!("component {u}: {e}")),
            Ok(Extension::CaseB { vertex }) => {
                if !s.tree.in_t0(*vertex) {
                    r.fail(format!("component {u}: collapses to vertex {vertex} outside V0"));
                    continue;
                }
                let mut image = None;
                for &a in &c.boundary {
                    let Some(e) = boundary_edge(s, c, a) else { continue };
                    let Some(z) = s.marking(a, e) else {
                        r.fail(format!("component {u}: vertex {a} has no marking for edge {e}"));
                        continue;
                    };
                    match s.apply(a, z) {
                        Err(err) => r.fail(format!("component {u}: {err}")),
                        Ok(w) => match &image {
                            None => image = Some(w),
                            Some(w0) => {
                                let cmp = w0.compare(&w);
                                r.numeric |= cmp.numeric;
                                if !cmp.equal {
                                    r.fail(format!("component {u}: boundary images {w0} and {w} differ"));
                                }
                            }
                        },
                    }
                }
                if let Some(w) = image {
                    for m in s.spheres[*vertex].markings.values() {
                        let cmp = m.compare(&w);
                        r.numeric |= cmp.numeric;
                        if cmp.equal {
                            r.fail(format!("component {u}: image point {w} on sphere {vertex} is marked"));
                        }
                    }
                }
            }
            Ok(Extension::CaseA { center_image, degrees, center_degree, .. }) => {
                let p = c.center.unwrap();
                let Some(h) = case_a_branch_data(s, degrees, *center_degree) else {
                    r.fail(format!("component {u}: branching exceeds 2d-2"));
                    continue;
                };
                match hurwitz_realizable(&h, bound) {
                    Hurwitz::NotRealizable(why) => {
                        r.fail(format!("component {u}: branch data {:?} not realizable ({why})", h.branch_data))
                    }
                    Hurwitz::SearchExceeded => {
                        r.fail(format!("component {u}: Hurwitz search exceeded degree bound {bound}"))
                    }
                    Hurwitz::Realizable(_) => match s.maps.get(&p) {
                        None => {
                            r.necessary_only = true;
                            r.note(format!("component {u}: branch data realizable, no witness map at center {p}"));
                        }
                        Some(wmap) => {
                            r.numeric |= !wmap.is_exact();
                            if wmap.degree != *center_degree {
                                r.fail(format!("component {u}: witness degree {} but extension degree {center_degree}", wmap.degree));
                            }
                            for (a, e, d) in degrees {
                                let fa = s.map.image(*a).unwrap();
                                let dir = s.tree.vertex_path(*center_image, fa)[0].edge;
                                let (Some(z), Some(t)) = (s.marking(p, *e), s.marking(*center_image, dir)) else {
                                    r.fail(format!("component {u}: missing marking for edge {e}"));
                                    continue;
                                };
                                match (wmap.eval(z), wmap.local_degree(z)) {
                                    (Ok(w), Ok(ld)) => {
                                        let cmp = w.compare(t);
                                        r.numeric |= cmp.numeric;
                                        if !cmp.equal || ld != *d {
                                            r.fail(format!("component {u}: witness sends {z} to {w} with degree {ld}; expected {t} with degree {d}"));
                                        }
                                    }
                                    (Err(x), _) | (_, Err(x)) => r.fail(format!("component {u}: witness: {x}")),
                                }
                            }
                        }
                    },
                }
            }
        }
    }
    let col = s.map.omega_orbit_eventually_collapses(&exts);
    for cyc in col.cycles {
        r.fail(format!("components {cyc:?} form a cycle that never collapses"));
    }
    r
}

pub fn condition_iv(s: &TreeMappingScheme) -> CheckReport {
    let mut r = CheckReport::new();
    let ex = s.exposed_sets();
    for &i in &ex.exposed_critical {
        if !s.reaches_exposed_critical_cycle(i, false) {
            let p = &s.portrait.points[i];
            r.fail(format!("exposed critical point {} on sphere {} does not reach an exposed critical cycle", p.value, p.sphere));
        }
    }
    r
}

/// Orbit of z_a: Ω markings first, then exposed points ending in an exposed
/// critical cycle.
fn omega_orbit_ok(s: &TreeMappingScheme, i: usize, omega_edges: &BTreeSet<usize>) -> bool {
    let por = &s.portrait;
    let (orb, start) = por.orbit(i);
    let Some(st) = start else { return false };
    let is_omega_marking =
        |j: usize| por.points[j].labels.iter().any(|l| matches!(l, Label::Marked(e) if omega_edges.contains(e)));
    let mut k = 0;
    while k < orb.len() && is_omega_marking(orb[k]) {
        k += 1;
    }
    k >= 1
        && k <= st
        && orb[k..].iter().all(|&j| por.points[j].is_exposed())
        && orb[st..].iter().any(|&j| por.points[j].critical().is_some())
}

/// Portrait verification, then the orbit condition for every z_a.
pub fn condition_v(s: &TreeMappingScheme) -> CheckReport {
    let mut r = s.portrait_closure_check();
    if !r.passed() {
        return r;
    }
    let comps = s.tree.omega_components();
    let omega_edges: BTreeSet<usize> = comps.iter().flat_map(|c| c.edges.iter().copied()).collect();
    for (u, c) in comps.iter().enumerate() {
        for &a in &c.boundary {
            let Some(e) = boundary_edge(s, c, a) else { continue };
            let Some(i) = s.marking(a, e).and_then(|z| s.portrait.find(a, z)) else {
                r.fail(format!("component {u}: marking at vertex {a} missing from portrait"));
                continue;
            };
            if !omega_orbit_ok(s, i, &omega_edges) {
                r.fail(format!("component {u}: orbit of the marking at vertex {a} is not eventually an exposed critical cycle"));
            }
        }
    }
    r
}

pub fn condition_vi(s: &TreeMappingScheme) -> CheckReport {
    let mut r = CheckReport::new();
    match s.map.escape_check(&s.tree) {
        Ok(e) => {
            for t in e.trapped {
                r.fail(format!("edges {t:?} never leave T0"));
            }
            if !e.pass && r.passed() {
                r.fail("some edge never leaves T0".to_string());
            }
        }
        Err(e) => r.fail(e.to_string()),
    }
    r
}

/// A periodic vertex exists, and every critical orbit on a periodic sphere
/// ends in a cycle containing a critical point.
pub fn check_first_return_consequences(s: &TreeMappingScheme) -> CheckReport {
    let mut r = CheckReport::new();
    let mut periodic = BTreeSet::new();
    for v in s.tree.v0() {
        if s.map.vertex_cycle(&s.tree, v).is_some() {
            periodic.insert(v);
        }
    }
    if periodic.is_empty() {
        r.fail("no periodic vertex: the non-escaping set would be empty");
    }
    let por = &s.portrait;
    for (i, p) in por.points.iter().enumerate() {
        if !periodic.contains(&p.sphere) || p.critical().is_none() {
            continue;
        }
        let (orb, start) = por.orbit(i);
        let ok = start.is_some_and(|st| orb[st..].iter().any(|&j| por.points[j].critical().is_some()));
        if !ok {
            r.fail(format!("critical point {} on periodic sphere {} is not attracted by a superattracting cycle", p.value, p.sphere));
        }
    }
    r
}
