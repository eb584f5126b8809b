//! Periodic Julia components: census, local models, post-critical counts,
//! the Fatou count and the bound Σ(N − 2) ≤ N_f − 2.

use crate::numerics::roots::critical_points;
use crate::numerics::{chordal, FloatMap};
use crate::rational::RationalMap;
use crate::scheme::{SchemeError, TreeMappingScheme};
use crate::tree::TreePoint;
use crate::treemap::Extension;
use crate::validate::extensions;
use crate::validate::reduce::irreducible_sets;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    VertexModel,
    JordanModel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JuliaComponentModel {
    pub point: TreePoint,
    pub period: usize,
    pub kind: ModelKind,
    pub model_degree: u64,
    /// None when the composed map was not formed (degree above the cap).
    pub model: Option<RationalMap>,
    pub n: usize,
    pub complex_type: bool,
    /// Vertex cycle, or the interior multiplier.
    pub cycle: Vec<usize>,
    pub multiplier: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    pub max_period: usize,
    pub interior_max_period: usize,
    pub models: Vec<JuliaComponentModel>,
    pub fatou: FatouCount,
    pub bound_slack: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FatouCount {
    pub n_f: usize,
    pub exposed_points: usize,
    pub components: usize,
    /// Pairs of critical gap components whose forward orbits meet.
    pub merges: Vec<(usize, usize)>,
}

/// Composed first-return maps are formed only up to this degree.
pub const MODEL_DEGREE_CAP: u64 = 81;

/// z^e for positive multipliers, z^(−e) for negative ones.
pub fn jordan_model(multiplier: &BigInt) -> RationalMap {
    let e = multiplier.abs().to_i64().expect("multiplier fits i64");
    RationalMap::monomial(if multiplier.is_negative() { -e } else { e })
}

pub fn local_model(s: &TreeMappingScheme, m: &JuliaComponentModel) -> Result<RationalMap, SchemeError> {
    match (m.kind, &m.multiplier) {
        (ModelKind::JordanModel, Some(k)) => Ok(jordan_model(k)),
        _ => s.compose_cycle(m.cycle[0], m.period),
    }
}

/// N for the first return at v, read off the portrait: the distinct points on
/// the sphere of v reached in at least one step from a critical point on any
/// sphere of the cycle.
pub fn post_critical_count(s: &TreeMappingScheme, cycle: &[usize]) -> usize {
    let por = &s.portrait;
    let v = cycle[0];
    let on_cycle: BTreeSet<usize> = cycle.iter().copied().collect();
    let mut hit = BTreeSet::new();
    for (i, p) in por.points.iter().enumerate() {
        if !on_cycle.contains(&p.sphere) || p.critical().is_none() {
            continue;
        }
        let mut seen = BTreeSet::new();
        let mut cur = por.successors.get(&i).copied();
        while let Some(j) = cur {
            if !seen.insert(j) {
                break;
            }
            if por.points[j].sphere == v {
                hit.insert(j);
            }
            cur = por.successors.get(&j).copied();
        }
    }
    hit.len()
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ComponentsError {
    #[error("critical orbit of the model is not finite")]
    NonFinitePortrait,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// N by direct float iteration of the model's critical points.
pub fn post_critical_count_numeric(model: &RationalMap) -> Result<usize, ComponentsError> {
    const TOL: f64 = 1e-7;
    let f = FloatMap::from_rational(model);
    let crit = critical_points(&f).map_err(|_| ComponentsError::NonFinitePortrait)?;
    let mut pts: Vec<Complex64> = Vec::new();
    for c in crit {
        let mut z = f.eval(c);
        let mut closed = false;
        for _ in 0..256 {
            if pts.iter().any(|p| chordal(*p, z) < TOL) {
                closed = true;
                break;
            }
            pts.push(z);
            z = f.eval(z);
        }
        if !closed {
            return Err(ComponentsError::NonFinitePortrait);
        }
    }
    Ok(pts.len())
}

/// N_f: exposed points among the forward images of the exposed critical
/// points and of the collapse points of critical gaps in the forward orbits
/// of critical gaps, plus the number of gaps in those forward orbits.
pub fn fatou_count(s: &TreeMappingScheme) -> FatouCount {
    let por = &s.portrait;
    let sets = irreducible_sets(s);
    let (comps, exts) = extensions(s);
    let next = |u: usize| match &exts[u] {
        Ok(Extension::CaseA { target, .. }) => Some(*target),
        _ => None,
    };
    let mut orbits: Vec<BTreeSet<usize>> = Vec::new();
    for &u in &sets.critical {
        let mut o = BTreeSet::new();
        let mut cur = Some(u);
        while let Some(c) = cur {
            if !o.insert(c) {
                break;
            }
            cur = next(c);
        }
        orbits.push(o);
    }
    let mut merges = Vec::new();
    for i in 0..orbits.len() {
        for j in i + 1..orbits.len() {
            if !orbits[i].is_disjoint(&orbits[j]) {
                merges.push((sets.critical[i], sets.critical[j]));
            }
        }
    }
    let all: BTreeSet<usize> = orbits.iter().flatten().copied().collect();
    let mut seeds: Vec<usize> = Vec::new();
    let mut counted: BTreeSet<usize> = BTreeSet::new();
    for &i in &s.exposed_sets().exposed_critical {
        if let Some(&j) = por.successors.get(&i) {
            seeds.push(j);
        }
    }
    for &u in &all {
        if let Ok(Extension::CaseB { .. }) = &exts[u] {
            for &a in &comps[u].boundary {
                let e = crate::validate::boundary_edge(s, &comps[u], a);
                let idx = e.and_then(|e| s.marking(a, e)).and_then(|z| por.find(a, z));
                if let Some(&j) = idx.and_then(|i| por.successors.get(&i)) {
                    seeds.push(j);
                }
            }
        }
    }
    for j in seeds {
        let (orb, _) = por.orbit(j);
        counted.extend(orb.into_iter().filter(|&k| por.points[k].is_exposed()));
    }
    let exposed_points = counted.len();
    FatouCount { n_f: exposed_points + all.len(), exposed_points, components: all.len(), merges }
}

/// Periodic components of period ≤ max_period. Vertex cycles are found up to
/// max_period; interior orbits, all of Jordan type, up to
/// interior_max_period.
pub fn census_with(
    s: &TreeMappingScheme,
    max_period: usize,
    interior_max_period: usize,
) -> Result<Census, ComponentsError> {
    let mut models = Vec::new();
    let mut seen = BTreeSet::new();
    for v in s.tree.v0() {
        let Some(cyc) = s.map.vertex_cycle(&s.tree, v) else { continue };
        let min = *cyc.iter().min().unwrap();
        if cyc.len() > max_period || !seen.insert(min) {
            continue;
        }
        let start = cyc.iter().position(|&x| x == min).unwrap();
        let mut cycle = cyc.clone();
        cycle.rotate_left(start);
        let degree: u64 = cycle.iter().map(|&x| s.map.vertex_deg(x) as u64).product();
        let model = if degree <= MODEL_DEGREE_CAP { Some(s.compose_cycle(min, cycle.len())?) } else { None };
        let n = post_critical_count(s, &cycle);
        models.push(JuliaComponentModel {
            point: TreePoint::Vertex(min),
            period: cycle.len(),
            kind: ModelKind::VertexModel,
            model_degree: degree,
            model,
            n,
            complex_type: n >= 3,
            cycle,
            multiplier: None,
        });
    }
    for p in 1..=interior_max_period.min(max_period) {
        let pp = s.map.periodic_points(&s.tree, p).map_err(SchemeError::from)?;
        for o in pp.orbits {
            let degree = o.multiplier.abs().to_u64().unwrap_or(u64::MAX);
            models.push(JuliaComponentModel {
                point: o.point.clone(),
                period: p,
                kind: ModelKind::JordanModel,
                model_degree: degree,
                model: Some(jordan_model(&o.multiplier)),
                n: 2,
                complex_type: false,
                cycle: vec![],
                multiplier: Some(o.multiplier),
            });
        }
    }
    models.sort_by(|a, b| (a.period, &a.point).cmp(&(b.period, &b.point)));
    let fatou = fatou_count(s);
    let lhs: i64 = models.iter().map(|m| m.n as i64 - 2).sum();
    let bound_slack = (fatou.n_f as i64 - 2) - lhs;
    Ok(Census { max_period, interior_max_period, models, fatou, bound_slack })
}

pub fn census(s: &TreeMappingScheme, max_period: usize) -> Result<Census, ComponentsError> {
    census_with(s, max_period, max_period)
}

/// Σ(N − 2) ≤ N_f − 2, with the slack.
pub fn verify_bound(c: &Census) -> (bool, i64) {
    (c.bound_slack >= 0, c.bound_slack)
}

fn point_text(p: &TreePoint) -> String {
    match p {
        TreePoint::Vertex(v) => format!("v{v}"),
        TreePoint::Interior { edge, offset } => format!("e{edge}+{}", crate::arith::fmt_rat(offset)),
    }
}

impl Census {
    pub fn complex_cycle_count(&self) -> usize {
        self.models.iter().filter(|m| m.complex_type).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let models: Vec<serde_json::Value> = self
            .models
            .iter()
            .map(|m| {
                serde_json::json!({
                    "point": point_text(&m.point),
                    "period": m.period,
                    "kind": m.kind,
                    "model_degree": m.model_degree,
                    "N": m.n,
                    "complex_type": m.complex_type,
                })
            })
            .collect();
        serde_json::json!({
            "max_period": self.max_period,
            "interior_max_period": self.interior_max_period,
            "models": models,
            "complex_cycles": self.complex_cycle_count(),
            "N_f": self.fatou.n_f,
            "fatou": self.fatou,
            "bound_slack": self.bound_slack,
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<14} {:>6} {:<14} {:>8} {:>4} {:>8}", "point", "period", "kind", "degree", "N", "complex");
        for m in &self.models {
            let kind = match m.kind {
                ModelKind::VertexModel => "vertex",
                ModelKind::JordanModel => "jordan",
            };
            let _ = writeln!(
                out,
                "{:<14} {:>6} {:<14} {:>8} {:>4} {:>8}",
                point_text(&m.point),
                m.period,
                kind,
                m.model_degree,
                m.n,
                m.complex_type
            );
        }
        let _ = writeln!(out, "complex cycles: {}", self.complex_cycle_count());
        let _ = writeln!(
            out,
            "N_f = {} ({} exposed points, {} gaps); slack {}",
            self.fatou.n_f, self.fatou.exposed_points, self.fatou.components, self.bound_slack
        );
        for (a, b) in &self.fatou.merges {
            let _ = writeln!(out, "note: orbits of gaps {a} and {b} merge");
        }
        out
    }
}

/// Vertex cycles by period, for quick lookups.
pub fn vertex_cycles(s: &TreeMappingScheme) -> BTreeMap<usize, Vec<Vec<usize>>> {
    let mut out: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for v in s.tree.v0() {
        if let Some(c) = s.map.vertex_cycle(&s.tree, v) {
            if c.iter().min() == Some(&v) {
                out.entry(c.len()).or_default().push(c);
            }
        }
    }
    out
}
