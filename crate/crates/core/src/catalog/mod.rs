//! The worked examples: schemes, realizing families, expected census facts
//! and the numeric checks attached to each.

pub mod schemes;

use crate::components::{census_with, Census};
use crate::numerics::{
    algebraic_limit_check, c, rescaling_check, zeta8, Family, FloatMap, LimitReport, Metric, Moebius, NumericError,
    Region,
};
use crate::poly::Poly;
use crate::scheme::TreeMappingScheme;
use crate::surgery;
use crate::validate::reduce::{check_irreducible, reduce_to_irreducible};
use crate::validate::{check_hpcf, ValidateOptions, ValidationReport};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub const NAMES: [&str; 9] = [
    "degenerate",
    "mcmullen",
    "basilica-cantor",
    "cubic-two-cycle",
    "quadruply",
    "buried-sierpinski",
    "cantor-z3",
    "surgery-k1",
    "godillon-3",
];

/// Interior orbits are enumerated up to this period in catalog runs.
pub const INTERIOR_PERIOD: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expected {
    pub complex_cycle_count: usize,
    /// Degrees of the period-one models, sorted.
    pub fixed_model_degrees: Vec<u64>,
    /// Cycles of exposed points containing a critical point.
    pub exposed_critical_cycles: usize,
    pub description: &'static str,
}

#[derive(Clone, Debug)]
pub enum CheckKind {
    Limit { regions: Vec<Region>, metric: Metric },
    /// M(n)(w) = n^alpha · w.
    Rescale { alpha: f64, period: usize, region: Region },
}

#[derive(Clone, Debug)]
pub struct NumericCheck {
    pub id: &'static str,
    pub kind: CheckKind,
    pub limit: FloatMap,
    pub holes: Vec<Complex64>,
    pub n_list: Vec<f64>,
    pub bound: f64,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub scheme: TreeMappingScheme,
    pub family: Option<Family>,
    pub expected: Expected,
    pub numeric_checks: Vec<NumericCheck>,
}

fn fm(num: &[Complex64], den: &[Complex64]) -> FloatMap {
    FloatMap::new(Poly::new(num.to_vec()), Poly::new(den.to_vec()))
}

fn r(x: f64) -> Complex64 {
    c(x, 0.0)
}

fn z0() -> Complex64 {
    c(0.0, 0.0)
}

fn limit(id: &'static str, g: FloatMap, holes: Vec<Complex64>, regions: Vec<Region>, bound: f64) -> NumericCheck {
    NumericCheck {
        id,
        kind: CheckKind::Limit { regions, metric: Metric::Chordal },
        limit: g,
        holes,
        n_list: vec![1e3, 1e4, 1e5, 1e6],
        bound,
    }
}

fn expected(cc: usize, fixed: &[u64], ecc: usize, description: &'static str) -> Expected {
    Expected { complex_cycle_count: cc, fixed_model_degrees: fixed.to_vec(), exposed_critical_cycles: ecc, description }
}

pub fn list() -> Vec<&'static str> {
    NAMES.to_vec()
}

pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
    let annulus = |a: f64, b: f64| Region::annulus(z0(), a, b);
    let e = match name {
        "degenerate" => CatalogEntry {
            name: "degenerate",
            scheme: schemes::degenerate(),
            family: Some(Family::Degenerate),
            expected: expected(1, &[2], 2, "basilica component at A; exposed critical cycles {-1,-2} and {inf}"),
            numeric_checks: vec![limit("limit", fm(&[r(-1.0), r(2.0), r(1.0)], &[r(1.0)]), vec![z0()], vec![annulus(1.0, 2.0)], 1e-5)],
        },
        "mcmullen" => CatalogEntry {
            name: "mcmullen",
            scheme: schemes::mcmullen(),
            family: Some(Family::McMullen),
            expected: expected(0, &[2, 3], 1, "Cantor set of circles; exposed critical fixed point inf at A"),
            numeric_checks: vec![
                limit("limit", fm(&[z0(), z0(), r(1.0)], &[r(1.0)]), vec![z0()], vec![annulus(1.0, 2.0)], 1e-5),
                NumericCheck {
                    id: "fixed",
                    kind: CheckKind::Rescale { alpha: 0.0, period: 1, region: annulus(1.0, 2.0) },
                    limit: fm(&[z0(), z0(), r(1.0)], &[r(1.0)]),
                    holes: vec![z0()],
                    n_list: vec![1e2, 1e4, 1e6],
                    bound: 1e-5,
                },
            ],
        },
        "basilica-cantor" => CatalogEntry {
            name: "basilica-cantor",
            scheme: schemes::basilica_cantor(),
            family: Some(Family::BasilicaCantor),
            expected: expected(1, &[2, 3], 1, "nested self-mating of the basilica; exposed critical cycle {inf, 1}"),
            numeric_checks: vec![limit(
                "limit",
                fm(&[z0(), z0(), r(1.0)], &[r(-1.0), z0(), r(1.0)]),
                vec![z0(), r(1.0), r(-1.0)],
                vec![annulus(1.5, 3.0)],
                1e-5,
            )],
        },
        "cubic-two-cycle" => CatalogEntry {
            name: "cubic-two-cycle",
            scheme: schemes::cubic_two_cycle(),
            family: Some(Family::CubicTwoCycle),
            expected: expected(1, &[3, 3], 2, "two exposed critical fixed points, inf and sqrt(2) i at A"),
            numeric_checks: vec![limit(
                "limit",
                fm(&[z0(), z0(), c(0.0, -3.0 / 2f64.sqrt()), r(1.0)], &[r(1.0)]),
                vec![z0()],
                vec![annulus(1.0, 2.0)],
                1e-5,
            )],
        },
        "quadruply" => CatalogEntry {
            name: "quadruply",
            scheme: schemes::quadruply(),
            family: Some(Family::Quadruply),
            expected: expected(0, &[3, 3], 1, "quadruply connected critical gap; exposed critical fixed point inf at A0"),
            numeric_checks: vec![limit("limit", fm(&[z0(), z0(), z0(), r(1.0)], &[r(1.0)]), vec![z0()], vec![annulus(1.0, 2.0)], 1e-5)],
        },
        "buried-sierpinski" => CatalogEntry {
            name: "buried-sierpinski",
            scheme: schemes::buried_sierpinski(),
            family: Some(Family::BuriedSierpinski),
            expected: expected(1, &[4, 4], 1, "buried Sierpinski carpet component at A"),
            numeric_checks: vec![limit(
                "limit",
                fm(&[z0(), z0(), r(16.0)], &[r(16.0), z0(), z0(), z0(), r(-1.0)]),
                vec![z0(), r(2.0), r(-2.0), c(0.0, 2.0), c(0.0, -2.0)],
                vec![annulus(0.5, 1.5)],
                1e-4,
            )],
        },
        "cantor-z3" => CatalogEntry {
            name: "cantor-z3",
            scheme: schemes::cantor_z3(),
            family: Some(Family::CantorZ3),
            expected: expected(0, &[3, 3], 1, "Cantor set of circles, base of the tower"),
            numeric_checks: vec![limit("limit", fm(&[z0(), z0(), z0(), r(1.0)], &[r(1.0)]), vec![z0()], vec![annulus(1.0, 2.0)], 1e-5)],
        },
        "surgery-k1" => CatalogEntry {
            name: "surgery-k1",
            scheme: surgery::cantor_tower(1).expect("tower level 1").scheme,
            family: Some(Family::SurgeryK1),
            expected: expected(1, &[3, 3], 1, "A0 carries 1/z^3 + zeta8 with critical orbit 0 -> inf -> zeta8 -> 0"),
            numeric_checks: vec![
                NumericCheck {
                    n_list: vec![1e4, 1e6, 1e8],
                    ..limit("limit", fm(&[z0(), z0(), z0(), r(1.0)], &[r(1.0)]), vec![z0()], vec![annulus(1.0, 2.0)], 2e-2)
                },
                NumericCheck {
                    id: "fixed",
                    kind: CheckKind::Rescale { alpha: -0.25, period: 1, region: annulus(0.5, 2.0) },
                    limit: fm(&[r(1.0), z0(), z0(), zeta8()], &[z0(), z0(), z0(), r(1.0)]),
                    holes: vec![z0()],
                    n_list: vec![1e4, 1e6, 1e8],
                    bound: 1e-3,
                },
            ],
        },
        "godillon-3" => CatalogEntry {
            name: "godillon-3",
            scheme: reduce_to_irreducible(&surgery::godillon_scheme(3)).expect("reduction"),
            family: Some(Family::Godillon3),
            expected: expected(1, &[2], 1, "buried component with model 1/(z-1)^2, N = 3"),
            numeric_checks: vec![NumericCheck {
                id: "limit",
                kind: CheckKind::Limit {
                    regions: vec![Region::disk(r(1.0), 1.0).excluding(z0(), 0.1)],
                    metric: Metric::Euclidean,
                },
                limit: fm(&[r(1.0)], &[r(1.0), r(-2.0), r(1.0)]),
                holes: vec![z0()],
                n_list: vec![1e3, 1e4, 1e5, 1e6],
                bound: 2e-5,
            }],
        },
        other => return Err(CatalogError::UnknownEntry(other.to_string())),
    };
    Ok(e)
}

impl NumericCheck {
    pub fn run(&self, family: Family) -> Result<LimitReport, NumericError> {
        let f = |n: f64, z: Complex64| family.eval(n, z);
        let g = |z: Complex64| self.limit.eval(z);
        match &self.kind {
            CheckKind::Limit { regions, metric } => {
                algebraic_limit_check(&f, &g, &self.holes, regions, &self.n_list, self.bound, *metric)
            }
            CheckKind::Rescale { alpha, period, region } => {
                let alpha = *alpha;
                let m = move |n: f64| Moebius::scaling(c(n.powf(alpha), 0.0));
                rescaling_check(&f, &m, *period, &g, region, &self.holes, &self.n_list, self.bound)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub pass: bool,
    pub report: Option<LimitReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub validation: ValidationReport,
    pub irreducible: ValidationReport,
    pub complex_cycle_count: usize,
    pub fixed_model_degrees: Vec<u64>,
    pub exposed_critical_cycles: usize,
    pub bound_slack: i64,
    pub n_f: usize,
    /// Mismatches against the expected facts.
    pub diffs: Vec<String>,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

fn fixed_degrees(c: &Census) -> Vec<u64> {
    let mut v: Vec<u64> = c.models.iter().filter(|m| m.period == 1).map(|m| m.model_degree).collect();
    v.sort();
    v
}

pub fn verify_entry(e: &CatalogEntry) -> EntryReport {
    let s = &e.scheme;
    let validation = check_hpcf(s, &ValidateOptions::default());
    let irreducible = check_irreducible(s);
    let mut diffs = Vec::new();
    let v0 = s.tree.v0().len();
    let (cc, fixed, slack, n_f) = match census_with(s, v0, INTERIOR_PERIOD) {
        Ok(c) => (c.complex_cycle_count(), fixed_degrees(&c), c.bound_slack, c.fatou.n_f),
        Err(err) => {
            diffs.push(format!("census failed: {err}"));
            (0, vec![], -1, 0)
        }
    };
    let ecc = s.exposed_sets().critical_cycles.len();
    if cc != e.expected.complex_cycle_count {
        diffs.push(format!("complex_cycle_count: expected {}, census {cc}", e.expected.complex_cycle_count));
    }
    if fixed != e.expected.fixed_model_degrees {
        diffs.push(format!("fixed_model_degrees: expected {:?}, census {fixed:?}", e.expected.fixed_model_degrees));
    }
    if ecc != e.expected.exposed_critical_cycles {
        diffs.push(format!("exposed_critical_cycles: expected {}, scheme {ecc}", e.expected.exposed_critical_cycles));
    }
    if slack < 0 {
        diffs.push(format!("bound violated: slack {slack}"));
    }
    let checks: Vec<CheckOutcome> = match e.family {
        None => vec![],
        Some(fam) => e
            .numeric_checks
            .iter()
            .map(|ch| match ch.run(fam) {
                Ok(rep) => CheckOutcome { id: ch.id.into(), pass: rep.pass, report: Some(rep), error: None },
                Err(err) => CheckOutcome { id: ch.id.into(), pass: false, report: None, error: Some(err.to_string()) },
            })
            .collect(),
    };
    let pass = validation.pass() && irreducible.pass() && diffs.is_empty() && checks.iter().all(|c| c.pass);
    EntryReport {
        name: e.name.into(),
        validation,
        irreducible,
        complex_cycle_count: cc,
        fixed_model_degrees: fixed,
        exposed_critical_cycles: ecc,
        bound_slack: slack,
        n_f,
        diffs,
        checks,
        pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    pub pass: bool,
}

impl CatalogReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{:<18} {}  complex={} fixed={:?} ecc={} N_f={} slack={}\n",
                e.name,
                if e.pass { "PASS" } else { "FAIL" },
                e.complex_cycle_count,
                e.fixed_model_degrees,
                e.exposed_critical_cycles,
                e.n_f,
                e.bound_slack
            ));
            for f in e.validation.entries.iter().chain(&e.irreducible.entries) {
                if !f.status.ok() {
                    out.push_str(&format!("    condition {} failed: {}\n", f.condition, f.witnesses.join("; ")));
                }
            }
            for d in &e.diffs {
                out.push_str(&format!("    census diff: {d}\n"));
            }
            for ch in &e.checks {
                if !ch.pass {
                    let why = ch.error.clone().or_else(|| ch.report.as_ref().map(|r| r.notes.join("; "))).unwrap_or_default();
                    out.push_str(&format!("    check {} failed: {why}\n", ch.id));
                }
            }
        }
        out
    }
}

pub fn verify_entries(entries: &[CatalogEntry]) -> CatalogReport {
    let reports: Vec<EntryReport> = entries.par_iter().map(verify_entry).collect();
    let pass = reports.iter().all(|r| r.pass);
    CatalogReport { entries: reports, pass }
}

pub fn verify_all() -> CatalogReport {
    let entries: Vec<CatalogEntry> = NAMES.iter().map(|n| get(n).expect("known entry")).collect();
    verify_entries(&entries)
}
