//! Polynomial roots, critical points and attracting cycles.

use super::{c, chordal, is_inf, FloatMap, NumericError, INF};
use crate::poly::Poly;
use num_complex::Complex64;
use serde::Serialize;

fn horner2(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let (mut v, mut d) = (c(0.0, 0.0), c(0.0, 0.0));
    for a in p.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

/// All roots of p by the Aberth–Ehrlich iteration. The residual
/// |p(z)| / Σ|a_i||z|^i of each root must end below 1e−10.
pub fn poly_roots(p: &Poly<Complex64>) -> Result<Vec<Complex64>, NumericError> {
    let p = p.trim_tol(0.0);
    let n = p.deg0();
    if n == 0 {
        return Ok(vec![]);
    }
    // roots at 0 are split off exactly
    let k = p.0.iter().position(|a| a.norm() > 0.0).unwrap_or(0);
    let q: Vec<Complex64> = p.0[k..].to_vec();
    let m = q.len() - 1;
    let mut out = vec![c(0.0, 0.0); k];
    if m == 0 {
        return Ok(out);
    }
    let lead = q[m];
    let q: Vec<Complex64> = q.iter().map(|a| a / lead).collect();
    // Cauchy-type radius for the initial circle
    let rad = q[..m].iter().map(|a| a.norm()).fold(0.0, f64::max).max(1e-3).powf(1.0 / m as f64);
    let mut z: Vec<Complex64> =
        (0..m).map(|j| Complex64::from_polar(rad, 0.4 + 2.0 * std::f64::consts::PI * j as f64 / m as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..m {
            let (v, d) = horner2(&q, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..m).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in &z {
        let (v, _) = horner2(&q, *r);
        let scale: f64 = q.iter().enumerate().map(|(i, a)| a.norm() * r.norm().powi(i as i32)).sum();
        if !(v.norm() <= 1e-10 * scale.max(1.0)) {
            return Err(NumericError::NoConvergence);
        }
    }
    out.extend(z);
    Ok(out)
}

/// Critical points with multiplicity, 2d − 2 in all; ∞ appears when the
/// numerator of the derivative has low degree.
pub fn critical_points(f: &FloatMap) -> Result<Vec<Complex64>, NumericError> {
    let d = f.degree();
    if d < 1 {
        return Ok(vec![]);
    }
    let w = f.num.deriv().mul(&f.den).sub(&f.num.mul(&f.den.deriv()));
    // drop cancellation noise relative to the largest coefficient
    let big = w.0.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let w = w.trim_tol(big * 1e-13);
    let mut pts = poly_roots(&w)?;
    while pts.len() < 2 * d - 2 {
        pts.push(INF);
    }
    pts.truncate(2 * d - 2);
    Ok(pts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cycle {
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Complex64>,
    pub period: usize,
    pub multiplier: f64,
}

fn ser_points<S: serde::Serializer>(pts: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for z in pts {
        if is_inf(*z) {
            seq.serialize_element("inf")?;
        } else {
            seq.serialize_element(&format!("~{},{}", z.re, z.im))?;
        }
    }
    seq.end()
}

impl Cycle {
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.points.iter().any(|p| chordal(*p, z) < tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleSearch {
    pub cycles: Vec<Cycle>,
    /// Critical points whose orbit did not settle.
    pub unresolved: usize,
}

/// Iterates each critical orbit and records the attracting cycles found.
pub fn find_attracting_cycles(f: &FloatMap, max_iter: usize, cycle_tol: f64) -> Result<CycleSearch, NumericError> {
    const MAX_PERIOD: usize = 64;
    let crit = critical_points(f)?;
    let mut cycles: Vec<Cycle> = Vec::new();
    let mut unresolved = 0;
    for z0 in crit {
        let mut z = z0;
        for _ in 0..max_iter {
            z = f.eval(z);
        }
        // look for a return within MAX_PERIOD steps
        let mut w = z;
        let mut found = None;
        for p in 1..=MAX_PERIOD {
            w = f.eval(w);
            if chordal(w, z) < cycle_tol {
                found = Some(p);
                break;
            }
        }
        let Some(p) = found else {
            unresolved += 1;
            continue;
        };
        if cycles.iter().any(|cy| cy.contains(z, cycle_tol.max(1e-6) * 10.0)) {
            continue;
        }
        let mut points = Vec::with_capacity(p);
        let mut mult = 1.0;
        let mut u = z;
        for _ in 0..p {
            points.push(u);
            mult *= f.spherical_derivative(u);
            u = f.eval(u);
        }
        if mult < 1.0 {
            cycles.push(Cycle { points, period: p, multiplier: mult });
        } else {
            unresolved += 1;
        }
    }
    Ok(CycleSearch { cycles, unresolved })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(num: &[f64], den: &[f64]) -> FloatMap {
        FloatMap::new(Poly::new(num.iter().map(|&x| c(x, 0.0)).collect()), Poly::new(den.iter().map(|&x| c(x, 0.0)).collect()))
    }

    #[test]
    fn roots_of_cubic() {
        let p = Poly::new(vec![c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        let mut r: Vec<f64> = poly_roots(&p).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn cycles_of_z2_and_basilica() {
        let sq = fm(&[0.0, 0.0, 1.0], &[1.0]);
        let s = find_attracting_cycles(&sq, 200, 1e-9).unwrap();
        assert_eq!(s.cycles.len(), 2);
        assert!(s.cycles.iter().any(|cy| cy.contains(c(0.0, 0.0), 1e-9)));
        assert!(s.cycles.iter().any(|cy| cy.contains(INF, 1e-9)));
        let b = fm(&[-1.0, 2.0, 1.0], &[1.0]);
        let s = find_attracting_cycles(&b, 200, 1e-9).unwrap();
        let two = s.cycles.iter().find(|cy| cy.period == 2).expect("2-cycle");
        assert!(two.contains(c(-1.0, 0.0), 1e-9) && two.contains(c(-2.0, 0.0), 1e-9));
        assert!(s.cycles.iter().any(|cy| cy.contains(INF, 1e-9)));
    }
}
