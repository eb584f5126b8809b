//! Floating-point side: families with parameter n, Möbius maps, sup distances
//! in the chordal metric, limit checks, critical cycles and rendering.

pub mod render;
pub mod roots;

use crate::poly::Poly;
use crate::rational::RationalMap;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use thiserror::Error;

pub const HOLE_MARGIN: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("region comes within chordal distance {0:.3} of a hole")]
    RegionTouchesHole(f64),
    #[error("degenerate Möbius map")]
    DegenerateMoebius,
    #[error("root finding did not converge")]
    NoConvergence,
    #[error("empty sample set")]
    EmptySamples,
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn is_inf(z: Complex64) -> bool {
    !z.re.is_finite() || !z.im.is_finite()
}

pub const INF: Complex64 = Complex64 { re: f64::INFINITY, im: 0.0 };

/// Chordal distance 2|x−y| / √((1+|x|²)(1+|y|²)), with the limit at ∞.
pub fn chordal(x: Complex64, y: Complex64) -> f64 {
    match (is_inf(x), is_inf(y)) {
        (true, true) => 0.0,
        (true, false) => 2.0 / (1.0 + y.norm_sqr()).sqrt(),
        (false, true) => 2.0 / (1.0 + x.norm_sqr()).sqrt(),
        (false, false) => 2.0 * (x - y).norm() / ((1.0 + x.norm_sqr()) * (1.0 + y.norm_sqr())).sqrt(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Chordal,
    Euclidean,
}

impl Metric {
    pub fn dist(self, x: Complex64, y: Complex64) -> f64 {
        match self {
            Metric::Chordal => chordal(x, y),
            Metric::Euclidean => {
                if is_inf(x) || is_inf(y) {
                    if is_inf(x) && is_inf(y) {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (x - y).norm()
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moebius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Moebius {
    /// Normalized to ad − bc = 1.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, NumericError> {
        let det = a * d - b * c;
        if det.norm() <= 1e-14 {
            return Err(NumericError::DegenerateMoebius);
        }
        let s = det.sqrt();
        Ok(Moebius { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn scaling(k: Complex64) -> Self {
        Moebius::new(k, c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).expect("nonzero scale")
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        if is_inf(z) {
            return if self.c.norm() == 0.0 { INF } else { self.a / self.c };
        }
        let den = self.c * z + self.d;
        if den.norm() == 0.0 {
            return INF;
        }
        (self.a * z + self.b) / den
    }

    pub fn inverse(&self) -> Self {
        Moebius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// self ∘ other.
    pub fn compose(&self, o: &Moebius) -> Self {
        Moebius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// A rational map with float coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMap {
    pub num: Poly<Complex64>,
    pub den: Poly<Complex64>,
}

fn horner(p: &Poly<Complex64>, z: Complex64) -> Complex64 {
    p.0.iter().rev().fold(c(0.0, 0.0), |acc, x| acc * z + x)
}

impl FloatMap {
    pub fn new(num: Poly<Complex64>, den: Poly<Complex64>) -> Self {
        FloatMap { num: num.trim_tol(0.0), den: den.trim_tol(0.0) }
    }

    pub fn from_rational(r: &RationalMap) -> Self {
        let (n, d) = r.to_c64_polys();
        FloatMap::new(n, d)
    }

    pub fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (dn, dd) = (self.num.deg0(), self.den.deg0());
        if is_inf(z) {
            return match dn.cmp(&dd) {
                std::cmp::Ordering::Greater => INF,
                std::cmp::Ordering::Less => c(0.0, 0.0),
                std::cmp::Ordering::Equal => self.num.lead() / self.den.lead(),
            };
        }
        if z.norm() > 1.0 {
            // evaluate in 1/z to avoid overflow
            let w = 1.0 / z;
            let k = dn.max(dd);
            let n = self.num.reverse_padded(k);
            let d = self.den.reverse_padded(k);
            let (a, b) = (horner(&n, w), horner(&d, w));
            return if b.norm() == 0.0 { INF } else { a / b };
        }
        let (a, b) = (horner(&self.num, z), horner(&self.den, z));
        if b.norm() == 0.0 {
            INF
        } else {
            a / b
        }
    }

    /// Spherical derivative |R'(z)|(1+|z|²)/(1+|R(z)|²), finite at poles.
    pub fn spherical_derivative(&self, z: Complex64) -> f64 {
        if is_inf(z) {
            let inv = FloatMap::new(self.den.reverse_padded(self.degree()), self.num.reverse_padded(self.degree()));
            // conjugate by 1/z: the value at 0 of 1/R(1/w)
            return inv.spherical_derivative(c(0.0, 0.0));
        }
        let (n, d) = (horner(&self.num, z), horner(&self.den, z));
        let (dn, dd) = (horner(&self.num.deriv(), z), horner(&self.den.deriv(), z));
        let w = dn * d - n * dd;
        w.norm() * (1.0 + z.norm_sqr()) / (n.norm_sqr() + d.norm_sqr())
    }
}

/// The explicit families; n is the degeneration parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// (z+1)² − 2 + 1/(nz)
    Degenerate,
    /// z² + 1/(nz³)
    McMullen,
    /// z²/(z²−1) + 1/(nz³)
    BasilicaCantor,
    /// z³ − (3i/√2)z² + 1/(nz³)
    CubicTwoCycle,
    /// z³ + 1/(n²z)³ + 1/(n²z−n)³ + 1/(n²z+n)³
    Quadruply,
    /// z²/(1 − z⁴/16) + 1/(nz⁴)
    BuriedSierpinski,
    /// z³ + 1/(nz³)
    CantorZ3,
    /// z³ + 1/(nz³) + ζ₈ n^(−1/4)
    SurgeryK1,
    /// 1/(z−1)² + 1/(1−nz)
    Godillon3,
    /// The J-conjugate pair with cube-root choices (j, k) and t = 1/n.
    JConjugate(u8, u8),
}

pub fn zeta8() -> Complex64 {
    c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)
}

fn p(cs: &[Complex64]) -> Poly<Complex64> {
    Poly::new(cs.to_vec())
}

fn r(x: f64) -> Complex64 {
    c(x, 0.0)
}

/// a/b + c/d.
fn frac_add(a: (Poly<Complex64>, Poly<Complex64>), b: (Poly<Complex64>, Poly<Complex64>)) -> (Poly<Complex64>, Poly<Complex64>) {
    (a.0.mul(&b.1).add(&b.0.mul(&a.1)), a.1.mul(&b.1))
}

impl Family {
    pub fn formula(&self) -> &'static str {
        match self {
            Family::Degenerate => "(z+1)^2 - 2 + 1/(n z)",
            Family::McMullen => "z^2 + 1/(n z^3)",
            Family::BasilicaCantor => "z^2/(z^2-1) + 1/(n z^3)",
            Family::CubicTwoCycle => "z^3 - (3i/sqrt 2) z^2 + 1/(n z^3)",
            Family::Quadruply => "z^3 + 1/(n^2 z)^3 + 1/(n^2 z - n)^3 + 1/(n^2 z + n)^3",
            Family::BuriedSierpinski => "z^2/(1 - z^4/16) + 1/(n z^4)",
            Family::CantorZ3 => "z^3 + 1/(n z^3)",
            Family::SurgeryK1 => "z^3 + 1/(n z^3) + zeta8 n^(-1/4)",
            Family::Godillon3 => "1/(z-1)^2 + 1/(1 - n z)",
            Family::JConjugate(..) => "(z^3 - 3(3/4)^(1/3) t^(1/3) z^2)/(9z/2 - 3) + (t^3 - 3 2^(-1/3) t^(7/3) z)/(-2z^3 + 3t z^2), t = 1/n",
        }
    }

    /// Closed-form value.
    pub fn eval(&self, n: f64, z: Complex64) -> Complex64 {
        if is_inf(z) {
            return self.map(n).eval(z);
        }
        let one = r(1.0);
        match self {
            Family::Degenerate => (z + one).powi(2) - 2.0 + one / (n * z),
            Family::McMullen => z * z + one / (n * z.powi(3)),
            Family::BasilicaCantor => z * z / (z * z - one) + one / (n * z.powi(3)),
            Family::CubicTwoCycle => z.powi(3) - c(0.0, 3.0 / 2f64.sqrt()) * z * z + one / (n * z.powi(3)),
            Family::Quadruply => {
                let m = n * n;
                z.powi(3) + one / (m * z).powi(3) + one / (m * z - n).powi(3) + one / (m * z + n).powi(3)
            }
            Family::BuriedSierpinski => z * z / (one - z.powi(4) / 16.0) + one / (n * z.powi(4)),
            Family::CantorZ3 => z.powi(3) + one / (n * z.powi(3)),
            Family::SurgeryK1 => z.powi(3) + one / (n * z.powi(3)) + zeta8() * n.powf(-0.25),
            Family::Godillon3 => one / (z - one).powi(2) + one / (one - n * z),
            Family::JConjugate(..) => self.map(n).eval(z),
        }
    }

    /// The instance as a rational map with float coefficients.
    pub fn map(&self, n: f64) -> FloatMap {
        let z0 = r(0.0);
        let one = r(1.0);
        let (num, den) = match self {
            Family::Degenerate => frac_add((p(&[r(-1.0), r(2.0), one]), p(&[one])), (p(&[one]), p(&[z0, r(n)]))),
            Family::McMullen => frac_add((p(&[z0, z0, one]), p(&[one])), (p(&[one]), p(&[z0, z0, z0, r(n)]))),
            Family::BasilicaCantor => {
                frac_add((p(&[z0, z0, one]), p(&[r(-1.0), z0, one])), (p(&[one]), p(&[z0, z0, z0, r(n)])))
            }
            Family::CubicTwoCycle => frac_add(
                (p(&[z0, z0, c(0.0, -3.0 / 2f64.sqrt()), one]), p(&[one])),
                (p(&[one]), p(&[z0, z0, z0, r(n)])),
            ),
            Family::Quadruply => {
                let m = n * n;
                let cube = |a: Complex64, b: Complex64| p(&[a, b]).pow(3);
                let mut acc = (p(&[z0, z0, z0, one]), p(&[one]));
                for s in [0.0, -n, n] {
                    acc = frac_add(acc, (p(&[one]), cube(r(s), r(m))));
                }
                acc
            }
            Family::BuriedSierpinski => frac_add(
                (p(&[z0, z0, r(16.0)]), p(&[r(16.0), z0, z0, z0, r(-1.0)])),
                (p(&[one]), p(&[z0, z0, z0, z0, r(n)])),
            ),
            Family::CantorZ3 => frac_add((p(&[z0, z0, z0, one]), p(&[one])), (p(&[one]), p(&[z0, z0, z0, r(n)]))),
            Family::SurgeryK1 => frac_add(
                (p(&[zeta8() * n.powf(-0.25), z0, z0, one]), p(&[one])),
                (p(&[one]), p(&[z0, z0, z0, r(n)])),
            ),
            Family::Godillon3 => frac_add((p(&[one]), p(&[one, r(-2.0), one])), (p(&[one]), p(&[one, r(-n)]))),
            Family::JConjugate(j, k) => {
                let t = 1.0 / n;
                let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
                let t13 = r(t.cbrt()) * w.powi(*j as i32);
                let q = r(2f64.powf(-1.0 / 3.0)) * w.powi(*k as i32);
                let a = (p(&[z0, z0, -3.0 * r(0.75f64.cbrt()) * t13, one]), p(&[r(-3.0), r(4.5)]));
                let t73 = t13.powi(7);
                let b = (p(&[r(t.powi(3)), -3.0 * q * t73]), p(&[z0, z0, r(3.0 * t), r(-2.0)]));
                frac_add(a, b)
            }
        };
        FloatMap::new(num, den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    Annulus { center: (f64, f64), r_in: f64, r_out: f64 },
    Disk { center: (f64, f64), r: f64 },
}

/// A compact sample region: a shape minus open disks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Region {
    pub shape: Shape,
    pub exclude: Vec<((f64, f64), f64)>,
    pub angular: usize,
    pub radial: usize,
}

impl Region {
    pub fn annulus(center: Complex64, r_in: f64, r_out: f64) -> Self {
        Region { shape: Shape::Annulus { center: (center.re, center.im), r_in, r_out }, exclude: vec![], angular: 256, radial: 64 }
    }

    pub fn disk(center: Complex64, r: f64) -> Self {
        Region { shape: Shape::Disk { center: (center.re, center.im), r }, exclude: vec![], angular: 256, radial: 64 }
    }

    pub fn excluding(mut self, center: Complex64, r: f64) -> Self {
        self.exclude.push(((center.re, center.im), r));
        self
    }

    /// Tensor lattice in polar coordinates, including both boundary circles,
    /// plus a polar lattice on each excluded circle.
    pub fn samples(&self) -> Vec<Complex64> {
        let (cen, r0, r1) = match self.shape {
            Shape::Annulus { center, r_in, r_out } => (c(center.0, center.1), r_in, r_out),
            Shape::Disk { center, r } => (c(center.0, center.1), 0.0, r),
        };
        let mut out = Vec::with_capacity(self.angular * self.radial);
        for i in 0..self.radial {
            let rad = if self.radial == 1 { r1 } else { r0 + (r1 - r0) * i as f64 / (self.radial - 1) as f64 };
            for j in 0..self.angular {
                let th = 2.0 * PI * j as f64 / self.angular as f64;
                out.push(cen + Complex64::from_polar(rad, th));
            }
        }
        for &((x, y), er) in &self.exclude {
            for j in 0..self.angular {
                let th = 2.0 * PI * j as f64 / self.angular as f64;
                out.push(c(x, y) + Complex64::from_polar(er, th));
            }
        }
        out.retain(|z| self.exclude.iter().all(|&((x, y), er)| (z - c(x, y)).norm() >= er * (1.0 - 1e-12)));
        let in_shape = |z: &Complex64| (z - cen).norm() <= r1 * (1.0 + 1e-12);
        out.retain(in_shape);
        out
    }
}

/// Smallest chordal distance from the samples to the holes.
pub fn hole_clearance(samples: &[Complex64], holes: &[Complex64]) -> f64 {
    samples
        .iter()
        .flat_map(|z| holes.iter().map(move |h| chordal(*z, *h)))
        .fold(f64::INFINITY, f64::min)
}

/// max over the region's lattice of the distance between f and g.
pub fn sup_distance(
    f: &(dyn Fn(Complex64) -> Complex64 + Sync),
    g: &(dyn Fn(Complex64) -> Complex64 + Sync),
    region: &Region,
    holes: &[Complex64],
    metric: Metric,
) -> Result<f64, NumericError> {
    let pts = region.samples();
    if pts.is_empty() {
        return Err(NumericError::EmptySamples);
    }
    let clear = hole_clearance(&pts, holes);
    if clear < HOLE_MARGIN {
        return Err(NumericError::RegionTouchesHole(clear));
    }
    // fixed chunking keeps the result independent of the thread count
    Ok(pts
        .par_chunks(1024)
        .map(|ch| ch.iter().map(|&z| metric.dist(f(z), g(z))).fold(0.0, f64::max))
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub n: f64,
    pub region: usize,
    pub sup_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub rows: Vec<Row>,
    pub bound: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl LimitReport {
    pub fn column(&self, region: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.region == region).map(|r| r.sup_distance).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,region,sup_distance\n");
        for r in &self.rows {
            s.push_str(&format!("{:e},{},{:e}\n", r.n, r.region, r.sup_distance));
        }
        s
    }
}

/// sup distance of f_n to g on each region; passes when each column is
/// non-increasing within 10% and the last value is below `bound`.
pub fn algebraic_limit_check(
    family: &(dyn Fn(f64, Complex64) -> Complex64 + Sync),
    g: &(dyn Fn(Complex64) -> Complex64 + Sync),
    holes: &[Complex64],
    regions: &[Region],
    n_list: &[f64],
    bound: f64,
    metric: Metric,
) -> Result<LimitReport, NumericError> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut pass = true;
    for (ri, reg) in regions.iter().enumerate() {
        let mut prev: Option<f64> = None;
        let mut last = f64::NAN;
        for &n in n_list {
            let d = sup_distance(&|z| family(n, z), g, reg, holes, metric)?;
            if let Some(p) = prev {
                if d > p * 1.1 {
                    pass = false;
                    notes.push(format!("region {ri}: distance rises from {p:e} to {d:e} at n = {n:e}"));
                }
            }
            prev = Some(d);
            last = d;
            rows.push(Row { n, region: ri, sup_distance: d });
        }
        if !(last < bound) {
            pass = false;
            notes.push(format!("region {ri}: final distance {last:e} not below {bound:e}"));
        }
    }
    Ok(LimitReport { rows, bound, pass, notes })
}

/// sup distance of M(n)⁻¹ ∘ f_n^p ∘ M(n) to g; passes when strictly
/// decreasing and the last value is below `bound`.
pub fn rescaling_check(
    family: &(dyn Fn(f64, Complex64) -> Complex64 + Sync),
    m: &dyn Fn(f64) -> Moebius,
    period: usize,
    g: &(dyn Fn(Complex64) -> Complex64 + Sync),
    region: &Region,
    holes: &[Complex64],
    n_list: &[f64],
    bound: f64,
) -> Result<LimitReport, NumericError> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut pass = true;
    let mut prev: Option<f64> = None;
    for &n in n_list {
        let mn = m(n);
        let inv = mn.inverse();
        let resc = |w: Complex64| {
            let mut z = mn.apply(w);
            for _ in 0..period {
                z = family(n, z);
            }
            inv.apply(z)
        };
        let d = sup_distance(&resc, g, region, holes, Metric::Chordal)?;
        if let Some(p) = prev {
            if !(d < p) {
                pass = false;
                notes.push(format!("distance does not decrease at n = {n:e}: {p:e} then {d:e}"));
            }
        }
        prev = Some(d);
        rows.push(Row { n, region: 0, sup_distance: d });
    }
    match rows.last() {
        Some(r) if r.sup_distance < bound => {}
        _ => {
            pass = false;
            notes.push(format!("final distance not below {bound:e}"));
        }
    }
    Ok(LimitReport { rows, bound, pass, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moebius_inverse() {
        let m = Moebius::new(c(1.0, 2.0), c(0.5, 0.0), c(0.0, 1.0), c(3.0, -1.0)).unwrap();
        let id = m.compose(&m.inverse());
        for z in [c(0.3, 0.1), c(-2.0, 5.0), c(0.0, 0.0)] {
            assert!((id.apply(z) - z).norm() < 1e-12);
            assert!((m.inverse().apply(m.apply(z)) - z).norm() < 1e-12);
        }
        assert!(Moebius::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)).is_err());
    }

    #[test]
    fn families_agree_with_their_maps() {
        let fams = [
            Family::Degenerate,
            Family::McMullen,
            Family::BasilicaCantor,
            Family::CubicTwoCycle,
            Family::Quadruply,
            Family::BuriedSierpinski,
            Family::CantorZ3,
            Family::SurgeryK1,
            Family::Godillon3,
        ];
        for f in fams {
            let m = f.map(10.0);
            for z in [c(0.7, 0.2), c(-1.3, 0.9), c(2.5, -0.4)] {
                let (a, b) = (f.eval(10.0, z), m.eval(z));
                assert!(chordal(a, b) < 1e-9, "{f:?} at {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sup_distance_examples() {
        let g = |z: Complex64| z * z;
        let reg = Region::annulus(c(0.0, 0.0), 1.0, 2.0);
        let d2 = sup_distance(&|z| Family::McMullen.eval(100.0, z), &g, &reg, &[c(0.0, 0.0)], Metric::Chordal).unwrap();
        assert!((0.004..=0.011).contains(&d2), "{d2}");
        let d4 = sup_distance(&|z| Family::McMullen.eval(1e4, z), &g, &reg, &[c(0.0, 0.0)], Metric::Chordal).unwrap();
        assert!((80.0..=120.0).contains(&(d2 / d4)));
        assert_eq!(sup_distance(&g, &g, &reg, &[], Metric::Chordal).unwrap(), 0.0);
        let bad = Region::disk(c(0.0, 0.0), 1.0);
        assert!(matches!(sup_distance(&g, &g, &bad, &[c(0.0, 0.0)], Metric::Chordal), Err(NumericError::RegionTouchesHole(_))));
    }
}
