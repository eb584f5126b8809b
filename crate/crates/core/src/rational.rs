//! Rational maps of the sphere with exact or tolerance-carrying coefficients.

use crate::arith::GaussRat;
use crate::poly::{resultant_c64, Field, Poly};
use crate::value::{ComplexValue, DEFAULT_TOL};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("indeterminate form: numerator and denominator vanish together")]
    IndeterminateForm,
    #[error("tolerance ambiguity: a coefficient of magnitude {0:e} is too close to the tolerance")]
    ToleranceAmbiguity(f64),
    #[error("declared degree {declared} but coefficients give {actual}")]
    DegreeMismatch { declared: u32, actual: u32 },
    #[error("numerator and denominator share a factor")]
    NotCoprime,
    #[error("coefficient list contains infinity")]
    InfiniteCoefficient,
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    pub num: Vec<ComplexValue>,
    pub den: Vec<ComplexValue>,
    pub degree: u32,
}

/// Computational form: all-exact, or promoted to floats.
#[derive(Clone, Debug)]
pub enum Repr {
    Exact(Poly<GaussRat>, Poly<GaussRat>),
    Approx(Poly<Complex64>, Poly<Complex64>, f64),
}

fn exact_of(v: &ComplexValue) -> Option<GaussRat> {
    match v {
        ComplexValue::Exact(g) => Some(g.clone()),
        _ => None,
    }
}

fn c64_of(v: &ComplexValue) -> Complex64 {
    v.to_c64().unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

impl RationalMap {
    pub fn from_exact(num: Poly<GaussRat>, den: Poly<GaussRat>) -> Self {
        // normalize so the denominator is monic
        let l = den.lead().inv().expect("zero denominator");
        let (num, den) = (num.scale(&l), den.scale(&l));
        let degree = num.deg0().max(den.deg0()) as u32;
        RationalMap {
            num: num.0.into_iter().map(ComplexValue::Exact).collect(),
            den: den.0.into_iter().map(ComplexValue::Exact).collect(),
            degree,
        }
    }

    pub fn from_approx(num: Poly<Complex64>, den: Poly<Complex64>, tol: f64, degree: u32) -> Self {
        let wrap = |z: &Complex64| ComplexValue::Approx { z: *z, tol };
        RationalMap {
            num: num.0.iter().map(wrap).collect(),
            den: den.0.iter().map(wrap).collect(),
            degree,
        }
    }

    /// z^k for k > 0, 1/z^|k| for k < 0.
    pub fn monomial(k: i64) -> Self {
        let one = GaussRat::one();
        if k >= 0 {
            RationalMap::from_exact(Poly::monomial(one.clone(), k as usize), Poly::constant(one))
        } else {
            RationalMap::from_exact(Poly::constant(one.clone()), Poly::monomial(one, (-k) as usize))
        }
    }

    pub fn identity() -> Self {
        RationalMap::monomial(1)
    }

    pub fn is_exact(&self) -> bool {
        self.num.iter().chain(self.den.iter()).all(|c| c.is_exact())
    }

    pub fn tol(&self) -> f64 {
        self.num
            .iter()
            .chain(self.den.iter())
            .map(|c| c.tol())
            .fold(0.0, f64::max)
    }

    pub fn repr(&self) -> Repr {
        if self.is_exact() {
            let n = Poly::new(self.num.iter().map(|c| exact_of(c).unwrap()).collect());
            let d = Poly::new(self.den.iter().map(|c| exact_of(c).unwrap()).collect());
            Repr::Exact(n, d)
        } else {
            let tol = self.tol().max(f64::MIN_POSITIVE);
            let n = Poly(self.num.iter().map(c64_of).collect()).trim_tol(0.0);
            let d = Poly(self.den.iter().map(c64_of).collect()).trim_tol(0.0);
            Repr::Approx(n, d, tol)
        }
    }

    /// Float numerator and denominator, regardless of exactness.
    pub fn to_c64_polys(&self) -> (Poly<Complex64>, Poly<Complex64>) {
        (
            Poly(self.num.iter().map(c64_of).collect()).trim_tol(0.0),
            Poly(self.den.iter().map(c64_of).collect()).trim_tol(0.0),
        )
    }

    /// Structural checks: finite coefficients, declared degree, coprimality.
    pub fn check(&self) -> Result<(), MapError> {
        if self.num.iter().chain(self.den.iter()).any(|c| c.is_infinity()) {
            return Err(MapError::InfiniteCoefficient);
        }
        match self.repr() {
            Repr::Exact(n, d) => {
                if d.is_zero() {
                    return Err(MapError::ZeroDenominator);
                }
                let actual = n.deg0().max(d.deg0()) as u32;
                if actual != self.degree {
                    return Err(MapError::DegreeMismatch { declared: self.degree, actual });
                }
                if !n.is_zero() && n.gcd(&d).deg0() > 0 {
                    return Err(MapError::NotCoprime);
                }
                Ok(())
            }
            Repr::Approx(n, d, tol) => {
                let nt = n.trim_tol(tol);
                let dt = d.trim_tol(tol);
                if dt.is_zero() {
                    return Err(MapError::ZeroDenominator);
                }
                for p in [&n, &d] {
                    if let Some(c) = p.0.last() {
                        let m = c.norm();
                        if m >= tol / 10.0 && m <= tol * 10.0 {
                            return Err(MapError::ToleranceAmbiguity(m));
                        }
                    }
                }
                let actual = nt.deg0().max(dt.deg0()) as u32;
                if actual != self.degree {
                    return Err(MapError::DegreeMismatch { declared: self.degree, actual });
                }
                if !nt.is_zero() && resultant_c64(&nt, &dt).norm() <= tol {
                    return Err(MapError::NotCoprime);
                }
                Ok(())
            }
        }
    }

    /// R(z), with the point at infinity handled by the chart w = 1/z.
    pub fn eval(&self, z: &ComplexValue) -> Result<ComplexValue, MapError> {
        let d = self.degree as usize;
        match (self.repr(), z) {
            (Repr::Exact(n, den), ComplexValue::Infinity) => {
                let (a, b) = (n.coeff(d), den.coeff(d));
                ratio_exact(a, b)
            }
            (Repr::Exact(n, den), ComplexValue::Exact(x)) => ratio_exact(n.eval(x), den.eval(x)),
            (Repr::Exact(n, den), ComplexValue::Approx { z, tol }) => {
                let n = n.map(|g| g.to_c64());
                let den = den.map(|g| g.to_c64());
                ratio_approx(n.eval(z), den.eval(z), *tol)
            }
            (Repr::Approx(n, den, tol), ComplexValue::Infinity) => ratio_approx(n.coeff(d), den.coeff(d), tol),
            (Repr::Approx(n, den, tol), p) => {
                let x = p.to_c64().unwrap();
                ratio_approx(n.eval(&x), den.eval(&x), tol.max(p.tol()))
            }
        }
    }

    /// Local degree at z: the vanishing order of R(z+t) - R(z) in a chart
    /// where neither z nor R(z) is infinity.
    pub fn local_degree(&self, z: &ComplexValue) -> Result<u32, MapError> {
        let d = self.degree as usize;
        match self.repr() {
            Repr::Exact(n, den) => {
                let (n, den, x) = match z {
                    ComplexValue::Infinity => (n.reverse_padded(d), den.reverse_padded(d), GaussRat::zero()),
                    ComplexValue::Exact(x) => (n, den, x.clone()),
                    ComplexValue::Approx { z, tol } => {
                        let n = n.map(|g| g.to_c64());
                        let den = den.map(|g| g.to_c64());
                        return local_degree_approx(&n, &den, *z, *tol);
                    }
                };
                let nx = n.eval(&x);
                let dx = den.eval(&x);
                let p = if dx.is_zero() {
                    if nx.is_zero() {
                        return Err(MapError::IndeterminateForm);
                    }
                    den.taylor_shift(&x)
                } else {
                    n.taylor_shift(&x).scale(&dx).sub(&den.taylor_shift(&x).scale(&nx))
                };
                Ok(p.order().ok_or(MapError::IndeterminateForm)? as u32)
            }
            Repr::Approx(n, den, tol) => {
                let (n, den, x, tol) = match z {
                    ComplexValue::Infinity => (n.reverse_padded(d), den.reverse_padded(d), Complex64::new(0.0, 0.0), tol),
                    other => (n, den, other.to_c64().unwrap(), tol.max(other.tol())),
                };
                local_degree_approx(&n, &den, x, tol)
            }
        }
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &RationalMap) -> RationalMap {
        match (self.repr(), inner.repr()) {
            (Repr::Exact(n, d), Repr::Exact(p, q)) => {
                let (a, b) = compose_polys(&n, &d, self.degree as usize, &p, &q);
                let g = a.gcd(&b);
                let (a, _) = a.divrem(&g);
                let (b, _) = b.divrem(&g);
                RationalMap::from_exact(a, b)
            }
            _ => {
                let (n, d) = self.to_c64_polys();
                let (p, q) = inner.to_c64_polys();
                let (a, b) = compose_polys(&n, &d, self.degree as usize, &p, &q);
                let tol = self.tol().max(inner.tol()).max(DEFAULT_TOL);
                // normalize by the largest denominator coefficient
                let s = b.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
                let inv = Complex64::new(1.0 / s, 0.0);
                RationalMap::from_approx(a.scale(&inv), b.scale(&inv), tol, self.degree * inner.degree)
            }
        }
    }

    /// R + c for a finite constant c.
    pub fn add_constant(&self, c: &ComplexValue) -> RationalMap {
        match (self.repr(), c) {
            (Repr::Exact(n, d), ComplexValue::Exact(g)) => RationalMap::from_exact(n.add(&d.scale(g)), d),
            _ => {
                let (n, d) = self.to_c64_polys();
                let cz = c.to_c64().expect("finite constant");
                let tol = self.tol().max(c.tol()).max(DEFAULT_TOL);
                RationalMap::from_approx(n.add(&d.scale(&cz)), d, tol, self.degree)
            }
        }
    }
}

/// f∘g for f = n/d of formal degree k and g = p/q.
fn compose_polys<T: Field>(n: &Poly<T>, d: &Poly<T>, k: usize, p: &Poly<T>, q: &Poly<T>) -> (Poly<T>, Poly<T>) {
    let ppow: Vec<Poly<T>> = (0..=k).map(|i| p.pow(i)).collect();
    let qpow: Vec<Poly<T>> = (0..=k).map(|i| q.pow(i)).collect();
    let mut a = Poly::zero();
    let mut b = Poly::zero();
    for i in 0..=k {
        let t = ppow[i].mul(&qpow[k - i]);
        a = a.add(&t.scale(&n.coeff(i)));
        b = b.add(&t.scale(&d.coeff(i)));
    }
    (a, b)
}

fn ratio_exact(a: GaussRat, b: GaussRat) -> Result<ComplexValue, MapError> {
    match b.inv() {
        Some(bi) => Ok(ComplexValue::Exact(&a * &bi)),
        None if a.is_zero() => Err(MapError::IndeterminateForm),
        None => Ok(ComplexValue::Infinity),
    }
}

fn ratio_approx(a: Complex64, b: Complex64, tol: f64) -> Result<ComplexValue, MapError> {
    if b.norm() <= tol {
        if a.norm() <= tol {
            return Err(MapError::IndeterminateForm);
        }
        return Ok(ComplexValue::Infinity);
    }
    Ok(ComplexValue::Approx { z: a / b, tol })
}

fn local_degree_approx(n: &Poly<Complex64>, d: &Poly<Complex64>, x: Complex64, tol: f64) -> Result<u32, MapError> {
    let ambiguous = |m: f64| m >= tol / 10.0 && m <= tol * 10.0;
    let nx = n.eval(&x);
    let dx = d.eval(&x);
    if ambiguous(dx.norm()) {
        return Err(MapError::ToleranceAmbiguity(dx.norm()));
    }
    let p = if dx.norm() < tol {
        if nx.norm() < tol {
            return Err(MapError::IndeterminateForm);
        }
        d.taylor_shift(&x)
    } else {
        n.taylor_shift(&x).scale(&dx).sub(&d.taylor_shift(&x).scale(&nx))
    };
    for (i, c) in p.0.iter().enumerate() {
        let m = c.norm();
        if ambiguous(m) {
            return Err(MapError::ToleranceAmbiguity(m));
        }
        if m > tol {
            return Ok(i as u32);
        }
    }
    Err(MapError::IndeterminateForm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussRat as G;

    fn ex(v: &[i64]) -> Poly<G> {
        Poly::new(v.iter().map(|&x| G::from_i64(x)).collect())
    }

    #[test]
    fn eval_at_infinity_and_poles() {
        let sq = RationalMap::monomial(2);
        assert_eq!(sq.eval(&ComplexValue::Infinity).unwrap(), ComplexValue::Infinity);
        // 1/(z-1)^2 at 1
        let f = RationalMap::from_exact(ex(&[1]), ex(&[1, -2, 1]));
        assert_eq!(f.eval(&ComplexValue::exact(1, 0)).unwrap(), ComplexValue::Infinity);
        assert_eq!(f.local_degree(&ComplexValue::exact(1, 0)).unwrap(), 2);
        assert_eq!(f.local_degree(&ComplexValue::Infinity).unwrap(), 2);
        assert_eq!(f.local_degree(&ComplexValue::exact(0, 0)).unwrap(), 1);
    }

    #[test]
    fn zeta8_shift_sends_infinity_to_zeta8() {
        let z8 = ComplexValue::approx(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
        let f = RationalMap::monomial(-3).add_constant(&z8);
        assert!(f.eval(&ComplexValue::Infinity).unwrap().same(&z8));
        assert!(f.eval(&z8).unwrap().same(&ComplexValue::zero()));
        assert_eq!(f.local_degree(&ComplexValue::zero()).unwrap(), 3);
        assert_eq!(f.local_degree(&ComplexValue::Infinity).unwrap(), 3);
        assert!(f.check().is_ok());
    }

    #[test]
    fn compose_degrees_multiply() {
        let f = RationalMap::monomial(-3);
        let g = f.compose(&f);
        assert_eq!(g.degree, 9);
        assert_eq!(g, RationalMap::monomial(9));
        let h = RationalMap::from_exact(ex(&[-1, 2, 1]), ex(&[1])); // (z+1)^2 - 2
        assert_eq!(h.compose(&h).degree, 4);
    }

    #[test]
    fn check_rejects_common_factor() {
        let f = RationalMap::from_exact(ex(&[-1, 0, 1]), ex(&[1, 1]));
        assert_eq!(f.check(), Err(MapError::NotCoprime));
        let mut g = RationalMap::monomial(2);
        g.degree = 3;
        assert!(matches!(g.check(), Err(MapError::DegreeMismatch { .. })));
    }
}
