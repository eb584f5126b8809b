//! Points of the Riemann sphere: exact Gaussian rationals, tolerance-carrying
//! floats, and the point at infinity.

use crate::arith::{parse_rat, GaussRat};
use num_complex::Complex64;
use std::fmt;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum ComplexValue {
    Exact(GaussRat),
    Approx { z: Complex64, tol: f64 },
    Infinity,
}

/// Outcome of a point comparison. `numeric` is set when a tolerance was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cmp {
    pub equal: bool,
    pub numeric: bool,
}

impl ComplexValue {
    pub fn exact(re: i64, im: i64) -> Self {
        ComplexValue::Exact(GaussRat::new(crate::arith::int(re), crate::arith::int(im)))
    }
    pub fn approx(re: f64, im: f64) -> Self {
        ComplexValue::Approx { z: Complex64::new(re, im), tol: DEFAULT_TOL }
    }
    pub fn from_c64(z: Complex64) -> Self {
        ComplexValue::Approx { z, tol: DEFAULT_TOL }
    }
    pub fn zero() -> Self {
        ComplexValue::Exact(GaussRat::zero())
    }
    pub fn is_infinity(&self) -> bool {
        matches!(self, ComplexValue::Infinity)
    }
    pub fn is_exact(&self) -> bool {
        !matches!(self, ComplexValue::Approx { .. })
    }
    pub fn tol(&self) -> f64 {
        match self {
            ComplexValue::Approx { tol, .. } => *tol,
            _ => 0.0,
        }
    }
    /// Finite value as a float, or None at infinity.
    pub fn to_c64(&self) -> Option<Complex64> {
        match self {
            ComplexValue::Exact(g) => Some(g.to_c64()),
            ComplexValue::Approx { z, .. } => Some(*z),
            ComplexValue::Infinity => None,
        }
    }

    /// Compares two points, exactly when both are exact and within the
    /// larger tolerance otherwise.
    pub fn compare(&self, other: &ComplexValue) -> Cmp {
        use ComplexValue::*;
        match (self, other) {
            (Infinity, Infinity) => Cmp { equal: true, numeric: false },
            (Infinity, _) | (_, Infinity) => Cmp { equal: false, numeric: !(self.is_exact() && other.is_exact()) },
            (Exact(a), Exact(b)) => Cmp { equal: a == b, numeric: false },
            _ => {
                let tol = self.tol().max(other.tol());
                let a = self.to_c64().unwrap();
                let b = other.to_c64().unwrap();
                Cmp { equal: (a - b).norm() <= tol, numeric: true }
            }
        }
    }

    pub fn same(&self, other: &ComplexValue) -> bool {
        self.compare(other).equal
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ComplexValue::Infinity);
        }
        if let Some(rest) = s.strip_prefix('~') {
            let (body, tol) = match rest.split_once('@') {
                Some((b, t)) => {
                    let t: f64 = t.parse().map_err(|_| format!("bad tolerance in {s:?}"))?;
                    if !(t > 0.0) || !t.is_finite() {
                        return Err(format!("tolerance must be positive in {s:?}"));
                    }
                    (b, t)
                }
                None => (rest, DEFAULT_TOL),
            };
            let (re, im) = body.split_once(',').ok_or_else(|| format!("expected re,im in {s:?}"))?;
            let re: f64 = re.trim().parse().map_err(|_| format!("bad float in {s:?}"))?;
            let im: f64 = im.trim().parse().map_err(|_| format!("bad float in {s:?}"))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(format!("non-finite float in {s:?}"));
            }
            return Ok(ComplexValue::Approx { z: Complex64::new(re, im), tol });
        }
        let (re, im) = s.split_once(',').ok_or_else(|| format!("expected re,im in {s:?}"))?;
        Ok(ComplexValue::Exact(GaussRat::new(parse_rat(re)?, parse_rat(im)?)))
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexValue::Exact(g) => write!(f, "{g}"),
            ComplexValue::Approx { z, tol } => {
                if *tol == DEFAULT_TOL {
                    write!(f, "~{:?},{:?}", z.re, z.im)
                } else {
                    write!(f, "~{:?},{:?}@{:?}", z.re, z.im, tol)
                }
            }
            ComplexValue::Infinity => write!(f, "inf"),
        }
    }
}
