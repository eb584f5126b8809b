//! Dense univariate polynomials, ascending coefficients.

use crate::arith::GaussRat;
use num_complex::Complex64;
use std::fmt::Debug;

pub trait Field: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
}

impl Field for GaussRat {
    fn zero() -> Self {
        GaussRat::zero()
    }
    fn one() -> Self {
        GaussRat::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        GaussRat::inv(self)
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        GaussRat::from_i64(n)
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if *self == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T>(pub Vec<T>);

impl<T: Field> Poly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }
    pub fn zero() -> Self {
        Poly(vec![])
    }
    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.push(c);
        Poly::new(v)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    pub fn coeff(&self, i: usize) -> T {
        self.0.get(i).cloned().unwrap_or_else(T::zero)
    }
    pub fn lead(&self) -> T {
        self.0.last().cloned().unwrap_or_else(T::zero)
    }
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }
    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.0.iter().map(|x| x.mul(c)).collect())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Poly::constant(T::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
    pub fn deriv(&self) -> Self {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&T::from_i64(i as i64)))
                .collect(),
        )
    }
    /// Coefficients of p(x + t) as a polynomial in t.
    pub fn taylor_shift(&self, x: &T) -> Self {
        // repeated synthetic division
        let mut c = self.0.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].mul(x);
                c[j] = c[j].add(&t);
            }
        }
        Poly::new(c)
    }
    /// t^n p(1/t), with p read as a polynomial of formal degree n.
    pub fn reverse_padded(&self, n: usize) -> Self {
        let mut c: Vec<T> = (0..=n).map(|i| self.coeff(i)).collect();
        c.reverse();
        Poly::new(c)
    }
    /// Lowest index with a nonzero coefficient; None for the zero polynomial.
    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lead().inv().expect("division by zero polynomial");
        let dd = d.deg0();
        let mut r = self.clone();
        let mut q = vec![T::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd || r.is_zero() {
                break;
            }
            let c = r.lead().mul(&dl);
            let k = rd - dd;
            q[k] = c.clone();
            r = r.sub(&d.scale(&c).shift(k));
        }
        (Poly::new(q), r)
    }
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly::new(v)
    }
    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(l) => self.scale(&l),
            None => self.clone(),
        }
    }
    /// Monic gcd. Meaningful only over an exact field.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.0.iter().map(f).collect())
    }
}

impl Poly<Complex64> {
    /// Drops trailing coefficients with magnitude at most `tol`.
    pub fn trim_tol(&self, tol: f64) -> Self {
        let mut c = self.0.clone();
        while c.last().is_some_and(|x| x.norm() <= tol) {
            c.pop();
        }
        Poly(c)
    }
}

/// Resultant via the Sylvester determinant, floating point.
pub fn resultant_c64(a: &Poly<Complex64>, b: &Poly<Complex64>) -> Complex64 {
    let (m, n) = (a.deg0(), b.deg0());
    if m == 0 && n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let size = m + n;
    let mut mat = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    for i in 0..n {
        for j in 0..=m {
            mat[i][i + j] = a.coeff(m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            mat[n + i][i + j] = b.coeff(n - j);
        }
    }
    determinant(mat)
}

fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        if m[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let t = m[col][c] * f;
                m[r][c] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussRat as G;

    fn p(v: &[i64]) -> Poly<G> {
        Poly::new(v.iter().map(|&x| G::from_i64(x)).collect())
    }

    #[test]
    fn shift_and_reverse() {
        // (z-1)^2 = 1 - 2z + z^2 ; shifted by 1 gives t^2
        let q = p(&[1, -2, 1]);
        assert_eq!(q.taylor_shift(&G::one()), p(&[0, 0, 1]));
        assert_eq!(p(&[0, 0, 1]).reverse_padded(3), p(&[0, 1]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = p(&[-1, 0, 1]); // z^2 - 1
        let b = p(&[1, 2, 1]); // (z+1)^2
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        let (q, r) = a.divrem(&p(&[1, 1]));
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn resultant_detects_common_root() {
        let c = |v: &[f64]| Poly::new(v.iter().map(|&x| Complex64::new(x, 0.0)).collect());
        assert!(resultant_c64(&c(&[-1.0, 1.0]), &c(&[1.0, -2.0, 1.0])).norm() < 1e-12);
        assert!(resultant_c64(&c(&[0.0, 1.0]), &c(&[1.0, 0.0, 1.0])).norm() > 0.5);
    }
}
