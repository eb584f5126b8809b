//! Hand-built schemes of the catalog.

use crate::arith::{rat, Rat};
use crate::scheme::build::{cx, float_map, inf, int_map, SchemeBuilder};
use crate::scheme::TreeMappingScheme;
use crate::rational::RationalMap;
use crate::value::ComplexValue;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Two intervals [A,B] and [B',A'] joined by a gap with center C. A and A'
/// sit at 0 and 1; B, C, B' at the given positions.
pub struct Interval {
    pub b: Rat,
    pub c: Rat,
    pub bp: Rat,
    pub d_left: u32,
    pub d_right: u32,
    pub f_a: RationalMap,
    pub f_b: RationalMap,
    pub f_bp: RationalMap,
    pub f_ap: RationalMap,
    pub crit_a: Vec<ComplexValue>,
    pub crit_ap: Vec<ComplexValue>,
}

impl Interval {
    pub fn build(self) -> TreeMappingScheme {
        let mut s = SchemeBuilder::new();
        let a = s.vertex(true);
        let b = s.vertex(true);
        let c = s.vertex(false);
        let bp = s.vertex(true);
        let ap = s.vertex(true);
        let e0 = s.edge(a, b, self.b.clone(), Some(self.d_left));
        let e1 = s.edge(b, c, &self.c - &self.b, None);
        let e2 = s.edge(c, bp, &self.bp - &self.c, None);
        let e3 = s.edge(bp, ap, rat(1, 1) - &self.bp, Some(self.d_right));
        s.mark(a, e0, cx(0, 0));
        s.mark(b, e0, inf()).mark(b, e1, cx(0, 0));
        s.mark(c, e1, cx(0, 0)).mark(c, e2, inf());
        s.mark(bp, e2, inf()).mark(bp, e3, cx(0, 0));
        s.mark(ap, e3, inf());
        s.map(a, a, self.f_a).map(b, ap, self.f_b).map(bp, ap, self.f_bp).map(ap, a, self.f_ap);
        s.critical(a, self.crit_a).critical(ap, self.crit_ap);
        s.build().expect("interval scheme")
    }
}

fn sq() -> RationalMap {
    RationalMap::monomial(2)
}

fn mcmullen_like(f_a: RationalMap, crit_a: Vec<ComplexValue>) -> Interval {
    Interval {
        b: rat(1, 2),
        c: rat(7, 12),
        bp: rat(2, 3),
        d_left: 2,
        d_right: 3,
        f_a,
        f_b: sq(),
        f_bp: RationalMap::monomial(-3),
        f_ap: RationalMap::monomial(-3),
        crit_a,
        crit_ap: vec![cx(0, 0)],
    }
}

pub fn mcmullen() -> TreeMappingScheme {
    mcmullen_like(sq(), vec![inf()]).build()
}

pub fn basilica_cantor() -> TreeMappingScheme {
    mcmullen_like(int_map(&[0, 0, 1], &[-1, 0, 1]), vec![inf()]).build()
}

pub fn cubic_two_cycle() -> TreeMappingScheme {
    let k = 3.0 * FRAC_1_SQRT_2;
    let f = float_map(
        &[Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, -k), Complex64::new(1.0, 0.0)],
        &[Complex64::new(1.0, 0.0)],
        3,
    );
    mcmullen_like(f, vec![inf(), ComplexValue::approx(0.0, 2f64.sqrt())]).build()
}

pub fn cantor_z3() -> TreeMappingScheme {
    Interval {
        b: rat(1, 3),
        c: rat(1, 2),
        bp: rat(2, 3),
        d_left: 3,
        d_right: 3,
        f_a: RationalMap::monomial(3),
        f_b: RationalMap::monomial(3),
        f_bp: RationalMap::monomial(-3),
        f_ap: RationalMap::monomial(-3),
        crit_a: vec![inf()],
        crit_ap: vec![cx(0, 0)],
    }
    .build()
}

pub fn degenerate() -> TreeMappingScheme {
    let mut s = SchemeBuilder::new();
    let a = s.vertex(true);
    let c = s.vertex(false);
    let ap = s.vertex(true);
    let e0 = s.edge(a, c, rat(1, 2), None);
    let e1 = s.edge(c, ap, rat(1, 2), None);
    s.mark(a, e0, cx(0, 0)).mark(c, e0, cx(0, 0)).mark(c, e1, inf()).mark(ap, e1, inf());
    s.map(a, a, int_map(&[-1, 2, 1], &[1])).map(ap, a, int_map(&[1, -1], &[0, 1]));
    s.critical(a, vec![cx(-1, 0), inf()]);
    s.build().expect("degenerate scheme")
}

pub fn quadruply() -> TreeMappingScheme {
    let mut s = SchemeBuilder::new();
    let a0 = s.vertex(true);
    let b0 = s.vertex(true);
    let c = s.vertex(false);
    let bs: Vec<usize> = (0..3).map(|_| s.vertex(true)).collect();
    let as_: Vec<usize> = (0..3).map(|_| s.vertex(true)).collect();
    let e_ab0 = s.edge(a0, b0, rat(1, 1), Some(3));
    let e_cb0 = s.edge(b0, c, rat(1, 2), None);
    let gaps: Vec<usize> = bs.iter().map(|&b| s.edge(c, b, rat(1, 2), None)).collect();
    let arms: Vec<usize> = (0..3).map(|j| s.edge(bs[j], as_[j], rat(1, 1), Some(3))).collect();
    let a3 = as_[2];
    s.mark(a0, e_ab0, cx(0, 0));
    s.mark(b0, e_ab0, inf()).mark(b0, e_cb0, cx(0, 0));
    s.mark(c, e_cb0, inf()).mark(c, gaps[0], cx(0, 0)).mark(c, gaps[1], cx(1, 0)).mark(c, gaps[2], cx(-1, 0));
    for j in 0..3 {
        s.mark(bs[j], gaps[j], inf()).mark(bs[j], arms[j], cx(0, 0));
        s.mark(as_[j], arms[j], inf());
    }
    s.map(a0, a0, RationalMap::monomial(3)).map(b0, a3, RationalMap::monomial(3));
    for j in 0..3 {
        s.map(bs[j], a3, RationalMap::monomial(-3)).map(as_[j], a0, RationalMap::monomial(-3));
        s.critical(as_[j], vec![cx(0, 0)]);
    }
    s.critical(a0, vec![inf()]);
    s.build().expect("quadruply scheme")
}

pub fn buried_sierpinski() -> TreeMappingScheme {
    let mut s = SchemeBuilder::new();
    let a = s.vertex(true);
    let b = s.vertex(true);
    let g = s.vertex(false);
    let bp = s.vertex(true);
    let y = s.vertex(true);
    let x = s.vertex(true);
    let cs: Vec<usize> = (0..4).map(|_| s.vertex(true)).collect();
    let ds: Vec<usize> = (0..2).map(|_| s.vertex(true)).collect();
    let e_ab = s.edge(a, b, rat(4, 1), Some(2));
    let e_bg = s.edge(b, g, rat(1, 2), None);
    let e_gb = s.edge(g, bp, rat(1, 2), None);
    let e_by = s.edge(bp, y, rat(3, 1), Some(4));
    let e_ax = s.edge(a, x, rat(4, 1), Some(2));
    let e_c: Vec<usize> = cs.iter().map(|&v| s.edge(a, v, rat(2, 1), Some(2))).collect();
    let e_d: Vec<usize> = ds.iter().map(|&v| s.edge(a, v, rat(4, 1), Some(1))).collect();
    s.mark(a, e_ab, cx(0, 0)).mark(a, e_ax, inf());
    for (i, &e) in e_c.iter().enumerate() {
        let z = Complex64::from_polar(2.0, std::f64::consts::FRAC_PI_4 * (2 * i + 1) as f64);
        s.mark(a, e, ComplexValue::approx(z.re, z.im));
    }
    s.mark(a, e_d[0], cx(0, 2)).mark(a, e_d[1], cx(0, -2));
    s.mark(b, e_ab, inf()).mark(b, e_bg, cx(0, 0));
    s.mark(g, e_bg, cx(0, 0)).mark(g, e_gb, inf());
    s.mark(bp, e_gb, cx(0, 0)).mark(bp, e_by, inf());
    s.mark(y, e_by, inf()).mark(x, e_ax, inf());
    for j in 0..4 {
        s.mark(cs[j], e_c[j], inf());
    }
    for j in 0..2 {
        s.mark(ds[j], e_d[j], inf());
    }
    s.map(a, a, int_map(&[0, 0, 16], &[16, 0, 0, 0, -1]));
    s.map(b, y, sq()).map(bp, y, RationalMap::monomial(4)).map(x, y, sq()).map(y, x, RationalMap::monomial(4));
    s.map(cs[0], ds[0], sq()).map(cs[2], ds[0], sq()).map(cs[1], ds[1], sq()).map(cs[3], ds[1], sq());
    for &d in &ds {
        s.map(d, x, RationalMap::identity());
    }
    s.critical(x, vec![cx(0, 0)]).critical(y, vec![cx(0, 0)]);
    for &v in &cs {
        s.critical(v, vec![cx(0, 0)]);
    }
    s.build().expect("buried-sierpinski scheme")
}
