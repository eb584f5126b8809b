//! Incremental construction of schemes with a derived portrait.

use super::{MarkedSphere, OrbitPortrait, SchemeError, TreeMappingScheme};
use crate::arith::{GaussRat, Rat};
use crate::poly::Poly;
use crate::rational::RationalMap;
use crate::tree::{Edge, TreePair};
use crate::treemap::TreeMap;
use crate::value::ComplexValue;
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default)]
pub struct SchemeBuilder {
    in_t0: Vec<bool>,
    edges: Vec<Edge>,
    map: TreeMap,
    markings: Vec<BTreeMap<usize, ComplexValue>>,
    maps: BTreeMap<usize, RationalMap>,
    critical: BTreeMap<usize, Vec<ComplexValue>>,
}

impl SchemeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, in_t0: bool) -> usize {
        self.in_t0.push(in_t0);
        self.markings.push(BTreeMap::new());
        self.in_t0.len() - 1
    }

    /// `degree` is Some for edges of T0.
    pub fn edge(&mut self, a: usize, b: usize, length: Rat, degree: Option<u32>) -> usize {
        let e = self.edges.len();
        self.edges.push(Edge { a, b, length, in_t0: degree.is_some() });
        if let Some(d) = degree {
            self.map.edge_degree.insert(e, d);
        }
        e
    }

    pub fn mark(&mut self, v: usize, e: usize, z: ComplexValue) -> &mut Self {
        self.markings[v].insert(e, z);
        self
    }

    pub fn map(&mut self, v: usize, image: usize, f: RationalMap) -> &mut Self {
        self.map.vertex_image.insert(v, image);
        self.map.vertex_degree.insert(v, f.degree);
        self.maps.insert(v, f);
        self
    }

    /// Extension witness at a gap center.
    pub fn witness(&mut self, v: usize, f: RationalMap) -> &mut Self {
        self.maps.insert(v, f);
        self
    }

    /// Critical points of f_v not among the markings.
    pub fn critical(&mut self, v: usize, zs: Vec<ComplexValue>) -> &mut Self {
        self.critical.entry(v).or_default().extend(zs);
        self
    }

    pub fn build(self) -> Result<TreeMappingScheme, SchemeError> {
        let tree = TreePair::new(self.in_t0, self.edges).map_err(|e| SchemeError::Invalid(e.to_string()))?;
        let spheres = self.markings.into_iter().map(|markings| MarkedSphere { markings }).collect();
        let mut s = TreeMappingScheme { tree, map: self.map, spheres, maps: self.maps, portrait: OrbitPortrait::default() };
        s.derive_portrait(&self.critical)?;
        Ok(s)
    }
}

pub fn cx(re: i64, im: i64) -> ComplexValue {
    ComplexValue::exact(re, im)
}

pub fn inf() -> ComplexValue {
    ComplexValue::Infinity
}

fn gpoly(c: &[i64]) -> Poly<GaussRat> {
    Poly::new(c.iter().map(|&x| GaussRat::from_i64(x)).collect())
}

/// Exact map with integer coefficients, lowest degree first.
pub fn int_map(num: &[i64], den: &[i64]) -> RationalMap {
    RationalMap::from_exact(gpoly(num), gpoly(den))
}

/// Float map, lowest degree first.
pub fn float_map(num: &[Complex64], den: &[Complex64], degree: u32) -> RationalMap {
    RationalMap::from_approx(Poly(num.to_vec()), Poly(den.to_vec()), crate::value::DEFAULT_TOL, degree)
}
