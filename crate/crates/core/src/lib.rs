//! Tree mapping schemes for post-critically finite hyperbolic rational maps.

pub mod arith;
pub mod catalog;
pub mod components;
pub mod numerics;
pub mod poly;
pub mod rational;
pub mod report;
pub mod scheme;
pub mod surgery;
pub mod tree;
pub mod treemap;
pub mod validate;
pub mod value;
