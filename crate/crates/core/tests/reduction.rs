#[path = "support/subdivision.rs"]
mod subdivision;

use subdivision::{cut_point, round_trip_all};
use tms_core::arith::rat;
use tms_core::catalog;
use tms_core::tree::TreePoint;

#[test]
fn subdivision_then_reduction_recovers_every_entry() {
    let cases = round_trip_all().unwrap();
    assert!(cases >= 20);
}

#[test]
fn offsets_of_cut_points_are_vertex_preimages() {
    let s = catalog::get("cantor-z3").unwrap().scheme;
    // e0 = [0, 1/3] maps onto [0, 1] with slope 3; B at 1/3 is hit from 1/9
    assert_eq!(cut_point(&s, 0), TreePoint::Interior { edge: 0, offset: rat(1, 9) });
}
