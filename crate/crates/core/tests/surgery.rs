use tms_core::arith::rat;
use tms_core::catalog;
use tms_core::components::census_with;
use tms_core::scheme::TreeMappingScheme;
use tms_core::surgery::{
    cantor_tower, diagonal_schedule, godillon_scheme, graft, tower_parameter, SurgeryError, SurgerySpec,
};
use tms_core::tree::TreePoint;
use tms_core::validate::check_hpcf;
use tms_core::validate::reduce::check_irreducible;
use tms_core::value::ComplexValue;

fn valid(s: &TreeMappingScheme) -> bool {
    check_hpcf(s, &Default::default()).pass() && check_irreducible(s).pass()
}

#[test]
fn graft_at_a_period_two_orbit() {
    let base = catalog::get("cantor-z3").unwrap().scheme;
    // 9/10 sits 7/30 past B' on [B', A']
    let target = TreePoint::Interior { edge: 3, offset: rat(7, 30) };
    assert_eq!(base.map.point_period(&base.tree, &target, 10), Some(2));
    let spec = SurgerySpec { target, toward: 4, a: tower_parameter(1) };
    let s = graft(&base, &spec).unwrap();
    assert!(valid(&s));
    // two orbit vertices and two leaves
    let n0 = base.tree.num_vertices();
    assert_eq!(s.tree.num_vertices(), n0 + 4);
    let leaves: Vec<usize> = (n0..s.tree.num_vertices()).filter(|&v| s.tree.valence(v) == 1).collect();
    assert_eq!(leaves.len(), 2);
    // S_0 -> S_1 -> collapse onto the old leaf A'
    let (d0, d1) = (leaves[0], leaves[1]);
    let into_cycle = |d: usize| s.map.image(d).unwrap();
    assert!((into_cycle(d0) == d1 && into_cycle(d1) == 4) || (into_cycle(d1) == d0 && into_cycle(d0) == 4));
    let c = census_with(&s, s.tree.v0().len(), 1).unwrap();
    let complex: Vec<_> = c.models.iter().filter(|m| m.complex_type).collect();
    assert_eq!(complex.len(), 1);
    assert_eq!(complex[0].period, 2);
    assert_eq!(complex[0].model_degree, 9);
    assert!(c.bound_slack >= 0);
}

#[test]
fn graft_rejects_vertices_and_wrong_parameters() {
    let base = catalog::get("cantor-z3").unwrap().scheme;
    let at_vertex = SurgerySpec { target: TreePoint::Vertex(0), toward: 4, a: tower_parameter(0) };
    assert_eq!(graft(&base, &at_vertex).unwrap_err(), SurgeryError::TargetIsVertex);
    let fixed = TreePoint::Interior { edge: 3, offset: rat(1, 12) };
    let wrong = SurgerySpec { target: fixed.clone(), toward: 4, a: ComplexValue::exact(1, 0) };
    assert!(matches!(graft(&base, &wrong), Err(SurgeryError::ParameterNotPostcriticallyClosing(_))));
    let ok = SurgerySpec { target: fixed, toward: 4, a: tower_parameter(0) };
    assert!(valid(&graft(&base, &ok).unwrap()));
}

#[test]
fn first_graft_matches_the_k1_entry() {
    let t = cantor_tower(1).unwrap().scheme;
    let e = catalog::get("surgery-k1").unwrap().scheme;
    assert_eq!(
        tms_core::scheme::format::serialize(&t),
        tms_core::scheme::format::serialize(&e)
    );
}

#[test]
fn tower_levels() {
    for k in 0..=3 {
        let lv = cantor_tower(k).unwrap();
        let s = &lv.scheme;
        assert!(valid(s), "k={k}");
        let c = census_with(s, s.tree.v0().len(), 1).unwrap();
        assert_eq!(c.complex_cycle_count(), k, "k={k}");
        assert!(c.bound_slack >= 0, "k={k}");
        let mut periods: Vec<usize> = c.models.iter().filter(|m| m.complex_type).map(|m| m.period).collect();
        periods.sort();
        assert_eq!(periods, (0..k).map(|m| 3usize.pow(m as u32)).collect::<Vec<_>>());
        for m in 0..=k + 2 {
            let p = s.map.point_period(&s.tree, &lv.point(m), 1000);
            assert_eq!(p, Some(lv.expected_period(m)), "k={k} m={m}");
        }
    }
}

#[test]
fn first_return_degrees_of_the_tower() {
    let lv = cantor_tower(3).unwrap();
    let s = &lv.scheme;
    for m in 0..=2 {
        let x = lv.point(m);
        let TreePoint::Vertex(v) = x else { panic!("A_{m} is a vertex after grafting") };
        let p = lv.expected_period(m);
        let f = s.compose_cycle(v, p).unwrap();
        assert_eq!(f.degree as u64, 3u64.pow(2u32.pow(m as u32)), "m={m}");
    }
}

#[test]
fn godillon_degree_five() {
    let s = godillon_scheme(5);
    assert!(check_hpcf(&s, &Default::default()).pass());
    let x3 = 3;
    assert_eq!(s.maps[&x3].degree, 3);
    assert_eq!(s.maps[&0].degree + s.maps[&x3].degree, 5);
    for z in [ComplexValue::exact(0, 0), ComplexValue::exact(1, 0)] {
        let i = s.portrait.find(x3, &z).unwrap();
        let p = &s.portrait.points[i];
        assert!(p.is_exposed());
        assert_eq!(p.critical(), Some(3), "multiplicity k - 1 = 2");
    }
}

#[test]
fn godillon_degree_three_tent() {
    let s = godillon_scheme(3);
    assert!(valid(&tms_core::validate::reduce::reduce_to_irreducible(&s).unwrap()));
    let f3 = |x: &TreePoint| {
        let mut y = x.clone();
        for _ in 0..3 {
            y = s.map.eval_point(&s.tree, &y).unwrap();
        }
        y
    };
    // [A, B] and [A', B'] each stretch by 4 onto an arc with no fold
    for (u, v) in [(0, 5), (8, 7)] {
        let len = s.tree.vertex_distance(u, v);
        let (fu, fv) = (f3(&TreePoint::Vertex(u)), f3(&TreePoint::Vertex(v)));
        assert_eq!(s.tree.distance(&fu, &fv), &len * rat(4, 1));
        let mid = s.tree.point_along(u, v, &(&len / rat(2, 1))).unwrap();
        let fm = f3(&mid);
        assert_eq!(s.tree.distance(&fu, &fm), &len * rat(2, 1));
        assert_eq!(s.tree.distance(&fm, &fv), &len * rat(2, 1));
    }
}

#[test]
fn schedule_examples() {
    let inv: Vec<(f64, f64)> = (1..=4).map(|n| (n as f64, 1.0 / n as f64)).collect();
    let rows = diagonal_schedule(&[inv.clone(), inv]).unwrap();
    assert_eq!(rows[0].n, 2.0);
    assert_eq!(rows[1].n, 3.0);
    assert_eq!(diagonal_schedule(&[vec![]]), Err(SurgeryError::ScheduleUnsatisfiable(1)));

    let e = catalog::get("surgery-k1").unwrap();
    let mut check = e.numeric_checks.iter().find(|c| c.id == "fixed").unwrap().clone();
    check.n_list = vec![1e2, 1e4, 1e6];
    let rep = check.run(e.family.unwrap()).unwrap();
    let samples: Vec<(f64, f64)> = rep.rows.iter().map(|r| (r.n, r.sup_distance)).collect();
    let rows = diagonal_schedule(&[samples.clone()]).unwrap();
    let first = samples.iter().find(|s| s.1 < 1.0).unwrap();
    assert_eq!(rows[0].n, first.0);
}
