#[path = "support/hurwitz.rs"]
mod oracle;

use oracle::*;
use tms_core::validate::hurwitz::{hurwitz_realizable, Hurwitz, HurwitzData};

#[test]
fn three_three_is_realizable() {
    let h = HurwitzData { degree: 3, branch_data: vec![vec![3], vec![3]] };
    match hurwitz_realizable(&h, 6) {
        Hurwitz::Realizable(p) => {
            let p: Vec<Perm> = p;
            assert!(is_realization(&h, &p));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn odd_parity_rejected_without_search() {
    // bound 0 forbids any search
    let h = HurwitzData { degree: 5, branch_data: vec![vec![2, 1, 1, 1], vec![5], vec![3, 1, 1]] };
    assert_eq!(h.branching() % 2, 1);
    assert!(matches!(hurwitz_realizable(&h, 0), Hurwitz::NotRealizable(_)));
}

#[test]
fn known_exception_is_rejected() {
    let h = HurwitzData { degree: 4, branch_data: vec![vec![2, 2], vec![2, 2], vec![3, 1]] };
    assert!(necessary(&h));
    assert!(!brute_force(&h));
    assert!(matches!(hurwitz_realizable(&h, 6), Hurwitz::NotRealizable(_)));
}

#[test]
fn randomized_suite_agrees_with_brute_force() {
    let (realizable, exceptions) = random_suite(0x7a5).unwrap();
    assert!(realizable >= 20, "suite too thin: {realizable} realizable");
    eprintln!("realizable {realizable}, exceptional {exceptions}");
}
