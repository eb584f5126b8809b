use num_complex::Complex64;
use proptest::prelude::*;
use tms_core::catalog;
use tms_core::numerics::{c, chordal, zeta8, LimitReport, Moebius};

fn z() -> impl Strategy<Value = Complex64> {
    (-50.0f64..50.0, -50.0f64..50.0).prop_map(|(x, y)| c(x, y))
}

fn moebius() -> impl Strategy<Value = Moebius> {
    (z(), z(), z(), z()).prop_filter_map("degenerate", |(a, b, cc, d)| {
        let det = a * d - b * cc;
        (det.norm() > 1.0).then(|| Moebius::new(a, b, cc, d).unwrap())
    })
}

proptest! {
    #[test]
    fn chordal_is_a_bounded_metric(x in z(), y in z(), w in z()) {
        prop_assert!((chordal(x, y) - chordal(y, x)).abs() < 1e-12);
        prop_assert!(chordal(x, y) <= 2.0 + 1e-12);
        prop_assert!(chordal(x, w) <= chordal(x, y) + chordal(y, w) + 1e-12);
    }

    #[test]
    fn inversion_is_a_chordal_isometry(x in z(), y in z()) {
        prop_assume!(x.norm() > 1e-3 && y.norm() > 1e-3);
        prop_assert!((chordal(x.inv(), y.inv()) - chordal(x, y)).abs() < 1e-9);
    }

    #[test]
    fn moebius_group_laws(m in moebius(), n in moebius(), x in z()) {
        let lhs = m.compose(&n).apply(x);
        let rhs = m.apply(n.apply(x));
        prop_assert!(chordal(lhs, rhs) < 1e-6);
        prop_assert!(chordal(m.inverse().apply(m.apply(x)), x) < 1e-6);
        let det = m.a * m.d - m.b * m.c;
        prop_assert!((det - c(1.0, 0.0)).norm() < 1e-9);
    }
}

fn run(entry: &str, id: &str, n_list: &[f64]) -> LimitReport {
    let e = catalog::get(entry).unwrap();
    let mut ch = e.numeric_checks.iter().find(|x| x.id == id).unwrap().clone();
    ch.n_list = n_list.to_vec();
    ch.run(e.family.unwrap()).unwrap()
}

#[test]
fn cubic_rescaling_error_is_eight_over_root_n() {
    let ns = [1e4, 1e6, 1e8];
    let rep = run("surgery-k1", "fixed", &ns);
    assert!(rep.pass);
    let col = rep.column(0);
    for (n, d) in ns.iter().zip(&col) {
        let want = 8.0 / n.sqrt();
        assert!((d - want).abs() / want < 0.2, "n={n}: {d} vs {want}");
    }
    // independent: the rescaled map is n^(-1/2) w^3 + 1/w^3 + zeta8, worst on |w| = 2
    for (n, d) in ns.iter().zip(&col) {
        let mut worst = 0.0f64;
        for k in 0..4096 {
            let w = Complex64::from_polar(2.0, std::f64::consts::TAU * k as f64 / 4096.0);
            let limit = w.powi(3).inv() + zeta8();
            worst = worst.max(chordal(limit + w.powi(3) / n.sqrt(), limit));
        }
        assert!((worst - d).abs() / worst < 0.01, "n={n}: {d} vs {worst}");
    }
}

#[test]
fn godillon_limit_error_bound() {
    let ns = [1e2, 1e3, 1e4, 1e5];
    let rep = run("godillon-3", "limit", &ns);
    let col = rep.column(0);
    for (n, d) in ns.iter().zip(&col) {
        assert!(*d <= (1.0 + 1e-9) / (0.1 * n - 1.0), "n={n}: {d}");
    }
    assert!(col.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn mcmullen_limit_error_scales_like_one_over_n() {
    let ns = [1e3, 1e4, 1e5, 1e6];
    let rep = run("mcmullen", "limit", &ns);
    let scaled: Vec<f64> = ns.iter().zip(rep.column(0)).map(|(n, d)| n * d).collect();
    for w in scaled.windows(2) {
        assert!((w[1] - w[0]).abs() / w[0] < 0.2, "{scaled:?}");
    }
    // |1/(n z^3)| is largest at |z| = 1
    assert!((scaled[3] - 1.0).abs() < 0.2, "{scaled:?}");
}
