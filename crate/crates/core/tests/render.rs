use std::time::Instant;
use tms_core::numerics::render::{render_julia, RenderConfig};
use tms_core::numerics::{c, Family, FloatMap};
use tms_core::poly::Poly;

fn square() -> FloatMap {
    FloatMap::new(Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]), Poly::new(vec![c(1.0, 0.0)]))
}

fn pixel_center(cfg: &RenderConfig, i: usize, j: usize) -> (f64, f64) {
    let step = 2.0 * cfg.scale / cfg.width as f64;
    (
        cfg.center.0 - cfg.scale + (i as f64 + 0.5) * step,
        cfg.center.1 + (cfg.height as f64 / 2.0 - j as f64 - 0.5) * step,
    )
}

#[test]
fn unit_circle_within_one_pixel() {
    let cfg = RenderConfig::default();
    let img = render_julia(&square(), &cfg).unwrap();
    let step = 2.0 * cfg.scale / cfg.width as f64;
    let mut count = 0;
    for j in 0..cfg.height {
        for i in 0..cfg.width {
            if img.classes[j * cfg.width + i].is_none() {
                let (x, y) = pixel_center(&cfg, i, j);
                let off = ((x * x + y * y).sqrt() - 1.0).abs();
                assert!(off <= step, "Julia pixel at r - 1 = {off}");
                count += 1;
            }
        }
    }
    // the circle is drawn unbroken: at least one pixel per pixel of arc length
    let arc = 2.0 * std::f64::consts::PI / step;
    assert!(count as f64 >= arc, "{count} pixels for arc length {arc}");
}

#[test]
fn mcmullen_fraction_is_resolution_stable() {
    let f = Family::McMullen.map(1e4);
    let t = Instant::now();
    let big = render_julia(&f, &RenderConfig::default()).unwrap();
    let elapsed = t.elapsed();
    let small = render_julia(&f, &RenderConfig { width: 256, height: 256, ..Default::default() }).unwrap();
    let (a, b) = (big.julia_fraction(), small.julia_fraction());
    assert!((0.01..=0.30).contains(&a), "fraction {a}");
    assert!((a - b).abs() < 0.05, "512: {a}, 256: {b}");
    assert!(elapsed.as_secs_f64() < 10.0, "{elapsed:?}");
}

#[test]
fn rendering_is_deterministic() {
    let f = Family::BasilicaCantor.map(1e3);
    let cfg = RenderConfig { width: 128, height: 96, ..Default::default() };
    let a = render_julia(&f, &cfg).unwrap();
    let b = render_julia(&f, &cfg).unwrap();
    assert_eq!(a.to_ppm(), b.to_ppm());
    assert!(a.to_ppm().starts_with(b"P6\n128 96\n255\n"));
}
