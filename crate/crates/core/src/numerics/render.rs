//! Julia set pictures as binary PPM.

use super::roots::{find_attracting_cycles, Cycle};
use super::{c, chordal, FloatMap, NumericError};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenderConfig {
    pub center: (f64, f64),
    /// Half the width of the view.
    pub scale: f64,
    pub width: usize,
    pub height: usize,
    pub max_iter: usize,
    /// Chordal radius around cycle points that counts as captured.
    pub attraction_radius: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig { center: (0.0, 0.0), scale: 2.0, width: 512, height: 512, max_iter: 500, attraction_radius: 1e-3 }
    }
}

pub struct Image {
    pub width: usize,
    pub height: usize,
    /// Per pixel: None for the Julia set, Some(cycle id) otherwise.
    pub classes: Vec<Option<usize>>,
    pub steps: Vec<u32>,
}

const PALETTE: [[u8; 3]; 6] =
    [[70, 130, 200], [235, 180, 60], [90, 170, 100], [200, 90, 90], [150, 110, 190], [110, 190, 190]];
/// Chordal radius where the distance estimate is read off.
const DE_RADIUS: f64 = 0.25;
const JULIA: [u8; 3] = [10, 10, 10];

impl Image {
    pub fn julia_fraction(&self) -> f64 {
        self.classes.iter().filter(|c| c.is_none()).count() as f64 / self.classes.len() as f64
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        for (cl, st) in self.classes.iter().zip(&self.steps) {
            match cl {
                None => out.extend_from_slice(&JULIA),
                Some(k) => {
                    let base = PALETTE[k % PALETTE.len()];
                    // shade by entry time
                    let t = 1.0 - 0.5 * ((*st as f64).ln_1p() / 6.0).min(1.0);
                    out.extend(base.iter().map(|&x| (x as f64 * t) as u8));
                }
            }
        }
        out
    }
}

fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("TMS_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        b = b.num_threads(n.max(1));
    }
    b.build().expect("thread pool")
}

/// Pixel classification: the first cycle whose attraction radius is entered.
/// A pixel whose distance estimate to the boundary is below half its chordal
/// size is drawn as Julia as well, so thin Julia sets stay visible.
pub fn classify(f: &FloatMap, cycles: &[Cycle], z0: Complex64, cfg: &RenderConfig, pixel: f64) -> (Option<usize>, u32) {
    let mut z = z0;
    let mut deriv = 1.0f64;
    let mut est: Option<f64> = None;
    for step in 0..cfg.max_iter {
        if est.is_none() && cycles.iter().any(|cy| cy.contains(z, DE_RADIUS)) {
            est = Some(DE_RADIUS / deriv);
        }
        for (k, cy) in cycles.iter().enumerate() {
            if cy.contains(z, cfg.attraction_radius) {
                let est = est.unwrap_or(cfg.attraction_radius / deriv);
                return if est < 0.5 * pixel { (None, step as u32) } else { (Some(k), step as u32) };
            }
        }
        if est.is_none() {
            deriv = (deriv * f.spherical_derivative(z)).clamp(1e-300, 1e300);
        }
        z = f.eval(z);
    }
    (None, cfg.max_iter as u32)
}

pub fn render_julia(f: &FloatMap, cfg: &RenderConfig) -> Result<Image, NumericError> {
    let search = find_attracting_cycles(f, 2000, 1e-10)?;
    Ok(render_with_cycles(f, &search.cycles, cfg))
}

pub fn render_with_cycles(f: &FloatMap, cycles: &[Cycle], cfg: &RenderConfig) -> Image {
    let (w, h) = (cfg.width, cfg.height);
    let step = 2.0 * cfg.scale / w as f64;
    let rows: Vec<Vec<(Option<usize>, u32)>> = thread_pool().install(|| {
        (0..h)
            .into_par_iter()
            .map(|j| {
                (0..w)
                    .map(|i| {
                        let x = cfg.center.0 - cfg.scale + (i as f64 + 0.5) * step;
                        let y = cfg.center.1 + (h as f64 / 2.0 - j as f64 - 0.5) * step;
                        let z = c(x, y);
                        let pixel = chordal(z, z + step);
                        classify(f, cycles, z, cfg, pixel)
                    })
                    .collect()
            })
            .collect()
    });
    let (classes, steps) = rows.into_iter().flatten().unzip();
    Image { width: w, height: h, classes, steps }
}
