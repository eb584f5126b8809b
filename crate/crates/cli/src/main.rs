use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tms_core::arith::fmt_rat;
use tms_core::catalog::{self, CheckKind};
use tms_core::components;
use tms_core::numerics::render::{render_julia, RenderConfig};
use tms_core::numerics::{Family, FloatMap};
use tms_core::rational::RationalMap;
use tms_core::scheme::{format, TreeMappingScheme};
use tms_core::surgery;
use tms_core::tree::TreePoint;
use tms_core::validate::reduce::{check_irreducible, reduce_to_irreducible};
use tms_core::validate::{check_hpcf, Mode, ValidateOptions};
use tms_core::value::ComplexValue;

// a closed pipe downstream is not an error
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "tms", version, about = "Tree mapping schemes for hyperbolic rational maps")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the six conditions; exit 0 iff all pass.
    Validate {
        file: PathBuf,
        /// Stop at the first failing condition.
        #[arg(long)]
        lenient: bool,
        /// Also check irreducibility.
        #[arg(long)]
        irreducible: bool,
    },
    /// Reduce to the irreducible scheme.
    Reduce {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Periodic points of the tree map.
    Periodic {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_period: usize,
    },
    /// Periodic Julia components with their models.
    Census {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_period: usize,
        /// Cap for interior (Jordan) orbits; defaults to max-period.
        #[arg(long)]
        interior_max_period: Option<usize>,
    },
    /// The bound Σ(N − 2) ≤ N_f − 2; exit 0 iff it holds.
    Bound { file: PathBuf },
    /// Build a tower level.
    Surgery {
        #[arg(long, value_enum)]
        tower: Tower,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Render a Julia set to a binary PPM.
    Render {
        /// Catalog entry, j-conjugate-JK, or a JSON map file {"num": [...], "den": [...]}.
        target: String,
        #[arg(long, default_value_t = 1e4, value_parser = parse_positive)]
        n: f64,
        #[arg(long, default_value = "512x512", value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long, default_value = "0,0")]
        center: String,
        #[arg(long, default_value_t = 2.0, value_parser = parse_positive)]
        scale: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a catalog numeric check over a list of n.
    Rescale {
        name: String,
        #[arg(long)]
        check: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_positive)]
        n_list: Option<Vec<f64>>,
    },
    /// The catalog of worked examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Verify,
    /// Write every entry as NAME.tms into a directory.
    Export { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Tower {
    Cantor,
    Godillon,
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("must be positive: {s}"))
    }
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("size is WxH")?;
    let w: usize = w.parse().map_err(|_| "bad width")?;
    let h: usize = h.parse().map_err(|_| "bad height")?;
    if w == 0 || h == 0 {
        return Err("size must be positive".into());
    }
    Ok((w, h))
}

/// Error with exit code.
struct Fail(u8, String);

fn usage(m: impl Into<String>) -> Fail {
    Fail(2, m.into())
}

fn internal(m: impl Into<String>) -> Fail {
    Fail(3, m.into())
}

fn load(path: &Path) -> Result<TreeMappingScheme, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Fail> {
    std::fs::write(path, bytes).map_err(|e| internal(format!("{}: {e}", path.display())))
}

fn point_text(p: &TreePoint) -> String {
    match p {
        TreePoint::Vertex(v) => format!("v{v}"),
        TreePoint::Interior { edge, offset } => format!("e{edge}+{}", fmt_rat(offset)),
    }
}

fn print_json(v: &serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: Cli) -> Result<u8, Fail> {
    let js = cli.json;
    match cli.cmd {
        Cmd::Validate { file, lenient, irreducible } => {
            let s = load(&file)?;
            let opts = ValidateOptions { mode: if lenient { Mode::Lenient } else { Mode::Strict }, ..Default::default() };
            let mut rep = check_hpcf(&s, &opts);
            if irreducible {
                rep.entries.extend(check_irreducible(&s).entries);
            }
            if js {
                print_json(&json!({ "pass": rep.pass(), "entries": rep.entries }));
            } else {
                out!("{}", rep.to_text());
            }
            Ok(if rep.pass() { 0 } else { 1 })
        }
        Cmd::Reduce { file, output } => {
            let s = load(&file)?;
            let r = reduce_to_irreducible(&s).map_err(|e| Fail(1, e.to_string()))?;
            write(&output, format::serialize(&r).as_bytes())?;
            let (n0, n1) = (s.tree.num_vertices(), r.tree.num_vertices());
            if js {
                print_json(&json!({ "vertices_before": n0, "vertices_after": n1, "output": output }));
            } else {
                outln!("reduced {n0} -> {n1} vertices; wrote {}", output.display());
            }
            Ok(0)
        }
        Cmd::Periodic { file, max_period } => {
            let s = load(&file)?;
            let mut rows = Vec::new();
            for p in 1..=max_period {
                let pp = s.map.periodic_points(&s.tree, p).map_err(|e| Fail(1, e.to_string()))?;
                for c in pp.vertex_cycles {
                    rows.push(json!({ "period": p, "kind": "vertex", "orbit": c.iter().map(|v| format!("v{v}")).collect::<Vec<_>>() }));
                }
                for o in pp.orbits {
                    rows.push(json!({
                        "period": p,
                        "kind": "interior",
                        "orbit": o.orbit.iter().map(point_text).collect::<Vec<_>>(),
                        "multiplier": o.multiplier.to_string(),
                    }));
                }
            }
            if js {
                print_json(&json!({ "max_period": max_period, "orbits": rows }));
            } else {
                for r in &rows {
                    let orbit: Vec<&str> = r["orbit"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
                    let mult = r.get("multiplier").and_then(|m| m.as_str()).map(|m| format!("  multiplier {m}")).unwrap_or_default();
                    outln!("period {} {:<8} {}{mult}", r["period"], r["kind"].as_str().unwrap(), orbit.join(" -> "));
                }
            }
            Ok(0)
        }
        Cmd::Census { file, max_period, interior_max_period } => {
            let s = load(&file)?;
            let c = components::census_with(&s, max_period, interior_max_period.unwrap_or(max_period))
                .map_err(|e| Fail(1, e.to_string()))?;
            if js {
                print_json(&c.to_json());
            } else {
                out!("{}", c.to_table());
            }
            Ok(0)
        }
        Cmd::Bound { file } => {
            let s = load(&file)?;
            let v0 = s.tree.v0().len();
            let c = components::census_with(&s, v0, 1).map_err(|e| Fail(1, e.to_string()))?;
            let (holds, slack) = components::verify_bound(&c);
            let lhs: i64 = c.models.iter().map(|m| m.n as i64 - 2).sum();
            if js {
                print_json(&json!({ "holds": holds, "slack": slack, "lhs": lhs, "N_f": c.fatou.n_f, "complex_cycles": c.complex_cycle_count() }));
            } else {
                outln!(
                    "sum(N-2) = {lhs}, N_f - 2 = {}: {} (slack {slack})",
                    c.fatou.n_f as i64 - 2,
                    if holds { "holds" } else { "violated" }
                );
            }
            Ok(if holds { 0 } else { 1 })
        }
        Cmd::Surgery { tower, level, degree, output } => {
            let s = match tower {
                Tower::Cantor => surgery::cantor_tower(level).map_err(|e| Fail(1, e.to_string()))?.scheme,
                Tower::Godillon => {
                    if degree < 3 {
                        return Err(usage("degree must be at least 3"));
                    }
                    surgery::godillon_scheme(degree)
                }
            };
            write(&output, format::serialize(&s).as_bytes())?;
            if js {
                print_json(&json!({ "vertices": s.tree.num_vertices(), "output": output }));
            } else {
                outln!("wrote {} ({} vertices)", output.display(), s.tree.num_vertices());
            }
            Ok(0)
        }
        Cmd::Render { target, n, size, center, scale, max_iter, output } => {
            let f = render_target(&target, n)?;
            let center = ComplexValue::parse(&center)
                .ok()
                .and_then(|z| z.to_c64())
                .ok_or_else(|| usage(format!("bad center {center}")))?;
            let cfg = RenderConfig {
                center: (center.re, center.im),
                scale,
                width: size.0,
                height: size.1,
                max_iter,
                ..Default::default()
            };
            let img = render_julia(&f, &cfg).map_err(|e| internal(e.to_string()))?;
            write(&output, &img.to_ppm())?;
            if js {
                print_json(&json!({ "output": output, "julia_fraction": img.julia_fraction(), "width": size.0, "height": size.1 }));
            } else {
                outln!("wrote {} ({}x{}), julia fraction {:.4}", output.display(), size.0, size.1, img.julia_fraction());
            }
            Ok(0)
        }
        Cmd::Rescale { name, check, n_list } => {
            let e = catalog::get(&name).map_err(|e| usage(e.to_string()))?;
            let fam = e.family.ok_or_else(|| usage(format!("{name} has no family")))?;
            let mut ch = e
                .numeric_checks
                .iter()
                .find(|c| c.id == check)
                .cloned()
                .ok_or_else(|| usage(format!("{name} has no check {check:?}")))?;
            if let Some(ns) = n_list {
                ch.n_list = ns;
            }
            let rep = ch.run(fam).map_err(|e| Fail(1, e.to_string()))?;
            if js {
                let kind = match ch.kind {
                    CheckKind::Limit { .. } => "limit",
                    CheckKind::Rescale { .. } => "rescale",
                };
                print_json(&json!({ "entry": name, "check": check, "kind": kind, "report": rep }));
            } else {
                out!("{}", rep.to_csv());
                for n in &rep.notes {
                    outln!("# {n}");
                }
                outln!("# {}", if rep.pass { "pass" } else { "fail" });
            }
            Ok(if rep.pass { 0 } else { 1 })
        }
        Cmd::Catalog { action } => match action {
            CatalogCmd::List => {
                if js {
                    print_json(&json!(catalog::list()));
                } else {
                    for n in catalog::list() {
                        outln!("{n}");
                    }
                }
                Ok(0)
            }
            CatalogCmd::Verify => {
                let rep = catalog::verify_all();
                if js {
                    print_json(&serde_json::to_value(&rep).expect("json"));
                } else {
                    out!("{}", rep.to_text());
                }
                Ok(if rep.pass { 0 } else { 1 })
            }
            CatalogCmd::Export { dir } => {
                std::fs::create_dir_all(&dir).map_err(|e| internal(e.to_string()))?;
                for n in catalog::list() {
                    let e = catalog::get(n).expect("known");
                    write(&dir.join(format!("{n}.tms")), format::serialize(&e.scheme).as_bytes())?;
                }
                if !js {
                    outln!("wrote {} entries to {}", catalog::NAMES.len(), dir.display());
                } else {
                    print_json(&json!({ "entries": catalog::list(), "dir": dir }));
                }
                Ok(0)
            }
        },
    }
}

fn render_target(target: &str, n: f64) -> Result<FloatMap, Fail> {
    if let Ok(e) = catalog::get(target) {
        let fam = e.family.ok_or_else(|| usage(format!("{target} has no family")))?;
        return Ok(fam.map(n));
    }
    if let Some(jk) = target.strip_prefix("j-conjugate-") {
        let d: Vec<u8> = jk.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        if d.len() == 2 && d.iter().all(|&x| x < 3) {
            return Ok(Family::JConjugate(d[0], d[1]).map(n));
        }
        return Err(usage("j-conjugate takes two digits in 0..3, e.g. j-conjugate-01"));
    }
    let text = std::fs::read_to_string(target).map_err(|e| usage(format!("{target}: not a catalog entry or file ({e})")))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(format!("{target}: {e}")))?;
    let coeffs = |key: &str| -> Result<Vec<Complex64>, Fail> {
        v.get(key)
            .and_then(|a| a.as_array())
            .ok_or_else(|| usage(format!("{target}: missing {key}")))?
            .iter()
            .map(|x| {
                x.as_str()
                    .and_then(|s| ComplexValue::parse(s).ok())
                    .and_then(|z| z.to_c64())
                    .ok_or_else(|| usage(format!("{target}: bad coefficient {x}")))
            })
            .collect()
    };
    let (num, den) = (coeffs("num")?, coeffs("den")?);
    let deg = num.len().max(den.len()).saturating_sub(1) as u32;
    let r = RationalMap::from_approx(
        tms_core::poly::Poly(num),
        tms_core::poly::Poly(den),
        tms_core::value::DEFAULT_TOL,
        deg,
    );
    Ok(FloatMap::from_rational(&r))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
