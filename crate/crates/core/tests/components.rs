use tms_core::catalog;
use tms_core::components::{census_with, post_critical_count, post_critical_count_numeric, ModelKind};
use tms_core::surgery::cantor_tower;

fn schemes() -> Vec<(String, tms_core::scheme::TreeMappingScheme)> {
    let mut out: Vec<_> = catalog::NAMES.iter().map(|n| (n.to_string(), catalog::get(n).unwrap().scheme)).collect();
    for k in 0..=2 {
        out.push((format!("tower-{k}"), cantor_tower(k).unwrap().scheme));
    }
    out
}

#[test]
fn portrait_counts_agree_with_iteration() {
    let mut checked = 0;
    for (name, s) in schemes() {
        let c = census_with(&s, s.tree.v0().len(), 2).unwrap();
        for m in &c.models {
            let Some(model) = &m.model else { continue };
            let n = post_critical_count_numeric(model).unwrap();
            assert_eq!(m.n, n, "{name} at {:?}", m.point);
            if m.kind == ModelKind::VertexModel {
                assert_eq!(post_critical_count(&s, &m.cycle), n);
                checked += 1;
            }
        }
    }
    assert!(checked >= 15);
}

#[test]
fn jordan_models_have_two_postcritical_points() {
    let s = catalog::get("cantor-z3").unwrap().scheme;
    let c = census_with(&s, 2, 2).unwrap();
    let jordan: Vec<_> = c.models.iter().filter(|m| m.kind == ModelKind::JordanModel).collect();
    // the fixed point 3/4 and the 2-cycle {3/10, 9/10}
    assert_eq!(jordan.len(), 2);
    assert_eq!(jordan[0].model_degree, 3);
    assert_eq!(jordan[1].model_degree, 9);
    assert!(jordan.iter().all(|m| m.n == 2 && !m.complex_type));
}

#[test]
fn godillon_model_orbit() {
    let s = catalog::get("godillon-3").unwrap().scheme;
    let c = census_with(&s, 1, 1).unwrap();
    let a = c.models.iter().find(|m| m.kind == ModelKind::VertexModel && m.model_degree == 2).unwrap();
    assert_eq!(a.n, 3);
    assert!(a.complex_type);
}

#[test]
fn census_json_shape() {
    let s = catalog::get("mcmullen").unwrap().scheme;
    let j = census_with(&s, 2, 2).unwrap().to_json();
    for m in j["models"].as_array().unwrap() {
        for key in ["point", "period", "kind", "model_degree", "N", "complex_type"] {
            assert!(m.get(key).is_some(), "{key}");
        }
    }
    assert_eq!(j["complex_cycles"], 0);
}
