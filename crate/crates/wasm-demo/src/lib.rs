//! Browser demo: three small computations exposed through `wasm-bindgen`.
//!
//! Each export has a plain Rust twin returning `Result<String, String>` so
//! the logic is tested natively; the exports only convert the error.

use quartic_core::census::{census, pluecker_check, DEFAULT_CAP};
use quartic_core::curve::count_points;
use quartic_core::field::FiniteField;
use quartic_core::quartic::TernaryQuartic;
use quartic_core::{theta, umbral};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest prime accepted by the census demo.
pub const MAX_DEMO_PRIME: u32 = 97;

/// Largest genus offered by the theta demo.
pub const MAX_DEMO_GENUS: u32 = 5;

fn curve(family: &str, p: u32, seed: u32) -> Result<TernaryQuartic<FiniteField>, String> {
    let field = FiniteField::prime(p as u64).map_err(|e| e.to_string())?;
    Ok(match family {
        "fermat" => TernaryQuartic::fermat(field),
        "klein" => TernaryQuartic::klein(field),
        "random" => TernaryQuartic::random_smooth(field, &mut ChaCha8Rng::seed_from_u64(seed as u64)),
        other => return Err(format!("unknown family {other:?}")),
    })
}

/// Points over `F_p` and the bitangent/flex census, escalating the field
/// up to the default cap.
pub fn census_json(family: &str, p: u32, seed: u32) -> Result<String, String> {
    if p > MAX_DEMO_PRIME {
        return Err(format!("p = {p} is above the demo limit {MAX_DEMO_PRIME}"));
    }
    let f = curve(family, p, seed)?;
    let points = count_points(&f);
    let report = census(&f, 1, true, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let verdict = pluecker_check(&report);
    Ok(json!({
        "field": report.field.to_string(),
        "points": points,
        "delta1": report.delta1,
        "delta2": report.delta2,
        "kappa": report.kappa,
        "completeness": report.completeness,
        "pluecker": verdict.outcome,
    })
    .to_string())
}

pub fn theta_json(g: u32) -> Result<String, String> {
    if g > MAX_DEMO_GENUS {
        return Err(format!("genus {g} is above the demo limit {MAX_DEMO_GENUS}"));
    }
    let c = theta::parity_counts(g as usize).map_err(|e| e.to_string())?;
    Ok(json!({"g": c.g, "even": c.even, "odd": c.odd}).to_string())
}

pub fn umbral_json(expr: &str) -> Result<String, String> {
    let e = umbral::expand_text(expr).map_err(|e| e.to_string())?;
    Ok(json!({
        "terms": e.polynomial.len(),
        "u_degree": e.u_degree,
        "coefficient_degree": e.coefficient_degree,
        "expansion": e.polynomial.display(),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn census_summary(family: &str, p: u32, seed: u32) -> Result<String, JsValue> {
    census_json(family, p, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn theta_counts(g: u32) -> Result<String, JsValue> {
    theta_json(g).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn umbral_expand(expr: &str) -> Result<String, JsValue> {
    umbral_json(expr).map_err(|e| JsValue::from_str(&e))
}
