//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes and returns JSON strings. The `*_json` functions hold
//! the logic and are plain Rust so they can be tested natively.

use serde_json::{json, Value};
use toricprec_core::catalog;
use toricprec_core::io::{parse_f64_list, parse_rational_list, PolytopeDoc};
use toricprec_core::moment::{lattice_distance_lift, mu_fs, mu_quot, QUOT_TOL};
use toricprec_core::polyalg::{format_rational, rat, Rational, Scalar};
use toricprec_core::polytope::LatticePolytope;
use toricprec_core::precision::{check_slp, k_w_eval, normalized_blending, solve_slp_weights};
use wasm_bindgen::prelude::*;

type Res = std::result::Result<String, String>;

fn load(doc: &str) -> std::result::Result<(LatticePolytope, Vec<Rational>), String> {
    let doc = PolytopeDoc::from_json(doc).map_err(|e| e.to_string())?;
    let (p, w) = doc.load().map_err(|e| e.to_string())?;
    let w = w.unwrap_or_else(|| vec![rat(1); p.num_points()]);
    Ok((p, w))
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn floats(v: &[Rational]) -> Vec<f64> {
    v.iter().map(Scalar::as_f64).collect()
}

/// Polytope document for a named fixture; `params` is space-separated.
pub fn catalog_doc_json(name: &str, params: &str) -> Res {
    let params: Vec<&str> = params.split_whitespace().collect();
    let f = catalog::by_name(name, &params).map_err(|e| e.to_string())?;
    Ok(PolytopeDoc::from_fixture(&f).to_json())
}

/// Strict linear precision of the document's weights, plus solved weights.
pub fn slp_check_json(doc: &str) -> Res {
    let (p, w) = load(doc)?;
    let r = check_slp(&p, &w).map_err(|e| e.to_string())?;
    let solved = solve_slp_weights(&p).weights().map(strings);
    let out = json!({
        "lattice_points": p.lattice_points(),
        "weights": strings(&w),
        "n_P": r.n_p,
        "beta_w": r.beta_w.to_string(),
        "constant": r.constant_c.as_ref().map(format_rational),
        "verdict": r.verdict,
        "solved_weights": solved,
    });
    Ok(out.to_string())
}

/// Blending functions, `K_w(p)` and the lattice-distance lift at an interior
/// point `p` given as comma-separated rationals.
pub fn blending_json(doc: &str, p: &str) -> Res {
    let (poly, w) = load(doc)?;
    let x = parse_rational_list(p).map_err(|e| e.to_string())?;
    if !poly.is_interior(&x) {
        return Err("point must lie in the interior of the polytope".into());
    }
    let b = normalized_blending(&poly, &w, &x).map_err(|e| e.to_string())?;
    let k = k_w_eval(&poly, &w, &x).map_err(|e| e.to_string())?;
    let lift = lattice_distance_lift(&poly, &x).map_err(|e| e.to_string())?;
    let out = json!({
        "blending": strings(&b),
        "blending_float": floats(&b),
        "k_w": strings(&k),
        "k_w_float": floats(&k),
        "lift": strings(&lift),
    });
    Ok(out.to_string())
}

/// Both moment maps at torus moduli `q` given as comma-separated floats.
pub fn moment_maps_json(doc: &str, q: &str) -> Res {
    let (p, w) = load(doc)?;
    let q = parse_f64_list(q).map_err(|e| e.to_string())?;
    let fs = mu_fs(&p, &w, &q).map_err(|e| e.to_string())?;
    let quot = mu_quot(&p, &q, QUOT_TOL).map_err(|e| e.to_string())?;
    let gap = fs
        .iter()
        .zip(&quot)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let out: Value = json!({ "fs": fs, "quot": quot, "gap": gap });
    Ok(out.to_string())
}

fn js(r: Res) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn catalog_doc(name: &str, params: &str) -> std::result::Result<String, JsValue> {
    js(catalog_doc_json(name, params))
}

#[wasm_bindgen]
pub fn slp_check(doc: &str) -> std::result::Result<String, JsValue> {
    js(slp_check_json(doc))
}

#[wasm_bindgen]
pub fn blending(doc: &str, p: &str) -> std::result::Result<String, JsValue> {
    js(blending_json(doc, p))
}

#[wasm_bindgen]
pub fn moment_maps(doc: &str, q: &str) -> std::result::Result<String, JsValue> {
    js(moment_maps_json(doc, q))
}
