//! wasm-bindgen exports for the static page in `www/`.
//!
//! The real work lives in [`ops`], which is plain Rust and tested natively;
//! the exported wrappers only turn error strings into JS exceptions.

pub mod ops;

use wasm_bindgen::prelude::*;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Meridional character of a residue tuple at an integer meridian.
#[wasm_bindgen]
pub fn meridional_character(residues: &str, meridian: &str) -> Result<String, JsValue> {
    js(ops::character(residues, meridian))
}

/// Sampled transport path for `y' = -i a y`, as interleaved `re, im`.
#[wasm_bindgen]
pub fn transport_path(a: &str, steps: u32, samples: u32) -> Result<Vec<f64>, JsValue> {
    ops::transport(a, steps as usize, samples as usize).map_err(|e| JsValue::from_str(&e))
}

/// Endpoint of the integration and the exact character, separated by a newline.
#[wasm_bindgen]
pub fn transport_endpoint(a: &str, steps: u32) -> Result<String, JsValue> {
    js(ops::transport_endpoint(a, steps as usize).map(|(y, c)| format!("{y}\n{c}")))
}

/// Bivector, log Hamiltonians and checks for an L(1,1,1,1) weight tuple.
#[wasm_bindgen]
pub fn l1111_hamiltonians(weights: &str) -> Result<String, JsValue> {
    js(ops::l1111(weights))
}
