//! Browser bindings: analyze a family, read one Walsh row, check a CCZ witness.

use std::sync::Arc;

use serde_json::json;
use wasm_bindgen::prelude::*;

use vbf_core::constructions::{theorem12_ccz_witness, Family, FamilySpec, GcdMode};
use vbf_core::report::AnalysisReport;
use vbf_core::spectra;
use vbf_core::{FieldCtx, FuncTable};

/// Largest field the page accepts; keeps each call well under a second.
pub const MAX_M: u32 = 12;

fn field(m: u32) -> Result<Arc<FieldCtx>, String> {
    if m > MAX_M {
        return Err(format!("m must be at most {MAX_M} in the browser, got m={m}"));
    }
    FieldCtx::new(m, None).map(Arc::new).map_err(|e| e.to_string())
}

/// Build a family instance; `relaxed` accepts gcd(i, m) > 1 where allowed.
pub fn build(family: &str, m: u32, i: Option<u32>, n: Option<u32>, relaxed: bool) -> Result<FuncTable, String> {
    let ctx = field(m)?;
    let family: Family = family.parse().map_err(|e: vbf_core::Error| e.to_string())?;
    let mut spec = FamilySpec::new(family, m);
    spec.i = i;
    spec.n = n;
    spec.gcd_mode = if relaxed { GcdMode::Relaxed } else { GcdMode::Strict };
    spec.build(&ctx).map_err(|e| e.to_string())
}

/// The JSON analysis report of a family instance.
pub fn analyze_json(family: &str, m: u32, i: Option<u32>, n: Option<u32>, relaxed: bool) -> Result<String, String> {
    let f = build(family, m, i, n, relaxed)?;
    AnalysisReport::analyze(&f).map(|r| r.to_json()).map_err(|e| e.to_string())
}

/// `lambda(a, b)` for all `a`, with `b` fixed.
pub fn walsh_values(
    family: &str,
    m: u32,
    i: Option<u32>,
    n: Option<u32>,
    relaxed: bool,
    b: u32,
) -> Result<Vec<i32>, String> {
    let f = build(family, m, i, n, relaxed)?;
    if b >= f.ctx().size() as u32 {
        return Err(format!("b must be below 2^{m}"));
    }
    let row = spectra::walsh_row(&f, b).map_err(|e| e.to_string())?;
    Ok(row.into_iter().map(|v| v as i32).collect())
}

/// Checks on the graph map from the Gold function to the `which`-th
/// construction (1: odd `m`, 2: even `m`), scaled by `a`.
pub fn witness_json(which: u32, m: u32, i: u32, a: u32) -> Result<String, String> {
    let ctx = field(m)?;
    let check = theorem12_ccz_witness(&ctx, which, i, a).map_err(|e| e.to_string())?;
    let gold = FuncTable::power(&ctx, (1u64 << i) + 1);
    let image = vbf_core::ccz::ccz_transform(&check.witness.map, &gold).map_err(|e| e.to_string())?;
    let target = build(if which == 1 { "thm1" } else { "thm2" }, m, Some(i), None, false)?;
    let scale = ctx.pow(a, (1u64 << i) + 1);
    let a_inv = ctx.inv(a).map_err(|e| e.to_string())?;
    let matches = ctx.elements().all(|x| image.get(x) == ctx.mul(scale, target.get(ctx.mul(x, a_inv))));
    let value = json!({
        "map_involution": check.map_involution,
        "f1_involution": check.f1_involution,
        "scaling_identity": check.scaling_identity,
        "all_hold": check.all_hold(),
        "image_matches_construction": matches,
        "image_degree": vbf_core::vbf::algebraic_degree(&image),
        "source_degree": vbf_core::vbf::algebraic_degree(&gold),
    });
    Ok(serde_json::to_string_pretty(&value).expect("json value serializes"))
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub fn analyze(family: &str, m: u32, i: Option<u32>, n: Option<u32>, relaxed: bool) -> Result<String, JsError> {
    analyze_json(family, m, i, n, relaxed).map_err(js)
}

#[wasm_bindgen(js_name = walshRow)]
pub fn walsh_row(
    family: &str,
    m: u32,
    i: Option<u32>,
    n: Option<u32>,
    relaxed: bool,
    b: u32,
) -> Result<Vec<i32>, JsError> {
    walsh_values(family, m, i, n, relaxed, b).map_err(js)
}

#[wasm_bindgen(js_name = checkWitness)]
pub fn check_witness(which: u32, m: u32, i: u32, a: u32) -> Result<String, JsError> {
    witness_json(which, m, i, a).map_err(js)
}
