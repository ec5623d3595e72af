//! Browser bindings. Each export has a plain Rust twin returning
//! `Result<String, String>` so the logic is testable off-wasm.

use musical_icosahedron::diagrams::{permutation_circle_svg, projection_svg_with_pairs, RagaType};
use musical_icosahedron::extension::{extend_union, raga_types};
use musical_icosahedron::invariants::neighboring_number;
use musical_icosahedron::tones::{catalog, melakarta_for_set};
use musical_icosahedron::{named_type, InterMask, Scale};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn scale(key: &str) -> Scale {
    catalog(key).expect("built-in catalog key")
}

/// Projection of a built-in type after swapping the given slots, plus its
/// neighboring numbers for chromatic / W1 / W2.
pub fn projection_json(base: &str, mask: &str) -> Result<String, String> {
    let mask = mask.parse::<InterMask>().map_err(|e| e.to_string())?;
    let x = named_type(base)
        .map_err(|e| e.to_string())?
        .apply_inter(mask);
    let n = |key: &str| neighboring_number(&scale(key), &x);
    Ok(json!({
        "svg": projection_svg_with_pairs(&x, mask),
        "mask": mask.to_string(),
        "n_chromatic": n("chromatic"),
        "n_w1": n("W1"),
        "n_w2": n("W2"),
    })
    .to_string())
}

/// Permutation-circle diagram of type `raga_type` after swapping `mask`.
pub fn circles_json(raga_type: &str, mask: &str) -> Result<String, String> {
    let n = raga_type.parse::<RagaType>().map_err(|e| e.to_string())?;
    let mask = mask.parse::<InterMask>().map_err(|e| e.to_string())?;
    let d =
        permutation_circle_svg(n, &n.assignment().apply_inter(mask)).map_err(|e| e.to_string())?;
    Ok(json!({
        "svg": d.svg,
        "full": d.full_circles,
        "half": d.half_circles,
        "quarter": d.quarter_circles,
        "count": d.count.to_string(),
    })
    .to_string())
}

/// Melakarta lookup for a comma-separated tone list, with the (type, mask)
/// pairs that produce it from C major.
pub fn raga_json(tones: &str) -> Result<String, String> {
    let names: Vec<&str> = tones
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    let set = Scale::parse(&names).map_err(|e| e.to_string())?.tone_set();
    let extension = extend_union(&scale("c_major"), &raga_types());
    let witnesses: Vec<_> = extension
        .provenance(set)
        .into_iter()
        .flatten()
        .map(|p| json!({ "type": p.base, "mask": p.mask.to_string() }))
        .collect();
    let raga = melakarta_for_set(set);
    Ok(json!({
        "index": raga.map(|r| r.index),
        "name": raga.map(|r| r.name.clone()),
        "tones": raga.map(|r| r.tones.to_string()),
        "witnesses": witnesses,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn projection(base: &str, mask: &str) -> Result<String, JsError> {
    projection_json(base, mask).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn circles(raga_type: &str, mask: &str) -> Result<String, JsError> {
    circles_json(raga_type, mask).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn raga(tones: &str) -> Result<String, JsError> {
    raga_json(tones).map_err(|e| JsError::new(&e))
}
