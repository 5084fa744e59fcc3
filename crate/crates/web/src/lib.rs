//! Browser bindings: polynomial analysis, complex checking and witness
//! generation, each returning a JSON string for the page to render.

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use confun::invariants::{link_report, Invariant, Mode, DEFAULT_CAP};
use confun::io::ComplexFile;
use confun::polyops::{binomial_decompose, in_script_p, mod8_reduce, Polynomial};
use confun::witness::generate_witness;

fn error(e: impl ToString) -> Value {
    json!({ "error": e.to_string() })
}

/// Membership in 𝒫, binomial coordinates and, when in 𝒫, the mod-8 reduction.
pub fn polynomial_report(coeffs: &str) -> Value {
    let p = match Polynomial::parse_coefficients(coeffs) {
        Ok(p) => p,
        Err(e) => return error(e),
    };
    let coords = binomial_decompose(&p)
        .ok()
        .map(|d| d.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    let mod8 = mod8_reduce(&p).ok().map(|r| {
        json!({"coordinates": r.coords, "residual": r.residual.to_string()})
    });
    json!({
        "polynomial": p.to_string(),
        "integer_valued": coords.is_some(),
        "binomial_coordinates": coords,
        "in_script_p": in_script_p(&p),
        "mod8": mod8,
    })
}

/// The link battery of a complex given in the file format.
pub fn complex_report(text: &str) -> Value {
    let loaded = match ComplexFile::parse(text).and_then(|f| f.load()) {
        Ok(l) => l,
        Err(e) => return error(e),
    };
    let k = loaded.complex;
    if k.dim() > 3 {
        return error(format!("dimension {} > 3; use the command-line checker", k.dim()));
    }
    match link_report(Arc::clone(&k), Mode::Extended, DEFAULT_CAP) {
        Ok(r) => json!({
            "name": loaded.name,
            "f_vector": k.f_vector(),
            "report": r,
            "nonzero_indices": r.nonzero.as_ref().and_then(|n| n.indices.as_ref())
                .map(|l| l.iter().map(|i| i.to_string()).collect::<Vec<_>>()),
        }),
        Err(e) => error(e),
    }
}

/// A verified witness: provenance plus the complex in the file format.
pub fn witness_report(index: &str) -> Value {
    let target: Invariant = match index.parse() {
        Ok(t) => t,
        Err(e) => return error(e),
    };
    match generate_witness(target) {
        Ok(w) => {
            let file = ComplexFile::from_complex(&format!("witness {target}"), &w.complex, None);
            json!({
                "target": target.to_string(),
                "provenance": w.provenance,
                "file": file.to_text(),
            })
        }
        Err(e) => error(e),
    }
}

#[wasm_bindgen]
pub fn analyze_polynomial(coeffs: &str) -> String {
    polynomial_report(coeffs).to_string()
}

#[wasm_bindgen]
pub fn check_complex(text: &str) -> String {
    complex_report(text).to_string()
}

#[wasm_bindgen]
pub fn witness(index: &str) -> String {
    witness_report(index).to_string()
}
