//! wasm-bindgen entry points for the static page in `www/`.

use gensem::fixpoint::{transitive_closure_fp, BinaryRelation, RelationSpec};
use gensem::henkin::tau_translate;
use gensem::io::{load_modal_model, show_worlds, LoadedModel};
use gensem::modal::symbolic::StandardLfp;
use gensem::modal::{extension_with, Semantics};
use gensem::syntax::{parse_modal, parse_mso};
use std::collections::BTreeMap;
use wasm_bindgen::prelude::*;

/// Both least fixed points of `formula` in the model given as JSON.
pub fn lfp_report(model: &str, formula: &str) -> Result<String, String> {
    let f = parse_modal(formula).map_err(|e| e.to_string())?;
    match load_modal_model(model, None).map_err(|e| e.to_string())? {
        LoadedModel::Symbolic(m) => {
            let standard = match m.standard_iteration(&f).map_err(|e| e.to_string())? {
                StandardLfp::Converged { set, iterations } => format!("{set} (converged after {iterations} steps)"),
                StandardLfp::Divergent {
                    iterations,
                    limit: Some(l),
                    limit_admissible,
                    ..
                } => format!(
                    "{l} (still growing after {iterations} steps; limit {}admissible)",
                    if limit_admissible { "" } else { "not " }
                ),
                StandardLfp::Divergent { iterations, .. } => format!("none after {iterations} steps"),
            };
            let general = m.extension(&f).map_err(|e| e.to_string())?;
            Ok(format!("standard: {standard}\ngeneral:  {general}"))
        }
        LoadedModel::Explicit(m) => {
            let env = BTreeMap::new();
            let s = extension_with(&m, &f, &env, Semantics::Standard).map_err(|e| e.to_string())?;
            let g = extension_with(&m, &f, &env, Semantics::General).map_err(|e| e.to_string())?;
            Ok(format!(
                "standard: {}\ngeneral:  {}",
                show_worlds(m.frame(), s),
                show_worlds(m.frame(), g)
            ))
        }
    }
}

pub fn closure_report(relation: &str) -> Result<String, String> {
    let spec: RelationSpec = serde_json::from_str(relation).map_err(|e| e.to_string())?;
    let r = BinaryRelation::from_spec(&spec).map_err(|e| e.to_string())?;
    let (tc, iterations) = transitive_closure_fp(&r);
    Ok(format!("{tc}\niterations: {iterations}"))
}

pub fn translate_report(formula: &str) -> Result<String, String> {
    Ok(tau_translate(&parse_mso(formula).map_err(|e| e.to_string())?).to_string())
}

#[wasm_bindgen]
pub fn least_fixed_point(model: &str, formula: &str) -> Result<String, JsValue> {
    lfp_report(model, formula).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn transitive_closure(relation: &str) -> Result<String, JsValue> {
    closure_report(relation).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn translate_mso(formula: &str) -> Result<String, JsValue> {
    translate_report(formula).map_err(|e| JsValue::from_str(&e))
}
