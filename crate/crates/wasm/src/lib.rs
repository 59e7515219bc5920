//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes the local spectra as `"A levels;B levels"` and returns a
//! JSON string. The `*_json` functions are the same operations without the
//! JavaScript error type, so they can be exercised natively.

use mees_core::model::{schmidt_entropy, solve_beta_g};
use mees_core::montecarlo::{
    run_scatter, scan_mees_curve, uniform_grid, Histogram2D, Measure, SamplerConfig,
};
use mees_core::{ApproachKind, BipartiteSystem};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest sample count accepted from the page.
pub const MAX_SAMPLES: u64 = 200_000;

fn system(spectra: &str) -> Result<BipartiteSystem, String> {
    BipartiteSystem::from_inline(spectra).map_err(|e| e.to_string())
}

/// MEES at normalized entanglement `x ∈ (0, 1)`.
pub fn mees_json(spectra: &str, x: f64) -> Result<String, String> {
    let s = system(spectra)?;
    let m = solve_beta_g(&s, x * s.max_entanglement()).map_err(|e| e.to_string())?;
    Ok(json!({
        "beta_g": m.beta_g,
        "e_g": m.e_g,
        "z_g": m.z_g,
        "entanglement": schmidt_entropy(&m.state),
        "weights": m.state.weights,
        "diag_energies": s.diag_energies(),
        "swapped": s.swapped(),
    })
    .to_string())
}

/// Efficiency and normalized expense of all five approaches along the MEES family.
pub fn curves_json(spectra: &str, points: usize, epsilon: f64) -> Result<String, String> {
    let s = system(spectra)?;
    if points == 0 || points > 2000 {
        return Err("points must lie in 1..=2000".into());
    }
    let scan = scan_mees_curve(&s, &ApproachKind::ALL, &uniform_grid(&s, points), epsilon).map_err(|e| e.to_string())?;
    serde_json::to_string(&scan).map_err(|e| e.to_string())
}

fn grid(h: &Histogram2D) -> Vec<Vec<u64>> {
    h.counts().chunks(h.bins_y).map(|c| c.to_vec()).collect()
}

/// Scatter histograms of random states for one approach, with its MEES curve.
pub fn scatter_json(spectra: &str, approach: &str, count: u64, bins: usize, seed: u64) -> Result<String, String> {
    let s = system(spectra)?;
    let approach: ApproachKind = approach.parse().map_err(|e: mees_core::Error| e.to_string())?;
    if count == 0 || count > MAX_SAMPLES {
        return Err(format!("count must lie in 1..={MAX_SAMPLES}"));
    }
    if bins == 0 || bins > 400 {
        return Err("bins must lie in 1..=400".into());
    }
    let cfg = SamplerConfig::new(seed, count, Measure::default_for(approach), 1);
    let sc = run_scatter(&s, approach, &cfg, (bins, bins)).map_err(|e| e.to_string())?;
    let curve = scan_mees_curve(&s, &[approach], &uniform_grid(&s, 100), cfg.leak).map_err(|e| e.to_string())?;
    Ok(json!({
        "approach": approach,
        "measure": cfg.measure,
        "bins": bins,
        "skipped": sc.skipped,
        "efficiency": grid(&sc.efficiency),
        "expense": grid(&sc.expense),
        "expense_norm": sc.expense.y_norm,
        "mees": { "x": curve.e_norm, "eta": curve.eta[0], "expense": curve.e_exp_norm[0] },
    })
    .to_string())
}

#[wasm_bindgen]
pub fn mees(spectra: &str, x: f64) -> Result<String, JsError> {
    mees_json(spectra, x).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn curves(spectra: &str, points: usize, epsilon: f64) -> Result<String, JsError> {
    curves_json(spectra, points, epsilon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scatter(spectra: &str, approach: &str, count: u32, bins: usize, seed: u32) -> Result<String, JsError> {
    scatter_json(spectra, approach, count.into(), bins, seed.into()).map_err(|e| JsError::new(&e))
}
