//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Every export returns plain numbers or a JSON string so the page needs no
//! generated TypeScript types.

use bodi_kit::benchmarks::{random_search, Labs, MeritConvention, Problem};
use bodi_kit::combinatorics::{
    binary_wavelet_matrix, build_dictionary, dictionary_stats, enumerate_embedded_cardinality, DictionaryStrategy,
    SearchSpace,
};
use bodi_kit::engine::{run_bodi, BoConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Row-major entries of `B_n`.
#[wasm_bindgen]
pub fn wavelet_matrix(n: usize) -> Result<Vec<u8>, JsValue> {
    Ok(binary_wavelet_matrix(n).map_err(js_err)?.concat())
}

#[derive(Serialize)]
struct DictionaryView {
    rows: Vec<Vec<usize>>,
    #[serde(flatten)]
    stats: bodi_kit::combinatorics::DictionaryStats,
    /// Exact embedded cardinality when `d` is small enough to enumerate.
    embedded_cardinality: Option<u64>,
}

/// Builds a binary dictionary and returns its rows with coherence,
/// cardinality bound and histograms, as JSON.
#[wasm_bindgen]
pub fn dictionary_json(kind: &str, d: usize, m: usize, seed: u64) -> Result<String, JsValue> {
    let strategy: DictionaryStrategy = kind.parse().map_err(js_err)?;
    let space = SearchSpace::binary(d).map_err(js_err)?;
    let dict = build_dictionary(strategy, &space, m, seed).map_err(js_err)?;
    let view = DictionaryView {
        rows: dict.to_rows(),
        stats: dictionary_stats(&dict).map_err(js_err)?,
        embedded_cardinality: if d <= 16 { enumerate_embedded_cardinality(&dict).ok() } else { None },
    };
    serde_json::to_string(&view).map_err(js_err)
}

#[derive(Serialize)]
struct Race {
    bodi: Vec<f64>,
    random: Vec<f64>,
    best_sequence: Vec<usize>,
}

/// Best-so-far merit factor of BODi and random search on LABS, as JSON.
#[wasm_bindgen]
pub fn labs_race_json(n: usize, m: usize, budget: usize, seed: u64) -> Result<String, JsValue> {
    let problem = Labs::new(n, MeritConvention::Conventional).map_err(js_err)?;
    let config = BoConfig { m, budget, n_init: budget.min(10), seed, ..Default::default() };
    let bodi = run_bodi(&problem, &config).map_err(js_err)?;
    let random = random_search(&problem, budget, seed).map_err(js_err)?;
    let merit = |trace: Vec<f64>| trace.into_iter().map(|v| problem.report(v)).collect();
    let race = Race {
        best_sequence: bodi.best().map(|r| r.point.discrete.clone()).unwrap_or_default(),
        bodi: merit(bodi.best_so_far_trace()),
        random: merit(random.best_so_far_trace()),
    };
    serde_json::to_string(&race).map_err(js_err)
}
