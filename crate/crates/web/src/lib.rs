//! Browser demo: estimate a pasted data set, explore simulated samples and
//! run small Monte Carlo studies. Everything crosses the boundary as JSON.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use tailavg::io::{plot_survival_fit, PlotRow};
use tailavg::io::parse_values;
use tailavg::sampling::sample;
use tailavg::sim::histogram;
use tailavg::{estimate, DistributionSpec, Method, Sample, SeededStream, StudyConfig, ThresholdGrid};

#[derive(Serialize)]
struct CandidatePoint {
    m: usize,
    threshold: f64,
    alpha: f64,
    criterion: f64,
    weight: f64,
}

#[derive(Serialize)]
struct EstimateView {
    n: usize,
    method: Method,
    alpha: f64,
    xi: f64,
    threshold: f64,
    m_eff: usize,
    candidates: Vec<CandidatePoint>,
    skipped: Vec<usize>,
    survival: Vec<PlotRow>,
    qq: Vec<PlotRow>,
}

#[derive(Serialize)]
struct StudyView {
    alpha_true: f64,
    mean_alpha: f64,
    bias: f64,
    mse: f64,
    mean_threshold: f64,
    failures: usize,
    histogram: Vec<(f64, usize)>,
}

fn method_from(name: &str) -> Result<Method, String> {
    name.parse()
}

fn spec_from(family: &str, shape: f64, sigma: f64, mu: f64) -> Result<DistributionSpec, String> {
    let spec = match family {
        "stable" => DistributionSpec::stable(shape, sigma, mu),
        "t" => DistributionSpec::student_t(shape, sigma, mu),
        "gpd" => DistributionSpec::gpd(shape, sigma, mu),
        other => return Err(format!("unknown family `{other}`")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn view(sample: &Sample, grid: ThresholdGrid, method: Method) -> Result<EstimateView, String> {
    let run = estimate(sample, &grid, method).map_err(|e| e.to_string())?;
    let (survival, qq) = plot_survival_fit(sample, &run.estimate).map_err(|e| e.to_string())?;
    let e = run.estimate;
    Ok(EstimateView {
        n: sample.len(),
        method,
        alpha: e.alpha_bar,
        xi: e.xi_bar,
        threshold: e.threshold_bar,
        m_eff: e.m_eff,
        candidates: run
            .fits
            .iter()
            .zip(&run.weights.entries)
            .map(|(f, w)| CandidatePoint {
                m: f.m,
                threshold: f.threshold,
                alpha: f.alpha_hat,
                criterion: w.criterion,
                weight: w.weight,
            })
            .collect(),
        skipped: run.weights.skipped.iter().map(|s| s.m).collect(),
        survival: survival.rows,
        qq: qq.rows,
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Weighted estimate of newline-separated values.
pub fn estimate_values(
    text: &str,
    method: &str,
    k_min: usize,
    k_max: usize,
    stride: usize,
    take_abs: bool,
) -> Result<String, String> {
    let values = parse_values(text, None).map_err(|e| e.to_string())?;
    let sample = Sample::new(&values, take_abs).map_err(|e| e.to_string())?;
    let grid = ThresholdGrid::new(sample.len(), k_min, k_max, stride).map_err(|e| e.to_string())?;
    to_json(&view(&sample, grid, method_from(method)?)?)
}

/// Draws one sample and estimates it.
#[allow(clippy::too_many_arguments)]
pub fn simulate_values(
    family: &str,
    shape: f64,
    sigma: f64,
    mu: f64,
    n: usize,
    seed: u64,
    method: &str,
    k_min: usize,
    k_max: usize,
    stride: usize,
) -> Result<String, String> {
    let spec = spec_from(family, shape, sigma, mu)?;
    let raw = sample(&spec, n, SeededStream::new(seed, 0)).map_err(|e| e.to_string())?;
    let s = Sample::new(&raw, spec.default_take_abs()).map_err(|e| e.to_string())?;
    let grid = ThresholdGrid::new(s.len(), k_min, k_max, stride).map_err(|e| e.to_string())?;
    to_json(&view(&s, grid, method_from(method)?)?)
}

/// Small replicated study with a histogram of the estimates.
#[allow(clippy::too_many_arguments)]
pub fn study_values(
    family: &str,
    shape: f64,
    sigma: f64,
    mu: f64,
    n: usize,
    replicates: usize,
    seed: u64,
    method: &str,
    k_min: usize,
    k_max: usize,
    stride: usize,
    bins: usize,
) -> Result<String, String> {
    let spec = spec_from(family, shape, sigma, mu)?;
    let mut cfg = StudyConfig::new(spec, n, replicates, method_from(method)?, seed);
    cfg.grid = ThresholdGrid {
        k_min,
        k_max,
        stride,
    };
    let r = tailavg::run_study(&cfg).map_err(|e| e.to_string())?;
    to_json(&StudyView {
        alpha_true: r.alpha_true,
        mean_alpha: r.mean_alpha,
        bias: r.bias,
        mse: r.mse,
        mean_threshold: r.mean_threshold,
        failures: r.failures,
        histogram: histogram(&r.per_replicate_alphas, bins).map_err(|e| e.to_string())?,
    })
}

#[wasm_bindgen(js_name = estimateText)]
pub fn estimate_text(
    text: &str,
    method: &str,
    k_min: usize,
    k_max: usize,
    stride: usize,
    take_abs: bool,
) -> Result<String, JsError> {
    estimate_values(text, method, k_min, k_max, stride, take_abs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = simulateEstimate)]
#[allow(clippy::too_many_arguments)]
pub fn simulate_estimate(
    family: &str,
    shape: f64,
    sigma: f64,
    mu: f64,
    n: usize,
    seed: u32,
    method: &str,
    k_min: usize,
    k_max: usize,
    stride: usize,
) -> Result<String, JsError> {
    simulate_values(family, shape, sigma, mu, n, u64::from(seed), method, k_min, k_max, stride)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runStudy)]
#[allow(clippy::too_many_arguments)]
pub fn run_study(
    family: &str,
    shape: f64,
    sigma: f64,
    mu: f64,
    n: usize,
    replicates: usize,
    seed: u32,
    method: &str,
    k_min: usize,
    k_max: usize,
    stride: usize,
    bins: usize,
) -> Result<String, JsError> {
    study_values(family, shape, sigma, mu, n, replicates, u64::from(seed), method, k_min, k_max, stride, bins)
        .map_err(|e| JsError::new(&e))
}
