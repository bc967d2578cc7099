use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::format::{fmt_real, to_fixed_json};
use super::IoError;
use crate::averaging::{Estimation, Skipped, ThresholdGrid};
use crate::fit::Method;
use crate::sampling::GENERATOR_NAME;
use crate::sim::{StudyConfig, StudyResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSummary {
    pub alpha: f64,
    pub xi: f64,
    pub threshold: f64,
    pub m_eff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub m: usize,
    pub threshold: f64,
    pub alpha: f64,
    pub criterion: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: Option<u64>,
    pub generator: String,
    pub input_digest: String,
    pub n: usize,
    pub abs_applied: bool,
    pub version: String,
}

/// Serializable summary of one estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub method: Method,
    pub grid: ThresholdGrid,
    pub weighted: WeightedSummary,
    pub candidates: Vec<CandidateRow>,
    pub skipped: Vec<Skipped>,
    pub metadata: Metadata,
}

impl Report {
    pub fn new(
        est: &Estimation,
        grid: ThresholdGrid,
        n: usize,
        abs_applied: bool,
        input_digest: impl Into<String>,
        seed: Option<u64>,
    ) -> Self {
        let candidates = est
            .fits
            .iter()
            .zip(&est.weights.entries)
            .map(|(f, w)| CandidateRow {
                m: f.m,
                threshold: f.threshold,
                alpha: f.alpha_hat,
                criterion: w.criterion,
                weight: w.weight,
            })
            .collect();
        Self {
            method: est.estimate.method,
            grid,
            weighted: WeightedSummary {
                alpha: est.estimate.alpha_bar,
                xi: est.estimate.xi_bar,
                threshold: est.estimate.threshold_bar,
                m_eff: est.estimate.m_eff,
            },
            candidates,
            skipped: est.weights.skipped.clone(),
            metadata: Metadata {
                seed,
                generator: GENERATOR_NAME.to_string(),
                input_digest: input_digest.into(),
                n,
                abs_applied,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        }
    }
}

const CSV_HEADER: &str = "m,threshold,alpha,criterion,weight";

fn emit_csv(r: &Report) -> String {
    let mut out = String::new();
    let meta = &r.metadata;
    let skipped: Vec<String> = r.skipped.iter().map(|s| format!("{}:{}", s.m, s.reason)).collect();
    let pairs = [
        ("method", r.method.as_str().to_string()),
        ("grid.k_min", r.grid.k_min.to_string()),
        ("grid.k_max", r.grid.k_max.to_string()),
        ("grid.stride", r.grid.stride.to_string()),
        ("weighted.alpha", fmt_real(r.weighted.alpha)),
        ("weighted.xi", fmt_real(r.weighted.xi)),
        ("weighted.threshold", fmt_real(r.weighted.threshold)),
        ("weighted.m_eff", r.weighted.m_eff.to_string()),
        ("skipped", skipped.join(";")),
        ("metadata.seed", meta.seed.map(|s| s.to_string()).unwrap_or_default()),
        ("metadata.generator", meta.generator.clone()),
        ("metadata.input_digest", meta.input_digest.clone()),
        ("metadata.n", meta.n.to_string()),
        ("metadata.abs_applied", meta.abs_applied.to_string()),
        ("metadata.version", meta.version.clone()),
    ];
    for (k, v) in pairs {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in &r.candidates {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.m,
            fmt_real(c.threshold),
            fmt_real(c.alpha),
            fmt_real(c.criterion),
            fmt_real(c.weight)
        );
    }
    out
}

/// Deterministic serialization of a report.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_fixed_json(report),
        Format::Csv => emit_csv(report).into_bytes(),
    }
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Report(msg.into())
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, IoError> {
    s.parse().map_err(|_| bad(format!("bad {what}: `{s}`")))
}

fn parse_csv(text: &str) -> Result<Report, IoError> {
    let mut meta = std::collections::HashMap::new();
    let mut lines = text.lines();
    let mut header_seen = false;
    for line in lines.by_ref() {
        if let Some(kv) = line.strip_prefix("# ") {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("bad preamble line `{line}`")))?;
            meta.insert(k.to_string(), v.to_string());
        } else if line == CSV_HEADER {
            header_seen = true;
            break;
        } else {
            return Err(bad(format!("unexpected line `{line}`")));
        }
    }
    if !header_seen {
        return Err(bad("missing candidate header"));
    }
    let get = |k: &str| meta.get(k).map(String::as_str).ok_or_else(|| bad(format!("missing {k}")));
    let mut candidates = Vec::new();
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(bad(format!("bad candidate row `{line}`")));
        }
        candidates.push(CandidateRow {
            m: num(f[0], "m")?,
            threshold: num(f[1], "threshold")?,
            alpha: num(f[2], "alpha")?,
            criterion: num(f[3], "criterion")?,
            weight: num(f[4], "weight")?,
        });
    }
    let skipped = get("skipped")?
        .split(';')
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (m, reason) = s.split_once(':').ok_or_else(|| bad("bad skipped entry"))?;
            Ok(Skipped {
                m: num(m, "skipped m")?,
                reason: reason.to_string(),
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let seed = match get("metadata.seed")? {
        "" => None,
        s => Some(num(s, "seed")?),
    };
    Ok(Report {
        method: get("method")?.parse().map_err(bad)?,
        grid: ThresholdGrid {
            k_min: num(get("grid.k_min")?, "k_min")?,
            k_max: num(get("grid.k_max")?, "k_max")?,
            stride: num(get("grid.stride")?, "stride")?,
        },
        weighted: WeightedSummary {
            alpha: num(get("weighted.alpha")?, "alpha")?,
            xi: num(get("weighted.xi")?, "xi")?,
            threshold: num(get("weighted.threshold")?, "threshold")?,
            m_eff: num(get("weighted.m_eff")?, "m_eff")?,
        },
        candidates,
        skipped,
        metadata: Metadata {
            seed,
            generator: get("metadata.generator")?.to_string(),
            input_digest: get("metadata.input_digest")?.to_string(),
            n: num(get("metadata.n")?, "n")?,
            abs_applied: num(get("metadata.abs_applied")?, "abs_applied")?,
            version: get("metadata.version")?.to_string(),
        },
    })
}

/// Inverse of [`emit_report`].
pub fn parse_report(bytes: &[u8], format: Format) -> Result<Report, IoError> {
    let text = std::str::from_utf8(bytes).map_err(|e| bad(e.to_string()))?;
    match format {
        Format::Json => serde_json::from_str(text).map_err(|e| bad(e.to_string())),
        Format::Csv => parse_csv(text),
    }
}

/// One row of a study table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub method: Method,
    pub est_threshold: f64,
    pub mse: f64,
    pub bias: f64,
}

impl StudyRow {
    pub fn new(cfg: &StudyConfig, result: &StudyResult) -> Self {
        Self {
            family: cfg.spec.family().as_str().to_string(),
            params: cfg.spec.params_label(),
            n: cfg.n,
            method: cfg.method,
            est_threshold: result.mean_threshold,
            mse: result.mse,
            bias: result.bias,
        }
    }
}

/// CSV study table with columns `family,params,n,method,est_threshold,mse,bias`.
pub fn emit_study_csv(rows: &[StudyRow]) -> Vec<u8> {
    let mut out = String::from("family,params,n,method,est_threshold,mse,bias\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.family,
            r.params,
            r.n,
            r.method,
            fmt_real(r.est_threshold),
            fmt_real(r.mse),
            fmt_real(r.bias)
        );
    }
    out.into_bytes()
}

#[derive(Serialize)]
struct StudyDocument<'a> {
    config: &'a StudyConfig,
    result: &'a StudyResult,
    generator: &'a str,
    version: &'a str,
}

/// Full study output as JSON, including per-replicate estimates.
pub fn emit_study_json(cfg: &StudyConfig, result: &StudyResult) -> Vec<u8> {
    to_fixed_json(&StudyDocument {
        config: cfg,
        result,
        generator: GENERATOR_NAME,
        version: env!("CARGO_PKG_VERSION"),
    })
}
