//! File ingestion, report serialization and plot data.

mod format;
mod ingest;
mod plot;
mod report;

use thiserror::Error;

pub use format::{fmt_real, to_fixed_json};
pub use ingest::{digest_values, ingest, parse_values, Column, Ingested};
pub use plot::{emit_plot_csv, plot_survival_fit, PlotKind, PlotRow, PlotSeries};
pub use report::{
    emit_report, emit_study_csv, emit_study_json, parse_report, CandidateRow, Format, Metadata, Report,
    StudyRow, WeightedSummary,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no column named `{0}`")]
    UnknownColumn(String),
    #[error("input contains no values")]
    EmptyInput,
    #[error("malformed report: {0}")]
    Report(String),
    #[error(transparent)]
    Data(#[from] crate::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
