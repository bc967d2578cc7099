//! Tail index estimation by model averaging over peaks-over-threshold fits.
//!
//! For every candidate exceedance count `m` in a [`ThresholdGrid`] a tail
//! model is fitted to the `m` largest observations and scored with an
//! average log-likelihood criterion that is comparable across `m`. The
//! candidates are combined with softmax weights into a [`WeightedEstimate`]
//! of the tail index and threshold.
//!
//! ```
//! use tailavg::{estimate, Method, Sample, ThresholdGrid};
//!
//! let raw: Vec<f64> = (1..=1000).map(|i| (1000.5 / i as f64).powf(1.0 / 1.5)).collect();
//! let sample = Sample::new(&raw, false).unwrap();
//! let grid = ThresholdGrid::new(sample.len(), 50, 500, 1).unwrap();
//! let run = estimate(&sample, &grid, Method::Pareto).unwrap();
//! assert!((run.estimate.alpha_bar - 1.5).abs() < 0.1);
//! ```

// `!(x > 0.0)` is used on purpose throughout: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod averaging;
pub mod error;
pub mod fit;
pub mod io;
pub mod sample;
pub mod sampling;
pub mod sim;

pub use averaging::{
    build_grid, compute_weights, estimate, weighted_estimate, Estimation, Skipped, ThresholdGrid, WeightEntry,
    WeightTable, WeightedEstimate,
};
pub use error::{Error, Result};
pub use fit::{CandidateFit, Method};
pub use sample::{make_sample, Sample};
pub use sampling::{DistributionSpec, Family, SeededStream};
pub use sim::{histogram_data, run_study, run_study_serial, StudyConfig, StudyResult};
