use thiserror::Error;

/// Errors raised by the estimation, sampling and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input contains no values")]
    EmptyInput,
    #[error("value at index {index} is not positive")]
    NonPositiveValue { index: usize },
    #[error("value at index {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("sample must contain at least 2 values, got {n}")]
    SampleTooSmall { n: usize },
    #[error("exceedance count {m} is invalid for a sample of size {n}")]
    BadExceedanceCount { m: usize, n: usize },
    #[error("point count {m} is invalid for a sample of size {n}")]
    BadPointCount { m: usize, n: usize },
    #[error("all {m} largest values equal the threshold")]
    DegenerateTail { m: usize },
    #[error("all {k} excesses are zero")]
    DegenerateExcesses { k: usize },
    #[error("log-values of the {m} largest points have zero spread")]
    DegeneratePoints { m: usize },
    #[error("GPD fit with {k} excesses did not converge: {reason}")]
    ConvergenceFailure { k: usize, reason: String },
    #[error("fitted GPD shape {xi} is not positive, so no tail index exists")]
    NonPositiveShape { xi: f64 },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("grid [{k_min}, {k_max}] is out of range for a sample of size {n}")]
    GridOutOfRange { k_min: usize, k_max: usize, n: usize },
    #[error("threshold grid has no candidates")]
    EmptyGrid,
    #[error("every candidate failed to fit")]
    AllCandidatesFailed,
    #[error("fits and weights are not aligned on exceedance counts")]
    MisalignedInputs,
    #[error("bad distribution spec: {0}")]
    BadSpec(String),
    #[error("{failed} of {total} replicates failed")]
    TooManyFailures { failed: usize, total: usize },
    #[error("result holds no estimates")]
    EmptyResult,
    #[error("no observations lie above the weighted threshold")]
    NoExceedances,
}

impl Error {
    /// Short machine-readable name, used when reporting skipped candidates.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyInput => "empty_input",
            Error::NonPositiveValue { .. } => "non_positive_value",
            Error::NonFiniteValue { .. } => "non_finite_value",
            Error::SampleTooSmall { .. } => "sample_too_small",
            Error::BadExceedanceCount { .. } => "bad_exceedance_count",
            Error::BadPointCount { .. } => "bad_point_count",
            Error::DegenerateTail { .. } => "degenerate_tail",
            Error::DegenerateExcesses { .. } => "degenerate_excesses",
            Error::DegeneratePoints { .. } => "degenerate_points",
            Error::ConvergenceFailure { .. } => "convergence_failure",
            Error::NonPositiveShape { .. } => "non_positive_shape",
            Error::NonPositiveParameter { .. } => "non_positive_parameter",
            Error::GridOutOfRange { .. } => "grid_out_of_range",
            Error::EmptyGrid => "empty_grid",
            Error::AllCandidatesFailed => "all_candidates_failed",
            Error::MisalignedInputs => "misaligned_inputs",
            Error::BadSpec(_) => "bad_spec",
            Error::TooManyFailures { .. } => "too_many_failures",
            Error::EmptyResult => "empty_result",
            Error::NoExceedances => "no_exceedances",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
