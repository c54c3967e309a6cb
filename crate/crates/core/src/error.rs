use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mass ratio {0} outside (0, 1)")]
    Domain(f64),

    #[error("position ({0}, {1}) coincides with a primary")]
    Singularity(f64, f64),

    /// Momenta are undefined at this configuration in the requested chart.
    /// The chart positions are still returned.
    #[error("chart singularity at positions ({}, {})", position[0], position[1])]
    ChartSingularity { position: [f64; 2] },

    #[error("energy {c} is within tolerance of the transition energy {edge}")]
    BandEdge { c: f64, edge: f64 },

    #[error("energy {c} outside the band ({lo}, {hi})")]
    Band { c: f64, lo: f64, hi: f64 },

    #[error("operation is degenerate at equal masses: {0}")]
    ExplicitlyDegenerate(&'static str),

    #[error("(g, c) = ({g}, {c}) is not admissible: {reason}")]
    InadmissiblePoint { g: f64, c: f64, reason: String },

    #[error("(g, c) = ({g}, {c}) lies on a critical curve ({label})")]
    CriticalPoint { g: f64, c: f64, label: String },

    #[error("degenerate cell: {0}")]
    DegenerateCell(String),

    #[error("initial |Q| = {0:e} exceeds 1e-10")]
    NonzeroQ(f64),

    #[error("|Q| = {q:e} at s = {s} exceeds the acceptance bound {bound:e}")]
    ToleranceExceeded { s: f64, q: f64, bound: f64 },

    #[error("step size underflow at s = {0}")]
    StepUnderflow(f64),

    #[error("no root of R(g, c) - {target} at c = {c}")]
    NoRoot { c: f64, target: f64 },

    #[error("no closure: best residual {residual:e} exceeds {tol:e}")]
    NoClosure { residual: f64, tol: f64 },

    #[error("winding counts disagree: {0}")]
    InconsistentCounts(String),

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable variant name, used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "Domain",
            Error::Singularity(..) => "Singularity",
            Error::ChartSingularity { .. } => "ChartSingularity",
            Error::BandEdge { .. } => "BandEdge",
            Error::Band { .. } => "BandError",
            Error::ExplicitlyDegenerate(_) => "ExplicitlyDegenerate",
            Error::InadmissiblePoint { .. } => "InadmissiblePoint",
            Error::CriticalPoint { .. } => "CriticalPoint",
            Error::DegenerateCell(_) => "DegenerateCell",
            Error::NonzeroQ(_) => "NonzeroQ",
            Error::ToleranceExceeded { .. } => "ToleranceExceeded",
            Error::StepUnderflow(_) => "StepUnderflow",
            Error::NoRoot { .. } => "NoRoot",
            Error::NoClosure { .. } => "NoClosure",
            Error::InconsistentCounts(_) => "InconsistentCounts",
            Error::VerificationFailure(_) => "VerificationFailure",
            Error::Validation(_) => "Validation",
            Error::Io { .. } => "Io",
            Error::Json(_) => "Json",
        }
    }
}
