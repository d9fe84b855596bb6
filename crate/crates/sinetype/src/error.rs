//! Error type shared by all solver stages.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical failures carry enough context to diagnose which certification
/// step broke (contour, contraction, patch system, ...).
#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated in {op}: {msg}")]
    Precondition { op: &'static str, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ill-conditioned contour: {0}")]
    IllConditionedContour(String),

    #[error("quadrature failure: winding number did not stabilize ({0})")]
    QuadratureFailure(String),

    #[error(
        "no convergence in {iterations} steps (best iterate {best}, scaled residual {residual:.3e})"
    )]
    NoConvergence {
        best: Complex64,
        residual: f64,
        iterations: usize,
    },

    #[error("enumeration failure: {0}")]
    EnumerationFailure(String),

    #[error("gamma norm exceeds r0: {norm:.6} > 0.25")]
    GammaNormExceedsR0 { norm: f64 },

    #[error("contraction violated: observed ratio {ratio:.4} > 0.55 at step {step}")]
    ContractionViolated { ratio: f64, step: usize },

    #[error("gamma reduction exhausted: norm {norm:.4} >= 0.25 at k0={k0}, d={d}")]
    ReductionExhausted { norm: f64, k0: usize, d: usize },

    #[error("patch window exhausted: {0}")]
    PatchWindowExhausted(String),

    #[error("g too large for Neumann inversion: ||g|| = {norm:.6} > 0.5")]
    GTooLargeForNeumann { norm: f64 },

    #[error("inverse residual exceeded: {0}")]
    InverseResidualExceeded(String),

    #[error("patch system ill-conditioned; decrease eps or increase m ({0})")]
    PatchSystemIllConditioned(String),

    #[error("branch point near s = {s}: {msg}")]
    BranchPoint { s: f64, msg: String },

    #[error("split search exhausted: {0}")]
    SplitExhausted(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit-code class for the CLI: 2 input, 3 numerical, 4 verification.
    pub fn exit_class(&self) -> u8 {
        match self {
            Error::InvalidInput(_) | Error::Json(_) | Error::Io(_) | Error::Precondition { .. } => {
                2
            }
            Error::InverseResidualExceeded(_) => 4,
            _ => 3,
        }
    }

    /// Machine-readable kind tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Precondition { .. } => "precondition",
            Error::InvalidInput(_) => "invalid_input",
            Error::IllConditionedContour(_) => "ill_conditioned_contour",
            Error::QuadratureFailure(_) => "quadrature_failure",
            Error::NoConvergence { .. } => "no_convergence",
            Error::EnumerationFailure(_) => "enumeration_failure",
            Error::GammaNormExceedsR0 { .. } => "gamma_norm_exceeds_r0",
            Error::ContractionViolated { .. } => "contraction_violated",
            Error::ReductionExhausted { .. } => "reduction_exhausted",
            Error::PatchWindowExhausted(_) => "patch_window_exhausted",
            Error::GTooLargeForNeumann { .. } => "g_too_large_for_neumann",
            Error::InverseResidualExceeded(_) => "inverse_residual_exceeded",
            Error::PatchSystemIllConditioned(_) => "patch_system_ill_conditioned",
            Error::BranchPoint { .. } => "branch_point",
            Error::SplitExhausted(_) => "split_exhausted",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
