//! Error type shared across the toolkit.

use num_complex::Complex64;
use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building symbols, factorizations,
/// operator sections, or determinants.
#[derive(Debug, Error)]
pub enum Error {
    #[error("block dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{got} samples are too few for band {band}; at least {required} required")]
    TooFewSamples {
        got: usize,
        band: usize,
        required: usize,
    },

    #[error("symbol vanishes at sample {index} (magnitude {magnitude:.3e} below floor)")]
    VanishingSample { index: usize, magnitude: f64 },

    #[error("symbol sample {index} is singular (smallest pivot {magnitude:.3e} below floor)")]
    SingularSample { index: usize, magnitude: f64 },

    #[error("winding number is {winding}, but the factorization hypotheses require 0")]
    NonzeroWinding { winding: i64 },

    #[error(
        "argument jumps by {jump:.4} rad (>= pi/2) between samples {index} and {next}; \
         a finer sample grid is needed to track the log branch"
    )]
    BranchJump { index: usize, next: usize, jump: f64 },

    #[error("series must have zero constant term, got magnitude {magnitude:.3e}")]
    NonzeroConstantTerm { magnitude: f64 },

    #[error("series is not {side}-supported in {context}")]
    SupportViolation {
        side: &'static str,
        context: &'static str,
    },

    #[error("{op} is only defined for scalar symbols (block dimension {dim})")]
    ScalarOnly { op: &'static str, dim: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFiniteEntries,

    #[error("matrix is singular (condition hint {condition_hint:.3e})")]
    SingularMatrix { condition_hint: f64 },

    #[error(
        "finite-section factorization system is singular at band {band}; \
         try a smaller symbol deviation or a larger band"
    )]
    SingularFactorizationSystem { band: usize },

    #[error("{what} residual {residual:.3e} exceeds tolerance {tolerance:.3e} at band {band}")]
    ResidualTooLarge {
        what: &'static str,
        residual: f64,
        tolerance: f64,
        band: usize,
    },

    #[error(
        "section determinant did not stabilize within cap {cap}: \
         last {last}, previous {previous}"
    )]
    NonConvergence {
        cap: usize,
        last: Complex64,
        previous: Complex64,
    },

    #[error("block ratio symbols need a second factorization (psi pair), none present")]
    MissingSecondFactorization,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tag an error with the pipeline stage it came from.
    pub fn staged(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }
}
