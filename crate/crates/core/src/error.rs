use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid media: {0}")]
    InvalidMedia(String),

    #[error("degenerate media: zero contrast")]
    DegenerateMedia,

    #[error("branch degeneracy: {0}")]
    BranchDegeneracy(String),

    #[error("degenerate symbol: |{which}| = {value:.3e} below threshold {threshold:.3e}")]
    DegenerateSymbol {
        which: &'static str,
        value: f64,
        threshold: f64,
    },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("contour passes through a zero near {re:.6} {im:+.6}i")]
    ContourThroughZero { re: f64, im: f64 },

    #[error("root refinement failed: {0}")]
    RefineFailure(String),

    #[error("discretization error: {0}")]
    Discretization(String),

    #[error("limiting absorption sweep diverged: {0}")]
    SweepDivergence(String),

    #[error("decay violation: fitted c2 = {c2:.4e}")]
    DecayViolation { c2: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
