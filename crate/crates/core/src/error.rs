//! Error type shared by all simulator modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {q0} outside lattice [-{halfwidth}, {halfwidth}]")]
    SiteOutOfRange { q0: i32, halfwidth: i32 },

    #[error("state has support at the lattice edge; a shift would lose norm")]
    SupportAtEdge,

    #[error("angle array length {got} does not match lattice size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("step index {step} outside the {rows}-row angle table")]
    StepOutOfRange { step: usize, rows: usize },

    #[error("periodic lattice needs an even site count, got {n}")]
    OddSiteCount { n: usize },

    #[error("matrix dimension {dim} has no site ⊗ spin structure")]
    BadDimension { dim: usize },

    #[error("disorder model mismatch: expected {expected}, got {got}")]
    ModelMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("coin amplitude {value} outside [0, pi/2]")]
    BadAmplitude { value: f64 },

    #[error("state norm deviates from 1 by {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("record basis `{got}` where `{expected}` is required")]
    WrongBasis {
        expected: &'static str,
        got: &'static str,
    },

    #[error("window [{lo}, {hi}] is empty or not contained in the series")]
    BadWindow { lo: usize, hi: usize },

    #[error("power spectrum of an identically zero series is undefined")]
    ZeroSeries,

    #[error("profile fit needs at least 4 usable bins, found {found}")]
    FitWindowTooSmall { found: usize },

    #[error("negative probability {value:e} at site {q}")]
    NegativeProbability { q: i32, value: f64 },

    #[error("profile does not decay over the fit window")]
    NonDecayingProfile,

    #[error("invalid ensemble configuration: {0}")]
    BadConfig(String),

    #[error("realization {index} failed: {source}")]
    Realization {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("malformed csv input: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
