use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} too large: {got} exceeds limit {limit}")]
    Size {
        what: &'static str,
        limit: u64,
        got: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("orbit did not certify escape within {steps} steps")]
    NotEscaping { steps: usize },

    #[error("no convergence after n = {n_used}: last gap {last_gap:e}")]
    NoConvergence { n_used: usize, last_gap: f64 },

    #[error("expected {expected} bands, found {found}")]
    BandCount { expected: usize, found: usize },

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("root off the unit circle by {deviation:e}")]
    LeeYangViolation { deviation: f64 },

    #[error("degenerate transfer matrix at site {site}: zero coupling")]
    DegenerateDeterminant { site: usize },

    #[error("unknown symmetry `{0}` (expected s, s2, s3 or s4)")]
    UnknownSymmetry(String),

    #[error("trace map overflowed the floating range")]
    Saturated,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
