//! Error type shared by every operation in the crate.

use crate::stepper::Trajectory;

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("grid size {0} is not a power of two >= 16")]
    BadGridSize(usize),

    #[error("domain length {0} is not a positive finite number")]
    BadDomainLength(f64),

    #[error("sample vector has length {got}, grid has {want} points")]
    SampleCount { got: usize, want: usize },

    #[error("fields live on different grids (L={0}, N={1} vs L={2}, N={3})")]
    GridMismatch(f64, usize, f64, usize),

    #[error("{what} contains non-finite samples")]
    NonFinite { what: &'static str },

    #[error("Lp norm needs p >= 1, got {0}")]
    BadLpExponent(f64),

    #[error("mollifier index must be a positive integer")]
    ZeroMollifier,

    #[error(
        "mollifier n={n} under-resolved: support 2/n = {support:.3e} needs at least two cells (2*dx = {min:.3e})"
    )]
    UnderResolvedMollifier { n: u32, support: f64, min: f64 },

    #[error(
        "mollifier n={n} wider than the domain (support 2/n = {support:.3e} > L = {length:.3e})"
    )]
    MollifierTooWide { n: u32, support: f64, length: f64 },

    #[error("peakon speed must be positive and finite, got {0}")]
    BadPeakonSpeed(f64),

    #[error("periodic peakon requires domain length 2*pi, got {0}")]
    PeriodicPeakonLength(f64),

    #[error("invalid solver configuration: {0}")]
    BadSolverConfig(String),

    #[error("blow-up at t = {time:.6e}: {reason}")]
    BlowUp {
        time: f64,
        reason: String,
        /// Records up to and including the last finite state.
        partial: Box<Trajectory>,
    },

    #[error("adaptive step collapsed below 1e-12 at t = {time:.6e}")]
    CflStarvation { time: f64 },

    #[error("initial potential {which} dips to {min:.3e}, below the admissible -{tol:.1e}")]
    SignCondition {
        which: &'static str,
        min: f64,
        tol: f64,
    },

    #[error("test function support leaves the trajectory window: {0}")]
    SupportViolation(String),

    #[error("invalid study parameters: {0}")]
    BadStudyParams(String),
}
