use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain (bad sign, x beyond
    /// the coordinate singularity, malformed grid, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The oscillatory regime is violated (gamma^2 A^2 >= 1 and friends).
    #[error("regime error: {0}")]
    Regime(String),

    /// A level index beyond the bound-state range was requested.
    #[error("level n={n} outside the bound range (max bound index {max})")]
    BoundIndex { n: usize, max: usize },

    /// The parameters support no bound state at all.
    #[error("no bound states: 2s - 1 = {two_s_minus_one} <= 0")]
    NoBoundStates { two_s_minus_one: f64 },

    /// A grid is too coarse for the requested stencil or operator.
    #[error("grid too coarse: {points} points, need at least {needed}")]
    GridTooCoarse { points: usize, needed: usize },

    /// Two sampled functions live on different grids or conventions.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A classical integration left the configuration domain x > -1/gamma.
    #[error("trajectory left the domain x > -1/gamma at t={t}")]
    BlowUp { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }
}
