//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Adaptive step size collapsed; the right-hand side is effectively
    /// singular on the traversed region.
    #[error("integration step size collapsed at t = {t}")]
    StepFailure { t: f64 },

    /// Root bracketing failed: no sign change on the supplied interval.
    #[error("no root bracketed on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    /// Least-squares system is singular (e.g. all abscissae identical).
    #[error("singular least-squares fit: {0}")]
    SingularFit(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Invalid material parameters or run configuration.
    #[error("configuration error: {0}")]
    ConfigError(String),

    /// Profile integration escaped the physical region.
    #[error("profile integration diverged (escape sign {sign})")]
    Diverged { sign: f64 },

    /// Effective surface tension dropped to zero along the profile.
    #[error("surface tension vanished at r = {r}")]
    SingularTension { r: f64 },

    /// Shooting found no admissible meniscus; interpreted as exceeding the
    /// limit potential.
    #[error("no equilibrium meniscus exists for these parameters")]
    NoSolution,

    /// Table rows are mutually inconsistent beyond the allowed spread.
    #[error("inconsistent table: {0}")]
    InconsistentTable(String),

    /// Limit-potential bracket does not straddle the limit.
    #[error("bad limit-potential bracket: {0}")]
    BadBracket(String),

    /// Energy scan found no interior minimum (above the variational limit
    /// potential).
    #[error("no interior energy minimum")]
    NoInteriorMinimum,

    /// Fit has no information to determine the parameter.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}
