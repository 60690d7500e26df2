//! Error type shared across the crate.

use core::fmt;

/// Errors surfaced by grid construction, functional evaluation, and the
/// evolution/diagnostic machinery. Solver failure modes during a simulation
/// are not errors: they become trajectory verdicts.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    Domain(&'static str),
    /// A field or derived quantity contained NaN or infinity.
    NonFinite(&'static str),
    /// A trajectory does not carry enough checkpoints for the requested
    /// diagnostic.
    InsufficientCheckpoints { needed: usize, got: usize },
    /// The requested Lebesgue exponent was not recorded along the trajectory.
    NormNotRecorded,
    /// A fixed-point iteration left the contraction regime.
    ContractionLost,
    /// Dirichlet data must vanish at the boundary node.
    BoundaryData,
    /// The pointwise hypotheses of a comparison run failed at t = 0.
    HypothesisViolated(&'static str),
    /// Grids of co-evolved problems must share nodes on the common ball.
    GridMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::InsufficientCheckpoints { needed, got } => {
                write!(f, "need at least {needed} checkpoints, got {got}")
            }
            Error::NormNotRecorded => write!(f, "Lebesgue norm not recorded on trajectory"),
            Error::ContractionLost => write!(f, "fixed-point iteration diverged"),
            Error::BoundaryData => write!(f, "Dirichlet data must vanish at the boundary node"),
            Error::HypothesisViolated(msg) => write!(f, "comparison hypothesis violated: {msg}"),
            Error::GridMismatch => write!(f, "grids are not node-aligned on the common ball"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
