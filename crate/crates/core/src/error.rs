use alloc::string::String;
use core::fmt;

/// Errors produced by construction, integration, and spectral routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Requested Fock dimension is too small to represent the operator.
    InvalidDimension { dim: usize, min: usize },
    /// A decay rate was negative (or not finite).
    InvalidRate { gamma: f64 },
    /// Physical parameter out of range (squeezing magnitude, occupation, ...).
    InvalidParameter { name: &'static str, value: f64 },
    /// Truncated basis cannot hold the requested state: the population of the
    /// top Fock levels exceeds the configured leakage tolerance.
    TruncationTooSmall { dim: usize, leakage: f64, tol: f64 },
    /// A state failed the density-matrix checks (trace, Hermiticity, positivity).
    InvalidState(String),
    /// Operands live in different Fock dimensions.
    DimensionMismatch { expected: usize, found: usize },
    /// The Liouvillian kernel is not one-dimensional; no unique steady state.
    NonUniqueSteadyState { gap_estimate: f64, threshold: f64 },
    /// Adaptive step size collapsed below the resolvable scale.
    Stiffness { t: f64, step: f64 },
    /// An invariant monitor fired during integration.
    IntegrationDiagnostic {
        t: f64,
        monitor: &'static str,
        magnitude: f64,
    },
    /// Not enough samples for the requested fit or study.
    InsufficientData(&'static str),
    /// An iterative numerical routine failed to converge.
    Numerical(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { dim, min } => {
                write!(f, "invalid Fock dimension {dim}: need at least {min}")
            }
            Error::InvalidRate { gamma } => {
                write!(f, "decay rate must be finite and nonnegative, got {gamma}")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter `{name}` out of range: {value}")
            }
            Error::TruncationTooSmall { dim, leakage, tol } => write!(
                f,
                "Fock truncation dim={dim} too small: top-level population {leakage:.3e} exceeds tolerance {tol:.3e}"
            ),
            Error::InvalidState(why) => write!(f, "invalid density matrix: {why}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonUniqueSteadyState { gap_estimate, threshold } => write!(
                f,
                "steady state is not unique: kernel gap estimate {gap_estimate:.3e} below {threshold:.3e}"
            ),
            Error::Stiffness { t, step } => write!(
                f,
                "step size underflow at t={t:.6e} (h={step:.3e}); increase dim or smooth the rate profile"
            ),
            Error::IntegrationDiagnostic { t, monitor, magnitude } => write!(
                f,
                "invariant monitor `{monitor}` fired at t={t:.6e} with magnitude {magnitude:.3e}"
            ),
            Error::InsufficientData(what) => write!(f, "insufficient data: {what}"),
            Error::Numerical(what) => write!(f, "numerical failure: {what}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
