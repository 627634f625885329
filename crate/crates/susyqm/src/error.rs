use thiserror::Error;

/// Errors raised by the spectral engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x = {x} is outside the domain: {reason}")]
    Domain { x: f64, reason: String },

    #[error("no {what} defined for family {family}")]
    UnsupportedFamily { family: String, what: String },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("shape invariance violated at level {level}: residual {residual:e} > threshold {threshold:e}")]
    ShapeInvarianceViolation {
        level: usize,
        residual: f64,
        threshold: f64,
    },

    #[error("exponent {exponent:e} at x = {x} exceeds the overflow cap")]
    Overflow { x: f64, exponent: f64 },

    #[error("superpotential at level {level} has a pole at x = {pole} inside the grid")]
    PoleInChain { level: usize, pole: f64 },

    #[error("wavefunction has zero norm")]
    ZeroNorm,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("potential is not finite at grid index {index} (x = {x})")]
    NonFinitePotential { index: usize, x: f64 },

    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("resource limit reached: {0}")]
    ResourceLimit(String),

    #[error("degenerate gap |E2 - E1| = {gap:e}")]
    DegenerateGap { gap: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
