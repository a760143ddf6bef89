use thiserror::Error;

/// Errors produced by the surface and construction layers.
#[derive(Debug, Error)]
pub enum Error {
    /// The chart fails the immersion bound at the requested point.
    #[error("degenerate immersion at (u, v) = ({u}, {v}): smallest singular value {sigma:.3e}")]
    DegenerateImmersion { u: f64, v: f64, sigma: f64 },

    /// A residual evaluator was called on a point that is not numerically
    /// umbilical (relative shape-operator residual above the gate).
    #[error("umbilicity gate failed at (u, v) = ({u}, {v}): relative residual {residual:.3e} >= {gate:.3e}")]
    UmbilicityGate {
        u: f64,
        v: f64,
        residual: f64,
        gate: f64,
    },

    /// The ambient family handed to a residual evaluator does not match the
    /// model the patch was built in.
    #[error("ambient family does not match the patch model: {0}")]
    FamilyMismatch(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    /// The shooting solver could not bracket a curvature-equalizing
    /// acceleration.
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
