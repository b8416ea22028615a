use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be finite and strictly positive, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("step size must be finite and strictly positive, got {0}")]
    InvalidStepSize(f64),

    #[error("state ({x}, {y}) is not finite")]
    NonFiniteState { x: f64, y: f64 },

    #[error("{what} is undefined at ({x}, {y})")]
    Domain { what: &'static str, x: f64, y: f64 },

    #[error("({x}, {y}) is not a fixed point (residual {residual:e})")]
    NotAFixedPoint { x: f64, y: f64, residual: f64 },

    #[error("state ({x}, {y}) lies on a region boundary or outside the open quadrant")]
    AmbiguousRegion { x: f64, y: f64 },

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("invalid closure measurement: {0}")]
    ClosurePrecondition(String),

    #[error("trajectories cannot be overlaid: {0}")]
    Overlay(String),
}
