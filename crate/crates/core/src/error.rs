use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} = {value} is invalid: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("state ({x}, {y}) is not finite")]
    NonFiniteState { x: f64, y: f64 },

    /// The map produced a non-finite value from a finite state (overflow).
    #[error("map escaped to a non-finite value")]
    NonFiniteStep,

    #[error("orbit escaped after {completed} post-transient steps (at least {required} needed)")]
    EscapedTooEarly { completed: usize, required: usize },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}
