use thiserror::Error;

/// Failure modes of the library. Payloads are stored as `f64` so the type
/// stays independent of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Cartan factor must be positive, got {cartan}")]
    NonPositiveCartan { cartan: f64 },

    #[error("invalid Dyson map: {0}")]
    InvalidMap(String),

    #[error("pole of the trigonometric branch at x = {x}")]
    Pole { x: f64 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("overflow while evaluating {0}")]
    Overflow(String),

    #[error("|z| = {z_abs} >= 1, the Hermitian counterpart does not exist")]
    HermitizationBreakdown { z_abs: f64 },

    #[error("|z| diverges (amplitude/Cartan denominator {denominator} <= 0)")]
    DivergentZ { denominator: f64 },

    #[error("exponent parameter epsilon is negative ({epsilon})")]
    NegativeEpsilon { epsilon: f64 },

    #[error("singular right-hand side: {what} = {value}")]
    SingularRhs { what: &'static str, value: f64 },

    #[error("no real logarithm: {0}")]
    LogBranch(String),

    #[error("squeeze coordinate singular at r = {r}")]
    CoordinateSingularity { r: f64 },

    #[error("branch of the squeeze logarithm changes near t = {time}")]
    BranchCrossing { time: f64 },

    #[error("step size underflow at t = {time} (h = {step})")]
    StepUnderflow { time: f64, step: f64 },

    #[error("integration exceeded {steps} steps at t = {time}")]
    TooManySteps { time: f64, steps: usize },

    #[error("Fock cutoff {needed} exceeds the limit {limit}")]
    Cutoff { needed: usize, limit: usize },

    #[error("linear solve failed: singular matrix")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
