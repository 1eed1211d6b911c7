use thiserror::Error;

/// Failures reported by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("solution blew up: |u| = {value:e} exceeds the ceiling at r = {radius}")]
    BlowUp { radius: f64, value: f64 },
    #[error("step size underflow at r = {radius}")]
    StepUnderflow { radius: f64 },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
    #[error("residual does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("solution type mismatch: wanted {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("the constant solution has no type")]
    ConstantSolution,
    #[error("critical-point structure violated: {0}")]
    StructureViolation(String),
    #[error("no critical point before r = {r_max}")]
    Horizon { r_max: f64 },
    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),
    #[error("integrand not integrable at 0 (alpha + nu*beta = {0} <= -1)")]
    NotIntegrable(f64),
    #[error("seed failure near bifurcation value {param}: {reason}")]
    SeedFailure { param: f64, reason: String },
    #[error("resonance: {0}")]
    Resonance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
