use thiserror::Error;

use crate::grid::RadialFn;

/// Best iterate reached by a solver that ran out of iterations.
#[derive(Debug, Clone)]
pub struct Unconverged {
    pub u: RadialFn,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),
    #[error("negative input at node {0}: F is only defined on [0, inf)")]
    NegativeInput(usize),
    #[error("degenerate denominator {0:e}")]
    DegenerateDenominator(f64),
    #[error("function vanishes identically")]
    ZeroFunction,
    #[error("no sign change of sigma within [1e-30, 1e30]")]
    BracketFailure,
    #[error("closed-form and bisection roots disagree: {closed} vs {bisected}")]
    RootMismatch { closed: f64, bisected: f64 },
    #[error("solver did not converge after {} iterations (objective {})", .0.iterations, .0.objective)]
    NotConverged(Box<Unconverged>),
    #[error("analytic gradient disagrees with finite differences (relative error {0:e})")]
    GradientInconsistency(f64),
    #[error("solution blew up at r = {0}")]
    BlowUp(f64),
    #[error("terminal flux has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("root finding stalled with terminal flux {0:e}")]
    ShootNotConverged(f64),
    #[error("boundary value u(1) = {0} is not positive")]
    ZeroBoundaryValue(f64),
    #[error("comparison function is not a strict subsolution (residual {0:e})")]
    NotSubsolution(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("inadmissible problem: {0}")]
    Inadmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
