use thiserror::Error;

use crate::brasil::BestApproximation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("coincident nodes at {0}")]
    CoincidentNodes(f64),

    #[error("evaluation point {0} hits a pole")]
    PoleHit(f64),

    #[error("pole with zero real part at index {0}")]
    DegeneratePole(usize),

    #[error("denominator collapses at x = {0} (spurious real pole)")]
    SpuriousRealPole(f64),

    #[error("null space is not one-dimensional (sigma_min = {sigma_min:e}, sigma_next = {sigma_next:e})")]
    RankDeficient { sigma_min: f64, sigma_next: f64 },

    #[error("pole extraction found {found} finite poles, expected {expected}")]
    DegenerateNullSpace { found: usize, expected: usize },

    #[error("frequency {omega} is outside (0, {limit}) for degree {n}")]
    InfeasibleFrequency { n: usize, omega: f64, limit: f64 },

    #[error("phase error does not change sign across [{0}, {1}]")]
    MissingSignChange(f64, f64),

    #[error("frequency {omega} does not match interval half-width {half_width}")]
    IntervalMismatch { omega: f64, half_width: f64 },

    #[error("no convergence after {iterations} iterations (deviation {deviation:e}): {reason}")]
    NonConvergence {
        iterations: usize,
        deviation: f64,
        reason: String,
        best: Box<BestApproximation>,
    },

    /// The error to resolve is at the level of floating-point rounding, so
    /// equioscillation cannot be measured.
    #[error("degree {n} at frequency {omega} is rounding-limited (estimated error {estimate:e}): {source}")]
    RoundingLimited {
        n: usize,
        omega: f64,
        estimate: f64,
        source: Box<Error>,
    },

    #[error("eigenvalue computation failed")]
    Eigen,
}
