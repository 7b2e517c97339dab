//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve specification: {0}")]
    InvalidCurve(String),

    #[error("curve self-intersects near samples {i} and {j} (|gamma_i - gamma_j| = {dist:.3e})")]
    SelfIntersection { i: usize, j: usize, dist: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("matrix is not symmetric (max defect {0:.3e})")]
    NotSymmetric(f64),

    #[error("no sign change in bracket [{lo}, {hi}]: f(lo) = {flo:.3e}, f(hi) = {fhi:.3e}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("bound state {j} does not exist for alpha = {alpha} above kappa_min = {kappa_min}")]
    StateNotFound { j: usize, alpha: f64, kappa_min: f64 },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("certificate refused: {0}")]
    CertificateRefused(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
