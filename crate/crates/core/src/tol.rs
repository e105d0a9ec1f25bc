//! Numerical tolerances shared by every routine in the crate.
//!
//! Classification thresholds are relative to the magnitude of the matrix
//! being classified, so a positive rescaling never changes a sign pattern or
//! a graph.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Entries with `|x| <= zero_rel * max|entry|` count as zero.
    pub zero_rel: f64,
    /// Cholesky fails when a squared pivot drops to `pivot_rel * max diagonal`.
    pub pivot_rel: f64,
    /// Allowed `max|A * A^-1 - I|` per unit of dimension.
    pub residual_per_n: f64,
    /// Relative accuracy target for eigenvalue routines.
    pub eig: f64,
    pub max_iters: usize,
    /// Relative spread allowed in a leaf's column ratio.
    pub ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_rel: 1e-12,
            pivot_rel: 1e-12,
            residual_per_n: 1e-9,
            eig: 1e-10,
            max_iters: 10_000,
            ratio: 1e-8,
        }
    }
}

impl Tolerances {
    /// Absolute zero threshold for a matrix whose largest entry magnitude is `scale`.
    pub fn zero_abs(&self, scale: f64) -> f64 {
        self.zero_rel * scale
    }

    pub fn residual(&self, n: usize) -> f64 {
        self.residual_per_n * n as f64
    }
}
