//! Finite quantum groups, Galois objects and Morita–Galois bi-actions on
//! finite-dimensional C*-algebras, with numerical certificates for every
//! identity that is checked.

pub mod coaction;
pub mod csalg;
pub mod error;
pub mod examples;
pub mod fqgroup;
pub mod io;
pub mod linalg;
pub mod morita;

pub use error::{Error, Result};

/// Numerical settings shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Absolute tolerance on residual norms.
    pub tol: f64,
    /// Seed for every randomized step (Wedderburn, sketching).
    pub seed: u64,
    /// Worker threads for independent sub-checks; 1 keeps everything on the caller's thread.
    pub jobs: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { tol: 1e-9, seed: 0, jobs: 1 }
    }
}

impl Config {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    /// Acceptance rule for a residual measured on data of magnitude `scale`.
    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.tol * 10.0 * scale.max(1.0)
    }
}
