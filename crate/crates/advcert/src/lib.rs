//! Certification toolkit turning polynomial-method lower bounds (dual
//! polynomials) into explicit adversary-method lower bounds for quantum
//! query complexity, with every step of the construction verified
//! numerically on desk-scale functions: LP dualities, projector towers,
//! Gram-matched isometries, masked spectral norms, and the final bound
//! values.

pub mod adversary;
pub mod cli;
pub mod decomp;
pub mod domain;
pub mod error;
pub mod linalg;
pub mod pipeline;
pub mod poly;
pub mod simplex;

pub use error::{Error, Result};

/// Numerical tolerances, one per verified identity class.  All configurable;
/// the defaults are the values used by the certificate ledger.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// LP feasibility and complementary-slackness slack.
    pub feasibility: f64,
    /// Allowed gap between primal and dual LP objectives.
    pub duality_gap: f64,
    /// Dual-polynomial orthogonality and normalization.
    pub dual_validity: f64,
    /// Entrywise Gram-matrix agreement between the two input sets.
    pub gram: f64,
    /// Frobenius residual for projector identities.
    pub projector_residual: f64,
    /// Entries that must vanish exactly (masked blocks).
    pub entry_zero: f64,
    /// Normalization check for probability distributions read from files.
    pub probability: f64,
    /// Mass checks on split outputs.
    pub split_mass: f64,
    /// Relative eigenvalue threshold for rank decisions.
    pub rank_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feasibility: 1e-8,
            duality_gap: 1e-7,
            dual_validity: 1e-9,
            gram: 1e-10,
            projector_residual: 1e-9,
            entry_zero: 1e-12,
            probability: 1e-9,
            split_mass: 1e-10,
            rank_factor: 1e-10,
        }
    }
}

/// Toolkit-wide configuration.
#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub tol: Tolerances,
    pub spectral: linalg::SpectralConfig,
    /// Dual-objective threshold gating the strong half of the pipeline chain.
    pub dual_threshold: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: Tolerances::default(),
            spectral: linalg::SpectralConfig::default(),
            dual_threshold: 1.0 / 3.0,
        }
    }
}

impl Config {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.spectral.seed = seed;
        self
    }
}
