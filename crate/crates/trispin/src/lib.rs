//! Verification library for a three-spin exclusion measurement.
//!
//! The crate certifies, end to end, the quantitative content of a triple-dot
//! three-spin model and the state-exclusion protocol built on it:
//!
//! - [`linalg`] — dense complex vectors/operators and a deterministic
//!   cyclic-Jacobi Hermitian eigensolver for dimensions up to 2¹⁰.
//! - [`hamiltonian`] — assembly of the 8×8 three-spin Hamiltonian from
//!   coupling tensors, the transcribed reference matrix, closed-form
//!   eigensystem certification, and coupling/spectrum/degeneracy audits.
//! - [`exclusion`] — θ-parameterized product preparations, Born-rule
//!   probability tables, perfect exclusion matchings, and the two-qubit
//!   exclusion protocol.
//! - [`ontic`] — finite ontological models over a product ontic space,
//!   consistency checking against quantum statistics, the pigeonhole
//!   contradiction bound, and seeded Monte-Carlo runs.
//! - [`report`] — canonical JSON with byte-identical round-trips, plus CSV
//!   emission for θ-scans.
//! - [`config`] — run configuration merged from CLI flags and config files.
//! - [`suite`] — the full verification portfolio used by the `all-checks`
//!   command and the acceptance tests.

pub mod config;
pub mod exclusion;
pub mod hamiltonian;
pub mod linalg;
pub mod ontic;
pub mod report;
pub mod suite;

/// Errors produced by the verification library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("empty tensor product")]
    EmptyTensorProduct,

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("non-finite entry rejected (NaN or infinity)")]
    NonFinite,

    #[error("vector is not normalized: squared norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("matrix is not Hermitian: max|A - A†| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver failed to converge after {sweeps} sweeps: off-diagonal norm {off_norm:.3e}")]
    NoConvergence { off_norm: f64, sweeps: usize },

    #[error("basis is not orthonormal and complete: max deviation {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("no perfect exclusion matching exists for the supplied states")]
    NoPerfectMatching {
        /// Full |⟨outcome_i|prep_j⟩| table (rows = outcomes, columns =
        /// preparations) so the failure can be audited.
        amplitude_table: Vec<Vec<f64>>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
