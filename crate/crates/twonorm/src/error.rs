//! Error type shared by all laboratory modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain has no modes (N = 0)")]
    EmptyDomain,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operators live on different domains or truncation sizes")]
    DomainMismatch,

    #[error("operator is not in the isometry group: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotInGroup { defect: f64, tol: f64 },

    #[error("operator is not in the Lie algebra: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotInLieAlgebra { defect: f64, tol: f64 },

    #[error("vector is not L2-normalized: |f|_2 = {norm:.12} deviates from 1 by more than {tol:.1e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("frame is not L2-orthonormal: Gram defect {defect:.3e}")]
    NonOrthonormalFrame { defect: f64 },

    #[error("block matrix is not unitary: defect {defect:.3e}")]
    NonUnitaryBlock { defect: f64 },

    #[error("unimodular symbol must supply an analytic derivative")]
    MissingDerivative,

    #[error("symbol is not unimodular at x = {at}: |theta| = {modulus:.12}")]
    NotUnimodular { at: f64, modulus: f64 },

    #[error("failed to bracket zero {index} of J_{order} within the scanned range")]
    BesselBracket { order: u32, index: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("too few samples: need at least {min}, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("spectrum too short: need at least {min} entries, got {got}")]
    SpectrumTooShort { min: usize, got: usize },

    #[error("endpoint correction failed after retries: residual {defect:.3e}")]
    EndpointCorrection { defect: f64 },

    #[error("geodesic endpoint defect {defect:.3e} exceeds bound {bound:.3e}")]
    GeodesicEndpoint { defect: f64, bound: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
