use num_complex::Complex64 as C64;
use thiserror::Error;

/// Errors shared by every layer of the crate.
///
/// Evaluators deep inside difference operators return these too, so the
/// type is `Clone` and carries only plain data.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A truncated series or product hit its term cap before the tail
    /// dropped below the context threshold.
    #[error("no convergence in {what}: {terms} terms, tail {tail:e}")]
    NonConvergence {
        what: &'static str,
        terms: usize,
        tail: f64,
    },

    /// Evaluation too close to a pole of the requested function.
    #[error("pole of {what} near z = {z}")]
    Pole { what: &'static str, z: C64 },

    /// Invalid argument (wrong range, vanishing denominator, bad modulus).
    #[error("domain error: {0}")]
    Domain(String),

    /// Jackson summation requested for parameters that are not balanced.
    #[error("balancing condition violated: residual {residual:e}")]
    BalanceViolation { residual: f64 },

    /// Pairing of two combs whose finiteness classes make the sum infinite.
    #[error("pairing is an infinite sum for these finiteness classes")]
    InfiniteSum,

    /// Two difference operators whose shift lattices cannot be aligned.
    #[error("shift lattices incommensurate: offset mismatch {mismatch:e}")]
    LatticeMismatch { mismatch: f64 },

    /// Unknown verification suite or identity name.
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    /// Malformed configuration input.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
