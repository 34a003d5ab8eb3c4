//! Exact-arithmetic library for local Rankin-Selberg zeta integrals and periods of
//! dihedral GL(2) representations over p-adic fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`exact`] - cyclotomic rationals `Q(zeta_M)` and rational functions / Laurent
//!   series in the formal variable `X = q^{-s}`;
//! * [`localring`] - truncation-free models of `F = Q_p` and quadratic etale algebras
//!   `E/F` (split, inert, ramified), ring-class orders, unit enumeration and Haar
//!   measures;
//! * [`chars`] - multiplicative and additive characters, antinorm characters,
//!   conductors and epsilon factors (Gauss sums);
//! * [`weil`] - Schwartz functions on truncated lattice quotients, the finite Weil
//!   representation, exact Fourier transforms, and maximal-compact averaging;
//! * [`zeta`] - brute-force zeta-integral oracles, closed-form evaluators, L-factors
//!   and the newform/optimal-form period ratio;
//! * [`global`] - assembly of the global constants (Euler-factor identity, c_rs, the
//!   m-bound) for locally dihedral weight-one forms.
//!
//! Everything is exact: there is no floating point anywhere in the crate.

pub mod chars;
pub mod exact;
pub mod global;
pub mod localring;
pub mod weil;
pub mod zeta;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Galois automorphism index not coprime to the cyclotomic order.
    #[error("t = {t} is not coprime to M = {m}")]
    NotCoprime { t: i64, m: u64 },
    /// Evaluation of a rational function at a pole.
    #[error("evaluation at a pole of the rational function")]
    Pole,
    /// A rational function with identically zero denominator.
    #[error("zero denominator")]
    ZeroDenominator,
    /// An enumeration or residue computation exceeded the working precision.
    #[error("requested depth {needed} exceeds working precision {available}")]
    Precision { needed: i64, available: i64 },
    /// A Schwartz-function operation left the configured support window.
    #[error("support window overflow: {0}")]
    WindowOverflow(String),
    /// A case outside the hypotheses of the formula being evaluated.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// A standing hypothesis of the theory is violated by the input.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// Malformed configuration input.
    #[error("configuration error: {0}")]
    Config(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
