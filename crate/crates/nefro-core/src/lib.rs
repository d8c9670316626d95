//! Learning SINR–capacity network feature relationships (NFRs) from
//! coexistence-network data and substituting them for theoretical
//! constraints in capacity/SINR optimization.
//!
//! The crate is a pipeline of four stages:
//!
//! 1. [`coexsim`] — deterministic, seeded generator of `(SINR, capacity)`
//!    feature points for dense LTE-U/LAA + Wi-Fi coexistence scenarios at
//!    MAC-abstraction level.
//! 2. [`regress`] — OLS, ridge, and kernel ridge regression with polynomial
//!    feature expansion, plus the R²/RSD/cross-validation diagnostics used
//!    to score capacity–interference relationship (CIR) models.
//! 3. [`modelsel`] — the regression model selection policy: 5-fold CV
//!    averaged over 30 runs, LOF outlier handling, degree 1–3 candidates
//!    with a significance gate on cubic terms, and component-level
//!    comparison analytics.
//! 4. [`nefropt`] — builds paired optimization problems (theoretical
//!    capacity–SINR relation vs. learned quadratic CIR), solves both with
//!    an augmented-Lagrangian / projected-gradient solver, and measures
//!    convergence-time fraction (CTF) and accuracy.
//!
//! All operations are pure functions of their inputs and an explicit seed;
//! identical inputs produce bit-identical outputs. Scenario-level loops run
//! on rayon when the `parallel` feature (default) is enabled and fall back
//! to sequential iteration otherwise; results are order-stable either way.

pub mod coexsim;
pub mod error;
pub mod exec;
pub mod modelsel;
pub mod nefropt;
pub mod regress;
pub mod seed;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
