//! Exact first-order Trotter errors for bounded two-term splittings
//! `H = A + B`, together with the known upper bounds and explicit lower
//! bounds on both the operator-norm error and the error on eigenstates.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigensolver, spectral
//!   exponential, operator and Frobenius norms.
//! * [`pauli`]: symbolic weighted Pauli strings with exact commutators and
//!   norm certificates.
//! * [`trotter`]: first- and second-order product formulas and the exact
//!   error metrics.
//! * [`bounds`]: every upper and lower bound, shift optimisation and
//!   non-triviality thresholds.
//! * [`models`]: the single-qubit `X`/`Z` splitting and the periodic `XX`
//!   chain with its two-excitation eigenstates.
//! * [`qpe`]: evolution-time thresholds for phase estimation.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod models;
pub mod pauli;
pub mod qpe;
pub mod trotter;

pub use error::{Error, Result};
