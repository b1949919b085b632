//! Single-copy quantum state estimation with group-structured measurements.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Hermitian spectral routines, validated
//!   [`DensityMatrix`] and [`UnitaryMatrix`] types.
//! - [`groups`]: finite (projective) unitary representations used as measurement
//!   groups, their Cayley operators and the commutativity residual.
//! - [`povm`]: group-covariant POVMs, SIC fiducial search and prime-dimension MUBs.
//! - [`estimators`]: Born sampling plus the standard, group-averaged and expected
//!   estimators.
//! - [`metrics`]: fidelities, trace distance, purity, structural capacity, entropies.
//! - [`gevp`]: the double-commutator generalized eigenproblem and the two-stage
//!   adaptive protocol built on it.
//! - [`ensembles`]: Bloch-vector qubits and Ginibre states with purity control.
//! - [`experiments`]: the qubit worked example, the qudit Monte Carlo sweep, the
//!   capacity scan and the adaptive demo, with CSV/JSON output.

#![forbid(unsafe_code)]

pub mod ensembles;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod gevp;
pub mod groups;
pub mod linalg;
pub mod metrics;
mod optim;
pub mod povm;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, DensityMatrix, UnitaryMatrix};
