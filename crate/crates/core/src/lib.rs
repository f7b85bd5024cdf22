//! Exact thermal (Gibbs) states of small systems of coupled two-level systems,
//! and the local l1 coherence those states carry in the uncoupled energy basis.
//!
//! The crate is organised bottom-up:
//!
//! - [`operator`]: Pauli strings, operator specs and their dense matrices.
//! - [`models`]: the catalogue of coupled-TLS Hamiltonians.
//! - [`thermal`]: Hermitian eigendecomposition, Gibbs states, partial traces.
//! - [`coherence`]: the local coherence measure and the Z2 symmetry test.
//! - [`analytic`]: closed-form and asymptotic coherence expressions.
//! - [`sweep`]: temperature sweeps, CSV output, tail fits, optimal coupling
//!   search, figure presets and the verification battery.

// `!(x > 0.0)` is used throughout to reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod coherence;
mod error;
pub mod models;
pub mod operator;
pub mod sweep;
pub mod thermal;

pub use error::{Error, Result};

/// Version string echoed into sweep provenance.
pub const ENGINE_VERSION: &str = concat!("tls-coherence ", env!("CARGO_PKG_VERSION"));
