//! Core library for simulating non-unitary operators on gate-based quantum
//! computers via unitary dilation.
//!
//! The pipeline: factor an arbitrary operator with the SVD ([`numerics`]),
//! lift its diagonal singular-value factor to a unitary on one extra ancilla
//! qubit ([`dilation`]), compile the result to elementary gates ([`circuit`]),
//! and run it on a statevector simulator with post-selection and tomography
//! ([`simulator`]). [`channels`] layers Kraus-operator open-system dynamics on
//! top of the same machinery.

pub mod channels;
pub mod circuit;
pub mod dilation;
pub mod error;
pub mod numerics;
pub mod simulator;

pub use error::{Error, Result};
