//! Exact computations for the Hecke pair `(M2(Q) ⋊ GL2+(Q), M2(Z) ⋊ SL2(Z))`.

pub mod cli;
pub mod coset;
pub mod error;
pub mod exact;
pub mod hecke;
pub mod kms;
pub mod lattice;
pub mod spectral;

pub use error::{Error, Result};
