//! Partition functions, Gibbs states, the KMS condition and measure values.

pub mod measure;
pub mod partition;
pub mod precision;
pub mod state;

pub use partition::{partition_global, partition_prime, zeta, PartitionReport};
pub use precision::{Beta, Certified, CertifiedOut, Ctx, DEFAULT_DIGITS};
pub use state::{kms_residual, phi, StateSpec};
