//! The mechanical geometer: construction programs are compiled to
//! polynomial ideals over Q, and Groebner-basis computations answer
//! questions about them (proofs, discovery, relations, loci, envelopes).

pub mod algebra;
pub mod construction;
pub mod instance;
pub mod reason;
mod scalar;

pub use scalar::Scalar;
