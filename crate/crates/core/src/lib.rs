//! Statevector simulation of multiparty quantum-state sharing for an
//! arbitrary two-qubit state over `2N` EPR pairs, with exhaustive and
//! sampled verification that the receiver always recovers the secret.

pub mod bases;
pub mod cli;
pub mod error;
pub mod protocol;
pub mod statevec;
pub mod verify;

pub use error::{Error, Result};
