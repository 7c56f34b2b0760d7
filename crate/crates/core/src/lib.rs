//! Proper range bases and full-rank factorizations of rational matrices given by
//! descriptor realizations.

pub mod dss;
pub mod error;
pub mod fact;
pub mod klf;
pub mod numkernel;
pub mod range;
pub mod verify;

pub use error::{Error, Result};
