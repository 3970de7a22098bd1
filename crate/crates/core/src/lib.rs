//! Phase retrieval by optimization over magnitude polytopes.

pub mod algorithms;
pub mod error;
pub mod harness;
pub mod measurement;
pub mod operator;
pub mod oracle;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod theory;

pub use error::{Error, Result};
