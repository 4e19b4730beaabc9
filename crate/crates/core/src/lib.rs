pub mod acquisition;
pub mod benchmarks;
#[cfg(feature = "cli")]
pub mod cli;
pub mod combinatorics;
pub mod engine;
pub mod error;
pub mod optim;
pub mod surrogate;

pub use error::{Error, Result};
