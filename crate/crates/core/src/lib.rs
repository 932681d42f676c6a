//! Exact computations with odd transposition algebras built from finite
//! transposition systems.

pub mod algebra;
pub mod axioms;
pub mod cli;
pub mod spectral;
pub mod suite;
pub mod error;
pub mod exact;
pub mod forms;
pub mod fusion;
pub mod io;
pub mod system;

pub use error::{Error, Result};
