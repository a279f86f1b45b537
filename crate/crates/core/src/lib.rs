//! Finite-precision verifier for log de Rham-Witt sheaves with zeros along a divisor.
//!
//! The local model is a truncated power series ring over a finite field.  Both
//! sides of each structure statement are computed as explicit submodules and
//! compared with exact linear algebra.

pub mod cli;
pub mod divmodel;
pub mod engine;
pub mod error;
pub mod forms;
pub mod modlin;
pub mod series;
pub mod wittdrw;

pub use error::{Error, Result};
