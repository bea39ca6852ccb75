//! Reduction-based creative telescoping in Weyl algebras.

pub mod arith;
pub mod error;
pub mod extension;
pub mod format;
pub mod groebner;
pub mod kregular;
pub mod reduction;
pub mod telescoping;
pub mod weyl;

pub use error::{Error, Result};
