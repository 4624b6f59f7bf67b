//! Exact trace morphisms of finite branched coverings and flatness
//! certificates for weighted families of cycles.
//!
//! Everything is computed over the rationals. The [`poly`] kernel supplies
//! polynomials, Gröbner bases and quotient algebras; the remaining modules
//! build coverings, traces of functions and relative forms, residues, and
//! verdicts on top of it.

pub mod covering;
pub mod error;
pub mod flatness;
pub mod fundclass;
pub mod poly;
pub mod symprod;
pub mod traceforms;

pub use error::{Error, Result};
