//! Exact finite-field arithmetic, polynomial systems and zero counting, with
//! mechanical checkers for the Chevalley-Warning family of congruences and
//! the lower bounds that go with them.

pub mod affine;
pub mod campaign;
pub mod cli;
pub mod constructions;
pub mod counter;
pub mod error;
pub mod ff;
pub mod format;
pub mod geometry;
pub mod poly;
pub mod rng;
pub mod theorems;

pub use error::{Error, Result};
