//! Exact p-adic approximations of vertex functions for cotangent bundles of
//! Grassmannians, and the congruences they satisfy.

pub mod cli;
pub mod congruence;
pub mod continuation;
pub mod engine;
pub mod error;
pub mod multipoly;
pub mod padic;
pub mod points;
pub mod poly;
pub mod quiver;
pub mod report;
pub mod selftest;
pub mod vertex;

pub use error::{Error, Result};
