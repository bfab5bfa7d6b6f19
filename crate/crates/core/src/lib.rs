//! Exact Bayes–Nash equilibrium computation for first-price auctions with
//! correlated (in particular affiliated) values.
//!
//! Everything is computed over arbitrary-precision rationals. The crate is
//! `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod engine;
pub mod densify;
pub mod error;
pub mod model;
pub mod rational;
pub mod reduce;
pub mod search;

pub use error::{Error, ValidationReport, Violation};
pub use rational::Rational;
