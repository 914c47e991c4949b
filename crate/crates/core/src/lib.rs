//! Simulation and verification tools for slow decorrelation in KPZ-class
//! growth models.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod environment;
pub mod error;
pub mod experiments;
pub mod models;
pub mod pasep;
pub mod passage;
pub mod refdist;
pub mod theory;

pub use error::{Error, Result};
