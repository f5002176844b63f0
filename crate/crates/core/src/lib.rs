//! Exact computer algebra for the quasi-shuffle algebra 𝒜(P) and its
//! evaluation maps into pseudo-differential operators (KP hierarchy) and
//! matrix Laurent series (AKNS hierarchy).

pub mod cli;
pub mod diffexpr;
pub mod error;
pub mod expr;
pub mod golden;
pub mod laurent;
pub mod matrix;
pub mod ncpoly;
pub mod psido;
pub mod qshuffle;
pub mod reduction;
pub mod ring;
pub mod scalar;

pub use error::{Error, Result};
