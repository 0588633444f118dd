//! Solvers for one-dimensional hyperbolic conservation laws with a single
//! uncertain parameter.
//!
//! The random parameter is discretized with a multi-element stochastic
//! Galerkin expansion. Three schemes share the same finite-volume machinery:
//! plain stochastic Galerkin (`Scheme::Sg`), stochastic Galerkin with CWENOZ
//! reconstruction in space and a minmod slope limiter in the random variable
//! (`Scheme::WenoSg`), and a fully two-dimensional CWENOZ reconstruction on
//! x-ξ cells (`Scheme::Weno2d`).

// negated comparisons also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod cases;
pub mod diagnostics;
pub mod error;
pub mod limiters;
pub mod linalg;
pub mod models;
pub mod solver;
pub mod study;
pub mod weno;

pub use error::{Error, Result};
