//! Explicit radial solutions of the three-dimensional wave equation, the
//! exterior Neumann and Dirichlet problems around a small ball of radius ε,
//! and tools for measuring how fast the exterior solutions approach the
//! whole-space one as ε shrinks.

// rule tables keep their published digits; `!(x > 0.0)` also rejects NaN
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod energy;
pub mod fd_oracle;
pub mod harness;
pub mod error;
pub mod quadrature;
pub mod radial_data;

pub use error::{Result, WaveError};
