//! Exact cohomology for weighted differential algebras.
//!
//! A differential algebra of weight λ is an associative algebra `A` with a
//! linear operator `d` satisfying `d(xy) = d(x)y + x d(y) + λ d(x) d(y)`.
//! Everything here works from structure constants over an exact field:
//!
//! - [`linalg`]: exact scalars, dense matrices, rank, kernels and solving;
//! - [`algebra`]: algebras, bimodules, axiom validation, the deformed
//!   bimodule, semidirect products and the kernel construction;
//! - [`cochain`]: cochains and the four differentials (Hochschild, operator,
//!   the weighted cochain map and the combined differential);
//! - [`cohomology`]: differentials as matrices, cohomology dimensions and
//!   representatives, and the long exact sequence check;
//! - [`extension`]: abelian extensions and their classification;
//! - [`deformation`]: truncated formal deformations, gauges and the
//!   order-by-order trivialization.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod cochain;
pub mod cohomology;
pub mod corpus;
pub mod deformation;
mod error;
pub mod extension;
pub mod linalg;
pub mod scalar;

pub use error::Error;
pub use linalg::{Matrix, Vector};
pub use scalar::{Field, Scalar};
