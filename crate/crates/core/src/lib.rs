//! Integral representations of Jacobi polynomials and the heat kernel of the
//! monopole (magnetic) Laplacian on the Riemann sphere.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! - [`orthopoly`]: Jacobi, Gegenbauer and Legendre polynomials by forward
//!   three-term recurrence, plus the weighted Christoffel–Darboux partial sum.
//! - [`hypergeom`]: terminating Gauss series `2F1(-m, b; c; x)` and the
//!   hypergeometric forms of the Jacobi and Gegenbauer families. These serve as
//!   an independent evaluation route for the recurrences.
//! - [`quadrature`]: Gauss rules for the weights `(1 - v^2)^a` and the
//!   substitution that removes the inverse square-root endpoint singularity of
//!   Dirichlet–Mehler type integrals.
//! - [`identity_lab`]: right-hand sides of every integral representation and a
//!   grid driver that compares them with direct polynomial evaluation.
//! - [`heatkernel`]: spectrum, reproducing kernels and the heat kernel, both as
//!   a spectral series and as a theta-function integral.
//!
//! IO, threading and the command line live in the `sphereheat` crate.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod dd;
mod error;
pub mod heatkernel;
pub mod hypergeom;
pub mod identity_lab;
pub mod orthopoly;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
