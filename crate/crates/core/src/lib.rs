//! Exact evaluation of the standard, Capelli, double Capelli and Domokos
//! polynomials on matrices over GF(p) and the rationals, together with the
//! machinery built on them: subalgebra closure, identity checking, witness
//! construction, and detection of whether a set of matrices generates the
//! full matrix algebra.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod detect;
pub mod error;
pub mod exec;
pub mod field;
pub mod lab;
pub mod matrix;
pub mod poly;
pub mod rng;
pub mod span;

pub use algebra::AlgebraBasis;
pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals, ScalarDomain, DEFAULT_PRIME};
pub use matrix::Matrix;
pub use poly::{EvalImpl, PolynomialSpec, Substitution};
