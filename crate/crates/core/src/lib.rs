//! Exact arithmetic toolkit for the exceptional Jordan algebra of degree three,
//! its 56-dimensional Freudenthal module, Dirichlet character sums, local Siegel
//! series, and the Euler-product form of twisted Koecher-Maass series of lifts
//! from elliptic eigenforms to the exceptional tube domain.
//!
//! Everything on an identity-checking path is exact: rationals are
//! arbitrary-precision, character values live in cyclotomic fields, and
//! symbolic identities are checked in a Laurent polynomial / rational function
//! ring. Floating point only appears in convenience columns of reports.

pub mod arith;
pub mod charsum;
pub mod cli;
pub mod error;
pub mod freudenthal;
pub mod jordan;
pub mod kmseries;
pub mod linalg;
pub mod octonion;
pub mod ratfun;
pub mod siegel;

pub use error::{Error, Result};
