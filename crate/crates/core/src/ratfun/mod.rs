//! Exact multivariate Laurent polynomials and rational functions over Q in
//! the variables `p, X, t, Y, Z`, with truncated power series in `t`.

pub mod gcd;
pub mod mpoly;
pub mod rfun;
pub mod series;

pub use gcd::{gcd, monic};
pub use mpoly::{mono, Exps, MPoly, Var, NVARS};
pub use rfun::{probably_equal, RFun};
pub use series::TSeries;
