//! Elimination of the Satake parameter from symmetric Laurent polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::qexp::QExpansion;
use crate::arith::{fmt_q, q, qpow, Q};
use crate::error::{Error, Result};
use crate::ratfun::{MPoly, TSeries, Var};
use crate::siegel::{local_factor_rhs, PrimeSpec};

/// Coefficients `c_j` with `poly(alpha) = c_0 + sum_{j >= 1} c_j (alpha^j + alpha^-j)`.
pub fn symmetric_coefficients(poly: &MPoly) -> Result<Vec<Q>> {
    if poly.involves(Var::P) || poly.involves(Var::T) || poly.involves(Var::Y) || poly.involves(Var::Z) {
        return Err(Error::Precondition(format!("{poly} is not a Laurent polynomial in one variable")));
    }
    let top = poly.max_exp(Var::X).unwrap_or(0).max(-poly.min_exp(Var::X).unwrap_or(0));
    let mut out = Vec::with_capacity(top as usize + 1);
    for j in 0..=top {
        let c = poly.coeff_of(Var::X, j).as_constant().unwrap_or_else(Q::zero);
        let mirror = poly.coeff_of(Var::X, -j).as_constant().unwrap_or_else(Q::zero);
        if c != mirror {
            return Err(Error::Precondition(format!("{poly} is not symmetric under X -> 1/X")));
        }
        out.push(c);
    }
    Ok(out)
}

/// Hecke-side form of `p^(e/2) * poly(alpha_p)`: coefficients `d_j` with
/// value `sum_j d_j a(p^j)`, using
/// `alpha^j + alpha^-j = (a(p^j) - p^(w-1) a(p^(j-2))) / p^(j (w-1) / 2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeForm {
    pub p: u64,
    pub terms: Vec<Q>,
}

impl HeckeForm {
    pub fn new(poly: &MPoly, p: u64, weight: u32, half_exp: i64) -> Result<Self> {
        let c = symmetric_coefficients(poly)?;
        let w1 = weight as i64 - 1;
        let pq = q(p as i64);
        let mut terms = vec![Q::zero(); c.len()];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let twice = half_exp - j as i64 * w1;
            if twice % 2 != 0 {
                return Err(Error::Precondition(format!(
                    "half-integral power of {p} at alpha^{j} (exponent {twice}/2)"
                )));
            }
            let scale = cj * qpow(&pq, twice / 2);
            terms[j] += &scale;
            if j >= 2 {
                terms[j - 2] -= scale * qpow(&pq, w1);
            }
        }
        Ok(HeckeForm { p, terms })
    }

    pub fn evaluate(&self, f: &QExpansion) -> Result<Q> {
        let mut acc = Q::zero();
        let mut pj: u64 = 1;
        for (j, d) in self.terms.iter().enumerate() {
            if j > 0 {
                pj = pj
                    .checked_mul(self.p)
                    .ok_or_else(|| Error::Precondition("prime power overflow".into()))?;
            }
            if !d.is_zero() {
                acc += d * Q::from_integer(f.a(pj)?.clone());
            }
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(j, d)| {
                let coeff = if d.is_one() && j > 0 { String::new() } else { fmt_q(d) };
                match j {
                    0 => coeff,
                    1 => format!("{coeff}a({})", self.p),
                    _ => format!("{coeff}a({}^{j})", self.p),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `prod_{i=1..3} (1 - p^(3-4i) alpha^-1 t)^-1 (1 - p^(3-4i) alpha t)^-1` through `t^M`,
/// with `alpha` carried by the variable `X`.
pub fn local_l_factor_product(p: &PrimeSpec, max_order: usize) -> Result<TSeries> {
    TSeries::of(&local_factor_rhs(p), max_order)
}

pub(crate) fn big(x: &BigInt) -> Q {
    Q::from_integer(x.clone())
}
