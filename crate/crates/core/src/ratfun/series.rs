use super::mpoly::{MPoly, Var};
use super::rfun::RFun;
use crate::error::{Error, Result};

/// Power series in `t` truncated after `t^order`, with coefficients that
/// are rational functions of the other variables.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    coeffs: Vec<RFun>,
}

impl TSeries {
    pub fn zero(order: usize) -> Self {
        TSeries {
            coeffs: vec![RFun::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &RFun {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RFun] {
        &self.coeffs
    }

    /// Expansion of an ordinary-in-`t` polynomial.
    pub fn from_poly(p: &MPoly, order: usize) -> Result<Self> {
        if p.min_exp(Var::T).unwrap_or(0) < 0 {
            return Err(Error::Series(format!("negative power of t in {p}")));
        }
        Ok(TSeries {
            coeffs: (0..=order)
                .map(|k| RFun::from_poly(p.coeff_of(Var::T, k as i32)))
                .collect(),
        })
    }

    /// `1 / f`, requiring a nonzero `t`-constant term.
    pub fn inverse_of(f: &MPoly, order: usize) -> Result<Self> {
        let c0 = f.coeff_of(Var::T, 0);
        if c0.is_zero() {
            return Err(Error::Series(format!("{f} vanishes at t = 0")));
        }
        if f.min_exp(Var::T).unwrap_or(0) < 0 {
            return Err(Error::Series(format!("negative power of t in {f}")));
        }
        let inv0 = RFun::from_poly(c0).recip()?;
        let fc: Vec<RFun> = (0..=order)
            .map(|k| RFun::from_poly(f.coeff_of(Var::T, k as i32)))
            .collect();
        let mut out = vec![inv0.clone()];
        for n in 1..=order {
            let mut acc = RFun::zero();
            for i in 1..=n {
                if !fc[i].is_zero() {
                    acc = &acc + &(&fc[i] * &out[n - i]);
                }
            }
            out.push(-&(&acc * &inv0));
        }
        Ok(TSeries { coeffs: out })
    }

    /// Expansion of a rational function whose denominator factors do not vanish at `t = 0`.
    pub fn of(f: &RFun, order: usize) -> Result<Self> {
        let mut acc = Self::from_poly(f.numerator(), order)?;
        for (g, k) in f.denominator_factors() {
            let inv = Self::inverse_of(g, order)?;
            for _ in 0..*k {
                acc = acc.mul(&inv);
            }
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(RFun::zero(), |acc, i| {
                    if self.coeffs[i].is_zero() || other.coeffs[n - i].is_zero() {
                        acc
                    } else {
                        &acc + &(&self.coeffs[i] * &other.coeffs[n - i])
                    }
                })
            })
            .collect();
        TSeries { coeffs }
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let order = self.order().min(other.order());
        TSeries {
            coeffs: (0..=order).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn geometric() {
        let f = &MPoly::one() - &MPoly::monomial(&[(Var::X, 1), (Var::T, 1)], q(1));
        let s = TSeries::inverse_of(&f, 6).unwrap();
        for k in 0..=6 {
            assert_eq!(s.coeff(k).as_poly(), Some(&MPoly::var_pow(Var::X, k as i32)));
        }
        let back = s.mul(&TSeries::from_poly(&f, 6).unwrap());
        assert_eq!(back.coeff(0), &RFun::one());
        assert!((1..=6).all(|k| back.coeff(k).is_zero()));
    }

    #[test]
    fn non_monomial_constant_term() {
        let two_minus_x = &MPoly::int(2) - &MPoly::var(Var::X);
        let f = &two_minus_x - &MPoly::var(Var::T);
        let s = TSeries::inverse_of(&f, 3).unwrap();
        let expect = RFun::new(MPoly::one(), two_minus_x.pow(4)).unwrap();
        assert_eq!(s.coeff(3), &expect);
        assert!(TSeries::inverse_of(&MPoly::var(Var::T), 2).is_err());
    }
}
