//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! Elements are coefficient vectors in the power basis `1, z, .., z^(phi(m)-1)`
//! reduced modulo the `m`-th cyclotomic polynomial. Operands of different
//! orders are lifted to the lcm field.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{euler_phi, fmt_q, lcm_u64, Q};

/// Coefficients (low to high) of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("poisoned").get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Phi_d, d | m, d < m.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().expect("poisoned").insert(m, p.clone());
    p
}

fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quo.len()).rev() {
        let c = r[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            r[k + j] -= &c * dj;
        }
        quo[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    quo
}

#[derive(Clone)]
pub struct CycNumber {
    m: u64,
    coeffs: Vec<Q>,
}

impl CycNumber {
    pub fn zero(m: u64) -> Self {
        CycNumber {
            m,
            coeffs: vec![Q::zero(); euler_phi(m) as usize],
        }
    }

    pub fn rational(m: u64, r: Q) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    pub fn one(m: u64) -> Self {
        Self::rational(m, Q::one())
    }

    /// `zeta_m^k`.
    pub fn zeta(m: u64, k: i64) -> Self {
        let mut v = vec![Q::zero(); m as usize];
        v[k.rem_euclid(m as i64) as usize] = Q::one();
        Self::from_powers(m, v)
    }

    /// `sum_k counts[k] zeta_m^k` for `k < m`.
    pub fn from_counts(m: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), m as usize);
        Self::from_powers(m, counts.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    /// Reduce a length-`m` power vector modulo `Phi_m`.
    pub fn from_powers(m: u64, mut v: Vec<Q>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        for k in (deg..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = v[k].clone();
            for (j, pj) in phi.iter().enumerate() {
                if !pj.is_zero() {
                    v[k - deg + j] -= &c * Q::from_integer(pj.clone());
                }
            }
        }
        v.truncate(deg);
        v.resize(deg, Q::zero());
        CycNumber { m, coeffs: v }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The same number viewed in `Q(zeta_m2)`, `m | m2`.
    pub fn lift(&self, m2: u64) -> Self {
        if m2 == self.m {
            return self.clone();
        }
        assert_eq!(m2 % self.m, 0, "cannot lift order {} to {}", self.m, m2);
        let step = (m2 / self.m) as usize;
        let mut v = vec![Q::zero(); m2 as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Self::from_powers(m2, v)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = lcm_u64(self.m, other.m);
        (self.lift(m), other.lift(m))
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut v = vec![Q::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[(m - k) % m] += c;
        }
        Self::from_powers(self.m, v)
    }

    pub fn scale(&self, r: &Q) -> Self {
        CycNumber {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.m), |acc, _| &acc * self)
    }

    /// Rational value if the number lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Floating point value; convenience only.
    pub fn to_complex(&self) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * k as f64 / self.m as f64;
            let c = c.to_f64().unwrap_or(f64::NAN);
            re += c * a.cos();
            im += c * a.sin();
        }
        (re, im)
    }

    /// `m:[c0,c1,..]` with fractions rendered canonically.
    pub fn render(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(fmt_q).collect();
        format!("{}:[{}]", self.m, cs.join(","))
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = self.common(rhs);
        let m = a.m as usize;
        let mut v = vec![Q::zero(); m.max(2 * a.coeffs.len())];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        // fold z^k, k >= m, back using z^m = 1
        for k in (m..v.len()).rev() {
            if !v[k].is_zero() {
                let c = std::mem::take(&mut v[k]);
                v[k - m] += c;
            }
        }
        v.truncate(m);
        CycNumber::from_powers(a.m, v)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CycNumber {
            type Output = CycNumber;
            fn $f(self, rhs: CycNumber) -> CycNumber {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use proptest::prelude::*;

    fn arb(m: u64) -> impl Strategy<Value = CycNumber> {
        prop::collection::vec(-5i64..=5, m as usize).prop_map(move |c| CycNumber::from_counts(m, &c))
    }

    #[test]
    fn cyclotomic_polys() {
        let to_i = |m| cyclotomic_poly(m).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(1), vec![-1, 1]);
        assert_eq!(to_i(4), vec![1, 0, 1]);
        assert_eq!(to_i(6), vec![1, -1, 1]);
        assert_eq!(to_i(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity() {
        let z = CycNumber::zeta(12, 1);
        assert_eq!(z.pow(12), CycNumber::one(12));
        assert_ne!(z.pow(6), CycNumber::one(12));
        assert_eq!(&z * &z.conj(), CycNumber::one(12));
        assert_eq!(CycNumber::zeta(3, 1), CycNumber::zeta(12, 4));
        let s: CycNumber = (0..5).fold(CycNumber::zero(5), |a, k| &a + &CycNumber::zeta(5, k));
        assert!(s.is_zero());
        // (z_8 + z_8^-1)^2 = 2
        let r2 = &CycNumber::zeta(8, 1) + &CycNumber::zeta(8, -1);
        assert_eq!((&r2 * &r2).as_rational(), Some(q(2)));
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb(15), b in arb(15), c in arb(15)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert!((&a - &a).is_zero());
        }
    }
}
