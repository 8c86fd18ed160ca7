use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{bernoulli, factorize, Q};
use crate::error::{Error, Result};

/// Weights whose cusp space is one-dimensional.
pub const EIGENFORM_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// Truncated `q`-expansion `sum_{n <= M} a(n) q^n` of a modular form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QExpansion {
    pub weight: u32,
    #[serde(serialize_with = "ser_bigints")]
    coeffs: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

impl QExpansion {
    pub fn from_coeffs(weight: u32, coeffs: Vec<BigInt>) -> Self {
        QExpansion { weight, coeffs }
    }

    pub fn max_n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn a(&self, n: u64) -> Result<&BigInt> {
        self.coeffs.get(n as usize).ok_or_else(|| {
            Error::Precondition(format!("coefficient {n} beyond truncation {}", self.max_n()))
        })
    }

    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let len = self.coeffs.len().min(other.coeffs.len());
        QExpansion {
            weight: self.weight + other.weight,
            coeffs: mul_trunc(&self.coeffs, &other.coeffs, len),
        }
    }

    /// First coprime pair `(m, n)`, `mn <= M`, with `a(mn) != a(m) a(n)`.
    pub fn multiplicativity_failure(&self) -> Option<(u64, u64)> {
        let m = self.max_n() as u64;
        for a in 2..=m {
            for b in (a + 1)..=(m / a) {
                if crate::arith::gcd_u64(a, b) == 1
                    && self.coeffs[(a * b) as usize] != &self.coeffs[a as usize] * &self.coeffs[b as usize]
                {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// `a(p^(j+1)) = a(p) a(p^j) - p^(w-1) a(p^(j-1))` for all `p^(j+1) <= M`.
    pub fn hecke_recursion_holds(&self, p: u64) -> bool {
        let pw = BigInt::from(p).pow(self.weight - 1);
        let mut prev = BigInt::one();
        let mut pk = p;
        let ap = self.coeffs.get(p as usize).cloned();
        let Some(ap) = ap else { return true };
        let mut cur = ap.clone();
        while let Some(next_pk) = pk.checked_mul(p).filter(|&x| x as usize <= self.max_n()) {
            let expect = &ap * &cur - &pw * &prev;
            if self.coeffs[next_pk as usize] != expect {
                return false;
            }
            prev = cur;
            cur = expect;
            pk = next_pk;
        }
        true
    }

    /// `a(p)^2 <= 4 p^(w-1)`.
    pub fn deligne_bound_holds(&self, p: u64) -> Result<bool> {
        let ap = self.a(p)?;
        Ok(ap * ap <= BigInt::from(4) * BigInt::from(p).pow(self.weight - 1))
    }

    /// `|a(p)| / (2 p^((w-1)/2))`.
    pub fn deligne_ratio(&self, p: u64) -> Result<f64> {
        let ap = self.a(p)?.abs().to_f64().unwrap_or(f64::INFINITY);
        Ok(ap / (2.0 * (p as f64).powf((self.weight as f64 - 1.0) / 2.0)))
    }
}

/// `q prod_{n >= 1} (1 - q^n)^24` through `q^M`.
pub fn delta_coeffs(max_n: usize) -> QExpansion {
    let len = max_n + 1;
    let mut eta = vec![BigInt::zero(); len];
    eta[0] = BigInt::one();
    for n in 1..len {
        for i in (n..len).rev() {
            let v = eta[i - n].clone();
            eta[i] -= v;
        }
    }
    let e2 = mul_trunc(&eta, &eta, len);
    let e4 = mul_trunc(&e2, &e2, len);
    let e8 = mul_trunc(&e4, &e4, len);
    let e16 = mul_trunc(&e8, &e8, len);
    let e24 = mul_trunc(&e16, &e8, len);
    let mut coeffs = vec![BigInt::zero(); len];
    coeffs[1..].clone_from_slice(&e24[..len - 1]);
    QExpansion { weight: 12, coeffs }
}

fn sigma(n: u64, k: u32) -> BigInt {
    factorize(n).iter().fold(BigInt::one(), |acc, &(p, e)| {
        let pk = BigInt::from(p).pow(k);
        let mut s = BigInt::zero();
        let mut term = BigInt::one();
        for _ in 0..=e {
            s += &term;
            term *= &pk;
        }
        acc * s
    })
}

/// Eisenstein series `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n`, normalized constant term 1.
pub fn eisenstein(k: u32, max_n: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Unsupported(format!("Eisenstein series of weight {k}")));
    }
    let bk = bernoulli(k as usize)[k as usize].clone();
    let factor = -Q::from_integer(BigInt::from(2 * k)) / bk;
    if !factor.is_integer() {
        return Err(Error::Unsupported(format!("non-integral Eisenstein series of weight {k}")));
    }
    let factor = factor.to_integer();
    let mut coeffs = vec![BigInt::zero(); max_n + 1];
    coeffs[0] = BigInt::one();
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = &factor * sigma(n as u64, k - 1);
    }
    Ok(QExpansion { weight: k, coeffs })
}

/// The normalized cusp eigenform of a weight with one-dimensional cusp space.
pub fn eigenform(weight: u32, max_n: usize) -> Result<QExpansion> {
    if !EIGENFORM_WEIGHTS.contains(&weight) {
        return Err(Error::Unsupported(format!(
            "weight {weight}; supported weights are {EIGENFORM_WEIGHTS:?}"
        )));
    }
    let delta = delta_coeffs(max_n);
    if weight == 12 {
        return Ok(delta);
    }
    Ok(delta.mul(&eisenstein(weight - 12, max_n)?))
}
