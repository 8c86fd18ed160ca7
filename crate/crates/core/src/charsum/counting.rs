//! Solution counts of `S[x] ≡ c (mod p^m)` by exhaustive enumeration, and the
//! closed forms they are compared against.
//!
//! Forms are passed as the even integral matrix `2S`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::character::DirichletCharacter;
use super::cyclotomic::CycNumber;
use crate::arith::{q, qpow, Q};
use crate::error::{Error, Result};

/// Enumeration size policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    /// Refuse anything above the operation's default limit.
    Default,
    Limit(u128),
    Force,
}

impl Guard {
    pub fn check(self, points: u128, default: u128) -> Result<()> {
        let limit = match self {
            Guard::Default => default,
            Guard::Limit(l) => l,
            Guard::Force => return Ok(()),
        };
        if points > limit {
            return Err(Error::GuardExceeded { points, limit });
        }
        Ok(())
    }
}

/// Default cap on `p^(m l)` per histogram.
pub const COUNT_GUARD: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub modulus: u64,
    /// `all[c] = #{x : S[x] ≡ c}`.
    pub all: Vec<u64>,
    /// Same, restricted to `x ≢ 0 (mod p)`; empty when not requested.
    pub prim: Vec<u64>,
}

fn check_form(form: &[Vec<i64>]) -> Result<()> {
    let l = form.len();
    for (i, row) in form.iter().enumerate() {
        if row.len() != l {
            return Err(Error::Precondition("form is not square".into()));
        }
        if row[i] % 2 != 0 {
            return Err(Error::Precondition("2S must have even diagonal".into()));
        }
        for (j, v) in row.iter().enumerate() {
            if *v != form[j][i] {
                return Err(Error::Precondition("form is not symmetric".into()));
            }
        }
    }
    Ok(())
}

/// Value distribution of `x -> S[x] mod modulus` over `(Z/modulus)^l`.
///
/// With `prim = Some(p)` the points with every coordinate divisible by `p`
/// are also tallied separately.
pub fn value_histogram(form: &[Vec<i64>], modulus: u64, prim: Option<u64>, guard: Guard) -> Result<Histogram> {
    check_form(form)?;
    let l = form.len();
    let qm = modulus;
    let points = (qm as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    guard.check(points, COUNT_GUARD)?;
    let q2 = 2 * qm;
    let s2: Vec<Vec<u64>> = form
        .iter()
        .map(|r| r.iter().map(|&v| v.rem_euclid(q2 as i64) as u64).collect())
        .collect();
    let s2q: Vec<Vec<u64>> = s2.iter().map(|r| r.iter().map(|&v| v % qm).collect()).collect();

    // Outer coordinates are fixed per task; inner ones run an odometer.
    let mut outer = 0;
    while outer < l.saturating_sub(1) && (qm as u128).pow(outer as u32) < 256 {
        outer += 1;
    }
    let inner = l - outer;
    let tasks = (qm as u128).pow(outer as u32) as u64;
    let inner_points = (qm as u128).pow(inner as u32) as u64;

    let run = |task: u64| -> (Vec<u64>, Vec<u64>) {
        let mut all = vec![0u64; qm as usize];
        let mut zeros = vec![0u64; qm as usize];
        let mut x = vec![0u64; l];
        let mut t = task;
        for xi in x.iter_mut().skip(inner) {
            *xi = t % qm;
            t /= qm;
        }
        // y = 2S x mod q, val = x^t 2S x mod 2q
        let mut y = vec![0u64; l];
        let mut val = 0u64;
        for i in 0..l {
            let mut acc = 0u128;
            for j in 0..l {
                acc += s2[i][j] as u128 * x[j] as u128;
            }
            y[i] = (acc % qm as u128) as u64;
            val = ((val as u128 + x[i] as u128 * (acc % q2 as u128)) % q2 as u128) as u64;
        }
        let outer_zero = prim.is_none_or(|p| x[inner..].iter().all(|v| v % p == 0));
        let mut nonzero_inner = 0usize;
        for _ in 0..inner_points {
            let c = (val / 2) as usize;
            all[c] += 1;
            if outer_zero && nonzero_inner == 0 {
                zeros[c] += 1;
            }
            // increment the odometer, updating y and val per unit step
            let mut i = 0;
            while i < inner {
                val += 2 * y[i] + s2[i][i];
                val %= q2;
                for j in 0..l {
                    let v = y[j] + s2q[j][i];
                    y[j] = if v >= qm { v - qm } else { v };
                }
                if let Some(p) = prim {
                    let old = x[i];
                    let new = if old + 1 == qm { 0 } else { old + 1 };
                    if old.is_multiple_of(p) {
                        nonzero_inner += 1;
                    }
                    if new % p == 0 {
                        nonzero_inner -= 1;
                    }
                }
                x[i] += 1;
                if x[i] < qm {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
        (all, zeros)
    };

    let parts: Vec<(Vec<u64>, Vec<u64>)> = (0..tasks).into_par_iter().map(run).collect();
    let mut all = vec![0u64; qm as usize];
    let mut zeros = vec![0u64; qm as usize];
    for (a, z) in parts {
        for c in 0..qm as usize {
            all[c] += a[c];
            zeros[c] += z[c];
        }
    }
    let prim_counts = match prim {
        Some(_) => all.iter().zip(&zeros).map(|(a, z)| a - z).collect(),
        None => vec![],
    };
    Ok(Histogram {
        modulus: qm,
        all,
        prim: prim_counts,
    })
}

/// `#{x mod p^m : S[x] ≡ c}`.
pub fn count_a(form: &[Vec<i64>], c: i64, p: u64, m: u32, guard: Guard) -> Result<u64> {
    let h = value_histogram(form, p.pow(m), None, guard)?;
    Ok(h.all[c.rem_euclid(h.modulus as i64) as usize])
}

/// Same as [`count_a`] with `x ≢ 0 (mod p)`.
pub fn count_a_prim(form: &[Vec<i64>], c: i64, p: u64, m: u32, guard: Guard) -> Result<u64> {
    let h = value_histogram(form, p.pow(m), Some(p), guard)?;
    Ok(h.prim[c.rem_euclid(h.modulus as i64) as usize])
}

fn divisible(c: i64, p: u64) -> bool {
    c.rem_euclid(p as i64) == 0
}

/// Closed form for primitive solutions mod `p` of a form unimodular at `p`.
pub fn closed_a_prim_p(l: u32, p: u64, chi: i64, c: i64) -> Q {
    let (pq, chi) = (q(p as i64), q(chi));
    let half = l as i64 / 2;
    let base = qpow(&pq, l as i64 - 1) * (Q::one() - qpow(&pq, -half) * &chi);
    if divisible(c, p) {
        base * (Q::one() + qpow(&pq, 1 - half) * chi)
    } else {
        base
    }
}

/// Closed form for all solutions mod `p`.
pub fn closed_a_p(l: u32, p: u64, chi: i64, c: i64) -> Q {
    let extra = if divisible(c, p) { Q::one() } else { Q::zero() };
    closed_a_prim_p(l, p, chi, c) + extra
}

/// `A_{p^(m-2)}(S, c / p^2)` with the conventions for `ord_p(c) <= 1` and `m = 2`.
pub fn reduced_count(hist_lower: Option<&Histogram>, c: i64, p: u64, m: u32) -> u64 {
    let p2 = (p * p) as i64;
    if c.rem_euclid(p.pow(m) as i64) % p2 != 0 {
        return 0;
    }
    if m == 2 {
        return 1;
    }
    let h = hist_lower.expect("histogram mod p^(m-2)");
    let c = c.rem_euclid(p.pow(m) as i64) / p2;
    h.all[c.rem_euclid(h.modulus as i64) as usize]
}

/// `chi(S)` recovered from the primitive count of `S[x] ≡ 1 (mod p)`.
pub fn chi_from_counts(form: &[Vec<i64>], p: u64, guard: Guard) -> Result<i64> {
    let l = form.len() as i64;
    if l % 2 != 0 {
        return Err(Error::Precondition("rank must be even".into()));
    }
    let h = value_histogram(form, p, Some(p), guard)?;
    let a = q(h.prim[1 % p as usize] as i64);
    let pq = q(p as i64);
    let chi = (Q::one() - a / qpow(&pq, l - 1)) * qpow(&pq, l / 2);
    if chi == q(1) || chi == q(-1) {
        Ok(if chi.is_one() { 1 } else { -1 })
    } else {
        Err(Error::InconsistentCount(format!(
            "primitive count gives chi = {chi} (form not unimodular at {p}?)"
        )))
    }
}

/// `sum_w eta(S[w] + c)` from the value histogram mod `p^m`.
pub fn i_eta_sum(eta: &DirichletCharacter, hist: &Histogram, c: i64) -> Result<CycNumber> {
    if eta.modulus() != hist.modulus {
        return Err(Error::ModulusMismatch(eta.modulus(), hist.modulus));
    }
    if !eta.is_primitive() {
        return Err(Error::Precondition(format!("{eta:?} is not primitive")));
    }
    let l = eta.value_field();
    let mut counts = vec![0i64; l as usize];
    for (r, &h) in hist.all.iter().enumerate() {
        if let Some(e) = eta.value_exp(r as i64 + c) {
            counts[e as usize] += h as i64;
        }
    }
    Ok(CycNumber::from_counts(l, &counts))
}

/// `p^(lm/2) eta(c)`, times `chi(S)` for odd `m`.
pub fn closed_i_eta(eta: &DirichletCharacter, l: u32, p: u64, m: u32, chi: i64, c: i64) -> CycNumber {
    let mut scale = qpow(&q(p as i64), (l * m / 2) as i64);
    if m % 2 == 1 {
        scale *= q(chi);
    }
    eta.value(c).scale(&scale)
}

pub fn hyperbolic(planes: usize) -> Vec<Vec<i64>> {
    let l = 2 * planes;
    let mut f = vec![vec![0i64; l]; l];
    for k in 0..planes {
        f[2 * k][2 * k + 1] = 1;
        f[2 * k + 1][2 * k] = 1;
    }
    f
}

/// `a S ⊥ b S` for forms given as `2S`.
pub fn scaled_sum(form: &[Vec<i64>], a: i64, b: i64) -> Vec<Vec<i64>> {
    let l = form.len();
    let mut f = vec![vec![0i64; 2 * l]; 2 * l];
    for i in 0..l {
        for j in 0..l {
            f[i][j] = a * form[i][j];
            f[l + i][l + j] = b * form[i][j];
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::character::characters;
    use crate::octonion::IntegralOrder;

    fn order_form() -> Vec<Vec<i64>> {
        IntegralOrder::get().gram2.iter().map(|r| r.to_vec()).collect()
    }

    /// Straightforward evaluation of every point, for cross-checking.
    fn naive(form: &[Vec<i64>], qm: u64) -> Vec<u64> {
        let l = form.len();
        let mut h = vec![0u64; qm as usize];
        for idx in 0..qm.pow(l as u32) {
            let x: Vec<i64> = (0..l).map(|i| ((idx / qm.pow(i as u32)) % qm) as i64).collect();
            let mut v = 0i64;
            for i in 0..l {
                for j in 0..l {
                    v += form[i][j] * x[i] * x[j];
                }
            }
            h[((v / 2).rem_euclid(qm as i64)) as usize] += 1;
        }
        h
    }

    #[test]
    fn histogram_matches_naive() {
        let f = vec![vec![2, 1, 0], vec![1, 4, -3], vec![0, -3, 6]];
        for qm in [2u64, 3, 4, 6, 9] {
            assert_eq!(value_histogram(&f, qm, None, Guard::Default).unwrap().all, naive(&f, qm));
        }
    }

    #[test]
    fn hyperbolic_counts() {
        let h4 = hyperbolic(4);
        assert_eq!(count_a(&h4, 1, 3, 1, Guard::Default).unwrap(), 2160);
        assert_eq!(count_a(&h4, 0, 3, 1, Guard::Default).unwrap(), 2241);
        assert_eq!(closed_a_p(8, 3, 1, 1), q(2160));
        assert_eq!(closed_a_p(8, 3, 1, 0), q(2241));
        assert_eq!(chi_from_counts(&h4, 3, Guard::Default).unwrap(), 1);
    }

    #[test]
    fn anisotropic_plane() {
        // x^2 + y^2 is anisotropic mod 3, so chi = -1
        let f = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(chi_from_counts(&f, 3, Guard::Default).unwrap(), -1);
        let f = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(chi_from_counts(&f, 5, Guard::Default).unwrap(), 1);
    }

    #[test]
    fn order_form_split() {
        for p in [2u64, 3, 5] {
            assert_eq!(chi_from_counts(&order_form(), p, Guard::Default).unwrap(), 1);
        }
    }

    #[test]
    fn eta_sum_small() {
        let h = value_histogram(&order_form(), 3, None, Guard::Default).unwrap();
        let eta = characters(3).into_iter().find(|c| c.is_primitive()).unwrap();
        assert_eq!(i_eta_sum(&eta, &h, 1).unwrap().as_rational(), Some(q(81)));
        assert!(i_eta_sum(&eta, &h, 3).unwrap().is_zero());
    }

    #[test]
    fn guard() {
        let err = value_histogram(&order_form(), 11, None, Guard::Default).unwrap_err();
        assert!(matches!(err, Error::GuardExceeded { .. }));
    }
}
