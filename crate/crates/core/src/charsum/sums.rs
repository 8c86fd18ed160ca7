//! Gauss sums, generalized Jacobi sums and the rank-2 Jordan Jacobi sum.

use super::character::DirichletCharacter;
use super::counting::{value_histogram, Guard};
use super::cyclotomic::CycNumber;
use crate::arith::{lcm_u64, q, Q};
use crate::error::{Error, Result};
use crate::octonion::IntegralOrder;

/// `W(chi) = sum_a chi(a) e(a/N)` in `Q(zeta_lcm(L, N))`.
pub fn gauss(chi: &DirichletCharacter) -> CycNumber {
    let n = chi.modulus();
    let l = chi.value_field();
    let m = lcm_u64(l, n);
    let mut counts = vec![0i64; m as usize];
    for a in 0..n {
        if let Some(e) = chi.value_exp(a as i64) {
            counts[((e * (m / l) + a * (m / n)) % m) as usize] += 1;
        }
    }
    CycNumber::from_counts(m, &counts)
}

fn common_modulus(chis: &[DirichletCharacter]) -> Result<u64> {
    let n = chis
        .first()
        .ok_or_else(|| Error::Precondition("empty character list".into()))?
        .modulus();
    match chis.iter().find(|c| c.modulus() != n) {
        Some(c) => Err(Error::ModulusMismatch(n, c.modulus())),
        None => Ok(n),
    }
}

/// `sum_{a_1 + .. + a_r = 1} chi_1(a_1) .. chi_r(a_r)`.
pub fn jacobi(chis: &[DirichletCharacter]) -> Result<CycNumber> {
    let n = common_modulus(chis)? as i64;
    let l = chis[0].value_field();
    let r = chis.len();
    let mut counts = vec![0i64; l as usize];
    let mut a = vec![0i64; r - 1];
    loop {
        let last = 1 - a.iter().sum::<i64>();
        let mut e = 0u64;
        let mut live = true;
        for (chi, &x) in chis.iter().zip(a.iter().chain(std::iter::once(&last))) {
            match chi.value_exp(x) {
                Some(v) => e += v,
                None => {
                    live = false;
                    break;
                }
            }
        }
        if live {
            counts[(e % l) as usize] += 1;
        }
        let mut i = 0;
        loop {
            if i == a.len() {
                return Ok(CycNumber::from_counts(l, &counts));
            }
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

/// Default cap on `N^10` for the rank-2 Jordan sum.
pub const J2_GUARD: u128 = 9_765_625;

/// `sum_{B in J_2(Z/N)} chi_1(det B) chi_2(1 - Tr B)`, enumerating all
/// `(a, d, x)`; the octonion coordinate is grouped by the value of `N(x)`.
pub fn jacobi_j2(chi1: &DirichletCharacter, chi2: &DirichletCharacter, guard: Guard) -> Result<CycNumber> {
    let n = common_modulus(&[chi1.clone(), chi2.clone()])?;
    let points = (n as u128).pow(10);
    guard.check(points, J2_GUARD)?;
    let form: Vec<Vec<i64>> = IntegralOrder::get().gram2.iter().map(|r| r.to_vec()).collect();
    let hist = value_histogram(&form, n, None, Guard::Force)?.all;
    let l = chi1.value_field();
    let mut counts = vec![0i64; l as usize];
    let ni = n as i64;
    for a in 0..ni {
        for d in 0..ni {
            let Some(e2) = chi2.value_exp(1 - a - d) else { continue };
            for (r, &h) in hist.iter().enumerate() {
                if h == 0 {
                    continue;
                }
                if let Some(e1) = chi1.value_exp(a * d - r as i64) {
                    counts[((e1 + e2) % l) as usize] += h as i64;
                }
            }
        }
    }
    Ok(CycNumber::from_counts(l, &counts))
}

/// `1 / W(conj chi) = chi(-1) W(chi) / N`, valid for primitive `chi`.
pub fn gauss_conj_inverse(chi: &DirichletCharacter) -> Result<CycNumber> {
    if !chi.is_primitive() {
        return Err(Error::Precondition(format!("{chi:?} is not primitive")));
    }
    let sign = chi.value(-1);
    let n: Q = q(chi.modulus() as i64);
    Ok((&sign * &gauss(chi)).scale(&n.recip()))
}
