//! Dirichlet characters with exact cyclotomic values, character sums, and
//! counting oracles for quadratic forms modulo prime powers.

pub mod character;
pub mod counting;
pub mod cyclotomic;
pub mod sums;

use num_bigint::BigInt;
use num_traits::One;

pub use character::{cal_d, characters, cube_level, cube_root, has_cube_root, u0, DirichletCharacter};
pub use counting::{
    chi_from_counts, count_a, count_a_prim, i_eta_sum, value_histogram, Guard, Histogram,
};
pub use cyclotomic::CycNumber;
pub use sums::{gauss, gauss_conj_inverse, jacobi, jacobi_j2};

use crate::arith::{factorize, qpow, Q};
use crate::error::{Error, Result};

/// `N^64 prod_{p | N} (1-p^-2)(1-p^-6)(1-p^-8)(1-p^-12)`.
pub fn d_n(n: u64) -> Q {
    let mut acc = Q::from_integer(BigInt::from(n).pow(64));
    for (p, _) in factorize(n) {
        let pq = Q::from_integer(p.into());
        for k in [2, 6, 8, 12] {
            acc *= Q::one() - qpow(&pq, -k);
        }
    }
    acc
}

/// Result of the closed-form character sum attached to `(det A, chi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HValue {
    pub value: CycNumber,
    /// The Gauss-sum form, available for odd `N`.
    pub gauss_form: Option<CycNumber>,
    /// `chi` is not a cube, so the sum vanishes.
    pub vanishes: bool,
}

/// `J(psi, psi, psi)` and, for odd `N`, `W(psi)^3 / W(conj chi)`, with
/// `psi = conj(cube_root(chi) eta)`.
pub fn cube_scalars(chi: &DirichletCharacter, root: &DirichletCharacter, eta: &DirichletCharacter) -> Result<(CycNumber, Option<CycNumber>)> {
    let psi = root.mul(eta)?.conj();
    let j = jacobi(&[psi.clone(), psi.clone(), psi.clone()])?;
    let w = if chi.modulus() % 2 == 1 {
        Some(&gauss(&psi).pow(3) * &gauss_conj_inverse(chi)?)
    } else {
        None
    };
    Ok((j, w))
}

/// The closed form `d_N sum_eta (chi~ eta)(det A) J(conj(chi~ eta), ..)`.
pub fn h_explicit(det_a: i64, chi: &DirichletCharacter) -> Result<HValue> {
    let n = chi.modulus();
    if !chi.is_primitive() || chi.is_quadratic() {
        return Err(Error::Precondition(format!(
            "{chi:?} must be primitive and not quadratic"
        )));
    }
    if !chi.group().is_unit(det_a) {
        return Err(Error::Precondition(format!("det A = {det_a} is not a unit mod {n}")));
    }
    if !has_cube_root(chi) {
        return Ok(HValue {
            value: CycNumber::zero(1),
            gauss_form: (n % 2 == 1).then(|| CycNumber::zero(1)),
            vanishes: true,
        });
    }
    let root = cube_root(chi)?;
    let dn = d_n(n);
    let mut value = CycNumber::zero(1);
    let mut gauss_form = (n % 2 == 1).then(|| CycNumber::zero(1));
    for eta in cal_d(n) {
        let weight = root.mul(&eta)?.value(det_a);
        let (j, w) = cube_scalars(chi, &root, &eta)?;
        value = &value + &(&weight * &j);
        if let (Some(acc), Some(w)) = (gauss_form.as_mut(), w) {
            *acc = &*acc + &(&weight * &w);
        }
    }
    Ok(HValue {
        value: value.scale(&dn),
        gauss_form: gauss_form.map(|g| g.scale(&dn)),
        vanishes: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn d5() {
        let p = q(5);
        let expect = qpow(&p, 64)
            * (q(1) - qpow(&p, -2))
            * (q(1) - qpow(&p, -6))
            * (q(1) - qpow(&p, -8))
            * (q(1) - qpow(&p, -12));
        assert_eq!(d_n(5), expect);
        assert!(d_n(5).is_integer());
    }

    #[test]
    fn h_vanishes_off_cubes() {
        let chi = characters(13).into_iter().find(|c| c.order() == 12).unwrap();
        assert_ne!(chi.value_exp(u0(13) as i64), Some(0));
        let h = h_explicit(2, &chi).unwrap();
        assert!(h.vanishes && h.value.is_zero());
    }

    #[test]
    fn h_two_forms_agree() {
        for n in [5u64, 7, 9, 13] {
            for chi in characters(n) {
                if !chi.is_primitive() || chi.is_quadratic() {
                    continue;
                }
                let h = h_explicit(2, &chi).unwrap();
                assert_eq!(Some(h.value.clone()), h.gauss_form, "{chi:?}");
            }
        }
        let quad = characters(5).into_iter().find(|c| c.is_quadratic()).unwrap();
        assert!(h_explicit(1, &quad).is_err());
    }
}
