//! Eigenform `q`-expansions and the Dirichlet coefficients of the twisted
//! Koecher-Maass series of the lift, assembled from local data and from
//! eigenform `L`-series.

pub mod local;
pub mod qexp;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use local::{local_l_factor_product, symmetric_coefficients, HeckeForm};
pub use qexp::{delta_coeffs, eigenform, eisenstein, QExpansion, EIGENFORM_WEIGHTS};

use crate::arith::{bernoulli, factorial, factorize, fmt_q, primes_up_to, q, qpow, Q};
use crate::charsum::{cal_d, cube_root, cube_scalars, d_n, has_cube_root, CycNumber, DirichletCharacter, Guard};
use crate::error::{Error, Result};
use crate::jordan::JordanElement;
use crate::siegel::{ftilde, lambda_hat_with, DensityTable, PrimeSpec, SiegelParams};
use local::big;

/// Default cap on the number of Dirichlet coefficients.
pub const KM_GUARD: u128 = 5_000;

/// Coefficients `b(1..=D)` of `prod_{i=1..3} L(s + 4i - 12, f, chi)`, or of a
/// character-weighted sum of such products.
#[derive(Clone, Debug, PartialEq)]
pub struct KmCoefficients {
    pub weight: u32,
    pub label: String,
    values: Vec<CycNumber>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KmRow {
    pub n: usize,
    pub exact: String,
    pub re: f64,
    pub im: f64,
}

impl KmCoefficients {
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> &CycNumber {
        &self.values[n]
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values[1..]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(CycNumber::is_zero)
    }

    pub fn scale(&self, c: &CycNumber) -> KmCoefficients {
        KmCoefficients {
            weight: self.weight,
            label: self.label.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// First coprime pair `(m, n)` with `b(mn) != b(m) b(n)`.
    pub fn multiplicativity_failure(&self) -> Option<(usize, usize)> {
        let d = self.max_n();
        for a in 2..=d {
            for b in (a + 1)..=(d / a) {
                if crate::arith::gcd_u64(a as u64, b as u64) == 1
                    && self.values[a * b] != &self.values[a] * &self.values[b]
                {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn rows(&self) -> Vec<KmRow> {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, v)| {
                let (re, im) = v.to_complex();
                let exact = match v.as_rational() {
                    Some(r) => fmt_q(&r),
                    None => v.render(),
                };
                KmRow { n, exact, re, im }
            })
            .collect()
    }
}

fn label(chi: &DirichletCharacter) -> String {
    format!("chi_{}[{}]", chi.modulus(), chi.index())
}

fn check_inputs(f: &QExpansion, max_n: usize, guard: Guard) -> Result<()> {
    guard.check(max_n as u128, KM_GUARD)?;
    if max_n == 0 {
        return Err(Error::Precondition("need at least one coefficient".into()));
    }
    if f.max_n() < max_n {
        return Err(Error::Precondition(format!(
            "q-expansion known to {} but {max_n} coefficients requested",
            f.max_n()
        )));
    }
    Ok(())
}

fn twist(chi: &DirichletCharacter, untwisted: &[Q], weight: u32) -> KmCoefficients {
    let values = untwisted
        .iter()
        .enumerate()
        .map(|(n, u)| {
            if n == 0 {
                CycNumber::zero(1)
            } else {
                chi.value(n as i64).scale(u)
            }
        })
        .collect();
    KmCoefficients {
        weight,
        label: label(chi),
        values,
    }
}

/// `b(p^m) / chi(p)^m` from the local polynomial sum `lambda_hat(p, m)` at the
/// Satake parameter, for all `p^m <= max_n`.
pub fn local_coefficients(f: &QExpansion, p: u64, max_n: usize) -> Result<Vec<Q>> {
    let mut top = 0u32;
    while (p as u128).pow(top + 1) <= max_n as u128 {
        top += 1;
    }
    let spec = PrimeSpec::Numeric(p);
    let table = DensityTable::new(&spec, top as usize)?;
    (0..=top)
        .map(|m| {
            let lam = lambda_hat_with(&table, m, |prm| ftilde(prm, &spec))?;
            let form = HeckeForm::new(&lam, p, f.weight, m as i64 * (f.weight as i64 + 17))?;
            form.evaluate(f)
        })
        .collect()
}

/// Route through the local polynomial sums, assembled multiplicatively.
pub fn km2_local(f: &QExpansion, chi: &DirichletCharacter, max_n: usize, guard: Guard) -> Result<KmCoefficients> {
    check_inputs(f, max_n, guard)?;
    let primes = primes_up_to(max_n as u64);
    let local: Vec<(u64, Vec<Q>)> = primes
        .par_iter()
        .map(|&p| Ok((p, local_coefficients(f, p, max_n)?)))
        .collect::<Result<_>>()?;
    let mut untwisted = vec![Q::zero(); max_n + 1];
    for (n, slot) in untwisted.iter_mut().enumerate().skip(1) {
        let mut acc = Q::one();
        for (p, e) in factorize(n as u64) {
            let (_, table) = local.iter().find(|(r, _)| *r == p).expect("prime table");
            acc *= &table[e as usize];
        }
        *slot = acc;
    }
    Ok(twist(chi, &untwisted, f.weight))
}

fn dirichlet_convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let len = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); len];
    for i in 1..len {
        if a[i].is_zero() {
            continue;
        }
        let mut j = 1;
        while i * j < len {
            out[i * j] += &a[i] * &b[j];
            j += 1;
        }
    }
    out
}

/// Route through the triple Dirichlet convolution of shifted eigenform coefficients.
pub fn km2_convolution(f: &QExpansion, chi: &DirichletCharacter, max_n: usize, guard: Guard) -> Result<KmCoefficients> {
    check_inputs(f, max_n, guard)?;
    let shifted = |k: u32| -> Vec<BigInt> {
        (0..=max_n)
            .map(|n| &f.coeffs()[n] * BigInt::from(n).pow(k))
            .collect()
    };
    let conv = dirichlet_convolve(&dirichlet_convolve(&shifted(8), &shifted(4)), &shifted(0));
    let untwisted: Vec<Q> = conv.iter().map(big).collect();
    Ok(twist(chi, &untwisted, f.weight))
}

#[derive(Clone, Debug)]
pub struct Km1Coefficients {
    /// `chi` has no cube root, so the series vanishes.
    pub vanishes: bool,
    pub jacobi_form: KmCoefficients,
    /// Same assembly with Gauss-sum scalars, for odd `N`.
    pub gauss_form: Option<KmCoefficients>,
}

/// `d_N sum_eta J(psi, psi, psi) km2(conj psi)` with `psi = conj(chi~ eta)`.
pub fn km1(f: &QExpansion, chi: &DirichletCharacter, max_n: usize, guard: Guard) -> Result<Km1Coefficients> {
    if !chi.is_primitive() || chi.is_quadratic() {
        return Err(Error::Precondition(format!("{chi:?} must be primitive and not quadratic")));
    }
    check_inputs(f, max_n, guard)?;
    let zero = KmCoefficients {
        weight: f.weight,
        label: format!("first kind {}", label(chi)),
        values: vec![CycNumber::zero(1); max_n + 1],
    };
    let n = chi.modulus();
    if !has_cube_root(chi) {
        return Ok(Km1Coefficients {
            vanishes: true,
            gauss_form: (n % 2 == 1).then(|| zero.clone()),
            jacobi_form: zero,
        });
    }
    let root = cube_root(chi)?;
    let dn = CycNumber::rational(1, d_n(n));
    let mut jacobi_form = zero.clone();
    let mut gauss_form = (n % 2 == 1).then(|| zero.clone());
    for eta in cal_d(n) {
        let twisted = root.mul(&eta)?;
        let (j, w) = cube_scalars(chi, &root, &eta)?;
        let series = km2_convolution(f, &twisted, max_n, Guard::Force)?;
        add_into(&mut jacobi_form, &series.scale(&(&j * &dn)));
        if let (Some(acc), Some(w)) = (gauss_form.as_mut(), w) {
            add_into(acc, &series.scale(&(&w * &dn)));
        }
    }
    Ok(Km1Coefficients {
        vanishes: false,
        jacobi_form,
        gauss_form,
    })
}

fn add_into(acc: &mut KmCoefficients, other: &KmCoefficients) {
    for (a, b) in acc.values.iter_mut().zip(&other.values) {
        *a = &*a + b;
    }
}

/// Fourier coefficient `det(T)^((w-1)/2) prod_{p | det T} f~_T^p(alpha_p)` of the lift.
#[derive(Clone, Debug, Serialize)]
pub struct FourierCoefficient {
    pub det: String,
    pub exact: String,
    pub expression: String,
    pub numeric: f64,
}

/// For diagonal `T` the orbit data at `p` are read off the sorted valuations.
pub fn diagonal_orbits(t: &JordanElement) -> Result<Vec<(u64, SiegelParams)>> {
    if t.off.iter().any(|o| !o.is_zero()) {
        return Err(Error::Unsupported("orbit data for non-diagonal T must be supplied".into()));
    }
    let entries: Vec<u64> = t
        .diag
        .iter()
        .map(|d| {
            if d.is_integer() && d > &Q::zero() {
                d.to_integer().try_into().map_err(|_| Error::Precondition("entry too large".into()))
            } else {
                Err(Error::NotIntegral(format!("diagonal entry {d}")))
            }
        })
        .collect::<Result<_>>()?;
    let det: u64 = entries.iter().product();
    factorize(det)
        .into_iter()
        .map(|(p, _)| {
            let mut v: Vec<u32> = entries
                .iter()
                .map(|&e| crate::arith::valuation(e as i64, p).unwrap_or(0))
                .collect();
            v.sort_unstable();
            Ok((p, SiegelParams::new(v[0], v[1] - v[0], v[2] - v[0])?))
        })
        .collect()
}

pub fn fourier_coefficient_with_orbits(
    t: &JordanElement,
    f: &QExpansion,
    orbits: &[(u64, SiegelParams)],
) -> Result<FourierCoefficient> {
    if !t.is_integral() || !t.is_positive() {
        return Err(Error::Precondition("T must be integral and positive definite".into()));
    }
    let det = t.det3();
    let mut value = Q::one();
    let mut parts = Vec::new();
    for (p, prm) in orbits {
        let local = ftilde(prm, &PrimeSpec::Numeric(*p))?;
        let form = HeckeForm::new(&local, *p, f.weight, prm.ord() as i64 * (f.weight as i64 - 1))?;
        value *= form.evaluate(f)?;
        parts.push(format!("({})", form.render()));
    }
    let expression = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
    Ok(FourierCoefficient {
        det: fmt_q(&det),
        numeric: crate::arith::q_to_f64(&value),
        exact: fmt_q(&value),
        expression,
    })
}

pub fn fourier_coefficient(t: &JordanElement, f: &QExpansion) -> Result<FourierCoefficient> {
    let orbits = diagonal_orbits(t)?;
    fourier_coefficient_with_orbits(t, f, &orbits)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport {
    pub holds: bool,
    pub value: String,
    pub expected: String,
    /// `zeta(2n) / pi^(2n)` for `2n` in `2, 6, 8, 12`.
    pub zeta_over_pi: Vec<(u32, String)>,
    pub pi_exponent: i32,
}

/// `zeta(2n) / pi^(2n) = (-1)^(n+1) B_(2n) 2^(2n-1) / (2n)!`.
pub fn zeta_even_over_pi(two_n: u32) -> Q {
    let b = bernoulli(two_n as usize)[two_n as usize].clone();
    let sign = if (two_n / 2) % 2 == 1 { q(1) } else { q(-1) };
    sign * b * qpow(&q(2), two_n as i64 - 1) / Q::from_integer(factorial(two_n as u64))
}

/// `5! 7! 11! / (2 pi)^28 * zeta(2) zeta(6) zeta(8) zeta(12)` as an exact rational.
pub fn constant_check() -> ConstantReport {
    let args = [2u32, 6, 8, 12];
    let pi_exponent = args.iter().map(|&a| a as i32).sum::<i32>() - 28;
    let facts = [5u64, 7, 11]
        .iter()
        .fold(Q::one(), |acc, &k| acc * Q::from_integer(factorial(k)));
    let value = args
        .iter()
        .fold(facts / qpow(&q(2), 28), |acc, &a| acc * zeta_even_over_pi(a));
    let denom: i64 = (1i64 << 15) * 729 * 25 * 49 * 13;
    let expected = Q::new(691.into(), denom.into());
    ConstantReport {
        holds: pi_exponent == 0 && value == expected,
        value: fmt_q(&value),
        expected: fmt_q(&expected),
        zeta_over_pi: args.iter().map(|&a| (a, fmt_q(&zeta_even_over_pi(a)))).collect(),
        pi_exponent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::characters;
    use crate::charsum::u0;
    use crate::arith::qf;

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_even_over_pi(2), qf(1, 6));
        assert_eq!(zeta_even_over_pi(4), qf(1, 90));
        assert_eq!(zeta_even_over_pi(12), qf(691, 638_512_875));
        let r = constant_check();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.value, "691/380414361600");
    }

    #[test]
    fn routes_agree_small() {
        let f = delta_coeffs(60);
        for chi in characters(5) {
            let a = km2_local(&f, &chi, 60, Guard::Default).unwrap();
            let b = km2_convolution(&f, &chi, 60, Guard::Default).unwrap();
            assert_eq!(a, b, "{chi:?}");
            assert_eq!(a.get(1), &CycNumber::one(1));
            assert_eq!(a.multiplicativity_failure(), None);
        }
    }

    #[test]
    fn prime_coefficient() {
        let f = delta_coeffs(10);
        let chi = DirichletCharacter::principal(1);
        let b = km2_convolution(&f, &chi, 10, Guard::Default).unwrap();
        let expect = -24 * (256 + 16 + 1);
        assert_eq!(b.get(2).as_rational(), Some(q(expect)));
    }

    #[test]
    fn km1_vanishes_off_cubes() {
        let chi = characters(13)
            .into_iter()
            .find(|c| c.order() == 12)
            .unwrap();
        assert_ne!(chi.value_exp(u0(13) as i64), Some(0));
        let r = km1(&delta_coeffs(20), &chi, 20, Guard::Default).unwrap();
        assert!(r.vanishes && r.jacobi_form.is_zero());
    }

    #[test]
    fn km1_forms_agree() {
        let f = delta_coeffs(30);
        for n in [5u64, 7] {
            for chi in characters(n).into_iter().filter(|c| c.is_primitive() && !c.is_quadratic()) {
                let r = km1(&f, &chi, 30, Guard::Default).unwrap();
                assert_eq!(Some(&r.jacobi_form), r.gauss_form.as_ref());
            }
        }
    }

    #[test]
    fn fourier_coefficients() {
        let f = delta_coeffs(16);
        let one = fourier_coefficient(&JordanElement::identity(), &f).unwrap();
        assert_eq!((one.exact.as_str(), one.expression.as_str()), ("1", "1"));
        let t = JordanElement::diag_ints(1, 1, 2);
        let c = fourier_coefficient(&t, &f).unwrap();
        assert_eq!(c.exact, "-24");
        assert_eq!(c.expression, "(a(2))");
        let neg = JordanElement::diag_ints(1, -1, 2);
        assert!(fourier_coefficient(&neg, &f).is_err());
    }
}
