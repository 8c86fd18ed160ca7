//! Local Siegel series for the exceptional tube domain: the closed form of
//! the normalized local polynomial, local densities of diagonal forms through
//! their generating function, and the local factor identity.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, q};
use crate::error::{Error, Result};
use crate::ratfun::{mono, MPoly, RFun, TSeries, Var};

/// Largest `t`-order accepted by the series-based operations.
pub const MAX_ORDER: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum PrimeSpec {
    Formal,
    Numeric(u64),
}

impl PrimeSpec {
    /// `p^k` as a polynomial.
    pub fn pow(&self, k: i32) -> MPoly {
        match self {
            PrimeSpec::Formal => MPoly::var_pow(Var::P, k),
            PrimeSpec::Numeric(p) => MPoly::constant(crate::arith::qpow(&q(*p as i64), k as i64)),
        }
    }

    /// `p^k X^x t^s`.
    pub fn mono(&self, k: i32, x: i32, s: i32) -> MPoly {
        self.pow(k).shift(&mono(&[(Var::X, x), (Var::T, s)]))
    }
}

impl fmt::Display for PrimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSpec::Formal => f.write_str("formal"),
            PrimeSpec::Numeric(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PrimeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("formal") || s == "p" {
            return Ok(PrimeSpec::Formal);
        }
        let p: u64 = s.parse().map_err(|_| Error::Parse(format!("expected a prime or 'formal', got {s:?}")))?;
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(PrimeSpec::Numeric(p))
    }
}

/// Orbit data of the diagonal form `p^m1 + p^(m1+m2) + p^(m1+m3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SiegelParams {
    pub m1: u32,
    pub m2: u32,
    pub m3: u32,
}

impl SiegelParams {
    pub fn new(m1: u32, m2: u32, m3: u32) -> Result<Self> {
        if m2 > m3 {
            return Err(Error::Precondition(format!("need m2 <= m3, got ({m1}, {m2}, {m3})")));
        }
        Ok(SiegelParams { m1, m2, m3 })
    }

    /// `ord_p det T`.
    pub fn ord(&self) -> u32 {
        3 * self.m1 + self.m2 + self.m3
    }

    /// All orbits with `ord_p det T = m`.
    pub fn with_ord(m: u32) -> Vec<SiegelParams> {
        let mut out = Vec::new();
        for m1 in 0..=m / 3 {
            let rest = m - 3 * m1;
            for m2 in 0..=rest / 2 {
                out.push(SiegelParams { m1, m2, m3: rest - m2 });
            }
        }
        out
    }
}

fn one_minus(m: MPoly) -> MPoly {
    &MPoly::one() - &m
}

fn frac(num: MPoly, dens: &[MPoly]) -> RFun {
    RFun::from_factors(num, dens).expect("nonzero denominators")
}

/// `(1 - X^2)(1 - p^4 X^2)(1 - p^8 X^2)`.
fn cubic_den(p: &PrimeSpec) -> [MPoly; 3] {
    [
        one_minus(p.mono(0, 2, 0)),
        one_minus(p.mono(4, 2, 0)),
        one_minus(p.mono(8, 2, 0)),
    ]
}

/// The eight-term closed form, before cancellation.
pub fn ftilde_terms(params: &SiegelParams, p: &PrimeSpec) -> Vec<RFun> {
    let (m1, m2, m3) = (params.m1 as i32, params.m2 as i32, params.m3 as i32);
    let ord = 3 * m1 + m2 + m3;
    let d1 = cubic_den(p).to_vec();
    let d2 = |s: i32| {
        let x2 = one_minus(p.mono(0, 2, 0));
        vec![x2.clone(), x2, one_minus(p.mono(4 * s, 2, 0))]
    };
    let half = [
        frac(p.mono(0, -ord, 0), &d1),
        -&frac(p.mono(8 * m1 + 8, -m1 - m2 - m3 + 2, 0), &d1),
        -&frac(p.mono(8 * m1 + 4 * (m2 + 1), -m3 + m2 - m1 + 2, 0), &d2(1)),
        -&frac(p.mono(8 * m1 + 4 * m2, m3 - m2 - m1 + 2, 0), &d2(-1)),
    ];
    let mirror: Vec<RFun> = half
        .iter()
        .map(|f| f.invert_var(Var::X).expect("monomial substitution"))
        .collect();
    half.into_iter().chain(mirror).collect()
}

/// The normalized local polynomial of `T`, certified to be a Laurent
/// polynomial in `X` with exponents in `[-ord, ord]`.
pub fn ftilde(params: &SiegelParams, p: &PrimeSpec) -> Result<MPoly> {
    let sum = ftilde_terms(params, p)
        .iter()
        .fold(RFun::zero(), |acc, f| &acc + f);
    let poly = sum.into_poly()?;
    let ord = params.ord() as i32;
    let lo = poly.min_exp(Var::X).unwrap_or(0);
    let hi = poly.max_exp(Var::X).unwrap_or(0);
    if lo < -ord || hi > ord {
        return Err(Error::NotLaurent(format!(
            "X-span [{lo}, {hi}] exceeds [-{ord}, {ord}] for {params:?}"
        )));
    }
    Ok(poly)
}

/// `(1 - p^-2)(1 - p^-6)(1 - p^-8)(1 - p^-12)`.
pub fn unimodular_constant(p: &PrimeSpec) -> MPoly {
    [2, 6, 8, 12]
        .iter()
        .fold(MPoly::one(), |acc, &k| &acc * &one_minus(p.pow(-k)))
}

/// Generating function of `t^ord X^m1 Y^m2 Z^m3 / beta_p(T)` multiplied by
/// the unimodular constant, evaluated at the given markers.
pub fn p_closed_normalized(xm: &MPoly, ym: &MPoly, zm: &MPoly, p: &PrimeSpec) -> RFun {
    let t = MPoly::var(Var::T);
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    let yz = ym * zm;
    let num = [
        MPoly::one(),
        &(&(&p.pow(-5) + &p.pow(-9)) * &t) * zm,
        &(&(&p.pow(-14) + &p.pow(-18)) * &t2) * &yz,
        &(&(&p.pow(-23) * &t3) * &yz) * zm,
    ]
    .iter()
    .fold(MPoly::zero(), |acc, m| &acc + m);
    frac(
        num,
        &[
            one_minus(&(&p.pow(-27) * xm) * &t3),
            one_minus(&(&p.pow(-10) * &yz) * &t2),
            one_minus(&(&p.pow(-1) * zm) * &t),
        ],
    )
}

/// The generating function itself, including the inverse unimodular constant.
pub fn p_closed(xm: &MPoly, ym: &MPoly, zm: &MPoly, p: &PrimeSpec) -> RFun {
    &p_closed_normalized(xm, ym, zm, p) * &frac(MPoly::one(), &[unimodular_constant(p)])
}

fn markers() -> (MPoly, MPoly, MPoly) {
    (MPoly::var(Var::X), MPoly::var(Var::Y), MPoly::var(Var::Z))
}

fn check_order(m: usize) -> Result<()> {
    if m > MAX_ORDER {
        return Err(Error::GuardExceeded {
            points: m as u128,
            limit: MAX_ORDER as u128,
        });
    }
    Ok(())
}

/// Normalized inverse local densities read off the generating function,
/// one marker polynomial per `t`-order.
#[derive(Clone, Debug)]
pub struct DensityTable {
    pub prime: PrimeSpec,
    orders: Vec<MPoly>,
}

impl DensityTable {
    pub fn new(p: &PrimeSpec, max_order: usize) -> Result<Self> {
        check_order(max_order)?;
        let (x, y, z) = markers();
        let series = TSeries::of(&p_closed_normalized(&x, &y, &z, p), max_order)?;
        let orders = series
            .coeffs()
            .iter()
            .map(|c| c.clone().into_poly())
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityTable { prime: *p, orders })
    }

    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    /// `beta_p(T)^-1` times the unimodular constant.
    pub fn normalized(&self, params: &SiegelParams) -> Result<MPoly> {
        let m = params.ord() as usize;
        if m > self.max_order() {
            return Err(Error::GuardExceeded {
                points: m as u128,
                limit: self.max_order() as u128,
            });
        }
        Ok(self.orders[m].coeff_of_monomial(&[
            (Var::X, params.m1 as i32),
            (Var::Y, params.m2 as i32),
            (Var::Z, params.m3 as i32),
        ]))
    }

    /// Marker monomials at order `m` that are not valid orbit data.
    pub fn stray_terms(&self, m: usize) -> Vec<String> {
        self.orders[m]
            .terms()
            .filter(|(e, _)| e[Var::Y as usize] > e[Var::Z as usize])
            .map(|(e, c)| format!("{e:?}: {c}"))
            .collect()
    }
}

/// `1 / beta_p(T)`.
pub fn beta_inv(params: &SiegelParams, p: &PrimeSpec) -> Result<RFun> {
    let table = DensityTable::new(p, params.ord() as usize)?;
    Ok(&RFun::from_poly(table.normalized(params)?) * &frac(MPoly::one(), &[unimodular_constant(p)]))
}

/// `lambda_p(p^m, X)` times the unimodular constant, using a precomputed table.
pub fn lambda_hat_with<F>(table: &DensityTable, m: u32, local: F) -> Result<MPoly>
where
    F: Fn(&SiegelParams) -> Result<MPoly> + Sync,
{
    let parts: Vec<MPoly> = SiegelParams::with_ord(m)
        .par_iter()
        .map(|params| Ok(&local(params)? * &table.normalized(params)?))
        .collect::<Result<_>>()?;
    Ok(parts.iter().fold(MPoly::zero(), |acc, x| &acc + x))
}

pub fn lambda_hat(p: &PrimeSpec, m: u32) -> Result<MPoly> {
    let table = DensityTable::new(p, m as usize)?;
    lambda_hat_with(&table, m, |params| ftilde(params, p))
}

/// `prod_{i=1..3} (1 - p^(3-4i) X^-1 t)^-1 (1 - p^(3-4i) X t)^-1`.
pub fn local_factor_rhs(p: &PrimeSpec) -> RFun {
    let dens: Vec<MPoly> = (1..=3)
        .flat_map(|i| [one_minus(p.mono(3 - 4 * i, -1, 1)), one_minus(p.mono(3 - 4 * i, 1, 1))])
        .collect();
    frac(MPoly::one(), &dens)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderCheck {
    pub order: usize,
    pub holds: bool,
    pub lambda_hat: String,
    pub expected: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HpReport {
    pub prime: String,
    pub max_order: usize,
    pub holds: bool,
    pub first_mismatch: Option<usize>,
    pub orders: Vec<OrderCheck>,
}

/// Compare `sum_m lambda_hat(p, m) t^m` with the product formula through `t^M`,
/// using `local` for the local polynomials.
pub fn verify_hp_with<F>(p: &PrimeSpec, max_order: usize, local: F) -> Result<HpReport>
where
    F: Fn(&SiegelParams) -> Result<MPoly> + Sync,
{
    let table = DensityTable::new(p, max_order)?;
    let rhs = TSeries::of(&local_factor_rhs(p), max_order)?;
    let mut orders = Vec::new();
    for m in 0..=max_order {
        let lam = lambda_hat_with(&table, m as u32, &local)?;
        let expected = rhs.coeff(m).clone().into_poly()?;
        orders.push(OrderCheck {
            order: m,
            holds: lam == expected,
            lambda_hat: lam.render(),
            expected: expected.render(),
        });
    }
    let first_mismatch = orders.iter().find(|o| !o.holds).map(|o| o.order);
    Ok(HpReport {
        prime: p.to_string(),
        max_order,
        holds: first_mismatch.is_none(),
        first_mismatch,
        orders,
    })
}

pub fn verify_hp(p: &PrimeSpec, max_order: usize) -> Result<HpReport> {
    verify_hp_with(p, max_order, |params| ftilde(params, p))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KpReport {
    pub holds: bool,
    pub checks: Vec<IdentityCheck>,
}

fn identity(name: &str, lhs: &RFun, rhs: &RFun) -> IdentityCheck {
    let diff = lhs - rhs;
    IdentityCheck {
        name: name.to_string(),
        holds: diff.is_zero(),
        residual: (!diff.is_zero()).then(|| diff.render()),
    }
}

/// Coefficients and marker substitutions of the eight terms summing to the
/// local factor.
pub struct LocalTerms {
    pub coeffs: Vec<RFun>,
    pub markers: Vec<[MPoly; 3]>,
    pub terms: Vec<RFun>,
}

pub fn local_terms(p: &PrimeSpec) -> LocalTerms {
    let x2 = one_minus(p.mono(0, 2, 0));
    let mut coeffs = vec![
        frac(MPoly::one(), &cubic_den(p)),
        frac(-&p.mono(8, 2, 0), &cubic_den(p)),
        frac(-&p.mono(4, 2, 0), &[x2.clone(), x2.clone(), one_minus(p.mono(4, 2, 0))]),
        frac(-&p.mono(0, 2, 0), &[x2.clone(), x2, one_minus(p.mono(-4, 2, 0))]),
    ];
    let mut markers = vec![
        [p.mono(0, -3, 0), p.mono(0, -1, 0), p.mono(0, -1, 0)],
        [p.mono(8, -1, 0), p.mono(0, -1, 0), p.mono(0, -1, 0)],
        [p.mono(8, -1, 0), p.mono(4, 1, 0), p.mono(0, -1, 0)],
        [p.mono(8, -1, 0), p.mono(4, -1, 0), p.mono(0, 1, 0)],
    ];
    for i in 0..4 {
        coeffs.push(coeffs[i].invert_var(Var::X).expect("monomial substitution"));
        markers.push(markers[i].clone().map(|m| m.invert_var(Var::X)));
    }
    let terms = markers
        .iter()
        .map(|[x, y, z]| p_closed_normalized(x, y, z, p))
        .collect();
    LocalTerms { coeffs, markers, terms }
}

/// Certify that the eight-term sum times the six linear factors is one,
/// together with the intermediate closed forms.
pub fn verify_kp() -> KpReport {
    let p = PrimeSpec::Formal;
    let m = |k, x, s| p.mono(k, x, s);
    let lt = local_terms(&p);
    let (a, pt) = (&lt.coeffs, &lt.terms);
    let one = MPoly::one();
    let mut checks = Vec::new();

    checks.push(identity(
        "first_term_closed_form",
        &pt[0],
        &frac(one.clone(), &[one_minus(m(-9, -1, 1)), one_minus(m(-5, -1, 1)), one_minus(m(-1, -1, 1))]),
    ));
    checks.push(identity(
        "second_term_closed_form",
        &pt[1],
        &frac(
            &(&one + &m(-9, -1, 1)) + &m(-18, -2, 2),
            &[one_minus(m(-19, -1, 3)), one_minus(m(-5, -1, 1)), one_minus(m(-1, -1, 1))],
        ),
    ));
    let cubic_num = |x: i32| {
        [
            one.clone(),
            &m(-5, x, 1) + &m(-9, x, 1),
            &m(-10, 0, 2) + &m(-14, 0, 2),
            m(-19, x, 3),
        ]
        .iter()
        .fold(MPoly::zero(), |acc, t| &acc + t)
    };
    checks.push(identity(
        "third_term_closed_form",
        &pt[2],
        &frac(
            cubic_num(-1),
            &[one_minus(m(-19, -1, 3)), one_minus(m(-6, 0, 2)), one_minus(m(-1, -1, 1))],
        ),
    ));
    checks.push(identity(
        "fourth_term_closed_form",
        &pt[3],
        &frac(
            cubic_num(1),
            &[one_minus(m(-19, -1, 3)), one_minus(m(-6, 0, 2)), one_minus(m(-1, 1, 1))],
        ),
    ));

    let s34 = &(&a[2] * &pt[2]) + &(&a[3] * &pt[3]);
    let x2 = one_minus(m(0, 2, 0));
    let bracket = &(&(&one + &m(4, 0, 0)) * &(&one + &m(-14, 0, 2))) + &(&m(-5, -1, 1) + &m(-5, 1, 1));
    let cleared = &(&(&(&(&(&(&(&x2 * &x2) * &one_minus(m(4, 2, 0))) * &one_minus(m(-4, 2, 0)))
        * &one_minus(m(-19, -1, 3)))
        * &one_minus(m(-6, 0, 2)))
        * &one_minus(m(-1, 1, 1)))
        * &one_minus(m(-1, -1, 1)))
        * &-&m(0, -2, 0);
    let q23 = &RFun::from_poly(cleared) * &s34;
    checks.push(identity(
        "third_fourth_numerator_factorization",
        &q23,
        &RFun::from_poly(&(&x2 * &one_minus(m(-6, 0, 2))) * &bracket),
    ));
    let expanded = &(&(&(&m(4, 0, 0) - &m(0, 2, 0)) * &one_minus(m(-1, 1, 1))) * &cubic_num(-1))
        + &(&(&one_minus(m(4, 2, 0)) * &one_minus(m(-1, -1, 1))) * &cubic_num(1));
    checks.push(identity(
        "third_fourth_numerator_expanded",
        &q23,
        &RFun::from_poly(expanded),
    ));

    let collapse = |sign: i32| {
        let xs = |k, x: i32, s| m(k, sign * x, s);
        &frac(
            -&xs(0, 2, 0),
            &[one_minus(xs(0, 2, 0)), one_minus(xs(-4, 2, 0)), one_minus(xs(8, 2, 0))],
        ) * &frac(
            &(&one + &m(4, 0, 0)) + &m(8, 0, 0),
            &[one_minus(xs(-5, -1, 1)), one_minus(m(-1, -1, 1)), one_minus(m(-1, 1, 1))],
        )
    };
    let s234 = &(&a[1] * &pt[1]) + &s34;
    checks.push(identity("second_to_fourth_collapse", &s234, &collapse(1)));
    checks.push(identity(
        "fifth_term_closed_form",
        &pt[4],
        &frac(one.clone(), &[one_minus(m(-9, 1, 1)), one_minus(m(-5, 1, 1)), one_minus(m(-1, 1, 1))]),
    ));
    let s678 = (5..8).fold(RFun::zero(), |acc, i| &acc + &(&a[i] * &pt[i]));
    checks.push(identity("sixth_to_eighth_collapse", &s678, &collapse(-1)));

    let six: Vec<MPoly> = (1..=3)
        .flat_map(|i| [one_minus(m(3 - 4 * i, -1, 1)), one_minus(m(3 - 4 * i, 1, 1))])
        .collect();
    let six_prod = RFun::from_poly(six.iter().fold(one.clone(), |acc, f| &acc * f));
    let h = (0..8).fold(RFun::zero(), |acc, i| &acc + &(&a[i] * &pt[i]));
    let k = &h * &six_prod;
    checks.push(identity("assembled_sum_is_one", &k, &RFun::one()));

    let four = four_term_form(&p);
    checks.push(identity("four_term_form_is_one", &four, &RFun::one()));
    checks.push(identity("four_term_form_matches_sum", &four, &k));
    for (label, pk, xk) in [("p9X", 9, 1), ("p9/X", 9, -1), ("p5X", 5, 1), ("p5/X", 5, -1)] {
        let pinned = four
            .subs_monomial(Var::T, &mono(&[(Var::P, pk), (Var::X, xk)]), &q(1))
            .expect("pole-free pin");
        checks.push(identity(&format!("four_term_form_at_t={label}"), &pinned, &RFun::one()));
    }

    KpReport {
        holds: checks.iter().all(|c| c.holds),
        checks,
    }
}

/// The local factor written as four terms over the three-factor denominators.
pub fn four_term_form(p: &PrimeSpec) -> RFun {
    let m = |k, x, s| p.mono(k, x, s);
    let one = MPoly::one();
    let c = &(&one + &m(4, 0, 0)) + &m(8, 0, 0);
    let side = |s: i32| {
        let xs = |k, x: i32, e| m(k, s * x, e);
        let first = frac(
            &(&one_minus(xs(-9, 1, 1)) * &one_minus(xs(-5, 1, 1))) * &one_minus(xs(-1, 1, 1)),
            &[one_minus(xs(0, 2, 0)), one_minus(xs(4, 2, 0)), one_minus(xs(8, 2, 0))],
        );
        let second = frac(
            &(&(&(&xs(0, 2, 0) * &c) * &one_minus(xs(-9, 1, 1))) * &one_minus(xs(-9, -1, 1)))
                * &one_minus(xs(-5, 1, 1)),
            &[one_minus(xs(0, 2, 0)), one_minus(xs(-4, 2, 0)), one_minus(xs(8, 2, 0))],
        );
        &first - &second
    };
    &side(1) + &side(-1)
}

/// f~ for every orbit with `ord <= max_order`, rendered.
pub fn ftilde_table(p: &PrimeSpec, max_order: u32) -> Result<Vec<(SiegelParams, String)>> {
    (0..=max_order)
        .flat_map(SiegelParams::with_ord)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|params| Ok((*params, ftilde(params, p)?.render())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qf, qpow};
    use num_traits::Signed;
    use proptest::prelude::*;

    const F: PrimeSpec = PrimeSpec::Formal;

    fn xp(k: i32) -> MPoly {
        MPoly::var_pow(Var::X, k)
    }

    fn params(m1: u32, m2: u32, m3: u32) -> SiegelParams {
        SiegelParams::new(m1, m2, m3).unwrap()
    }

    #[test]
    fn ftilde_small_orbits() {
        assert_eq!(ftilde(&params(0, 0, 0), &F).unwrap(), MPoly::one());
        assert_eq!(ftilde(&params(0, 0, 1), &F).unwrap(), &xp(1) + &xp(-1));
        let c = &(&MPoly::one() + &F.pow(4)) + &F.pow(8);
        let f100 = &(&xp(3) + &xp(-3)) + &(&c * &(&xp(1) + &xp(-1)));
        assert_eq!(ftilde(&params(1, 0, 0), &F).unwrap(), f100);
        let f011 = &(&(&xp(2) + &xp(-2)) + &F.pow(4)) + &MPoly::one();
        assert_eq!(ftilde(&params(0, 1, 1), &F).unwrap(), f011);
        assert!(SiegelParams::new(0, 2, 1).is_err());
    }

    #[test]
    fn ftilde_functional_equation_and_span() {
        for m in 0..=6 {
            for prm in SiegelParams::with_ord(m) {
                let f = ftilde(&prm, &F).unwrap();
                assert_eq!(f.invert_var(Var::X), f, "{prm:?}");
                assert_eq!(f.max_exp(Var::X), Some(m as i32));
                assert_eq!(f.min_exp(Var::X), Some(-(m as i32)));
            }
        }
    }

    #[test]
    fn numeric_prime_matches_formal() {
        let prm = params(1, 1, 2);
        let formal = ftilde(&prm, &F).unwrap().eval_partial(&[(Var::P, q(3))]);
        assert_eq!(ftilde(&prm, &PrimeSpec::Numeric(3)).unwrap(), formal);
    }

    #[test]
    fn constant_term_is_inverse_unimodular_constant() {
        let b = beta_inv(&params(0, 0, 0), &F).unwrap();
        let expect = frac(MPoly::one(), &[unimodular_constant(&F)]);
        assert_eq!(b, expect);
        let (x, y, z) = markers();
        let s = TSeries::of(&p_closed(&x, &y, &z, &F), 0).unwrap();
        assert_eq!(s.coeff(0), &expect);
    }

    #[test]
    fn densities_positive_for_small_primes() {
        for p in [2u64, 3, 5] {
            let spec = PrimeSpec::Numeric(p);
            let table = DensityTable::new(&spec, 8).unwrap();
            let unit = unimodular_constant(&spec).as_constant().unwrap();
            for m in 0..=8 {
                assert!(table.stray_terms(m).is_empty());
                for prm in SiegelParams::with_ord(m as u32) {
                    let normalized = table.normalized(&prm).unwrap().as_constant().unwrap();
                    assert!((&normalized / &unit).is_positive(), "{p} {prm:?}");
                    let mut den = normalized.denom().clone();
                    while (&den % p) == 0.into() {
                        den /= p;
                    }
                    assert_eq!(den, 1.into());
                }
            }
        }
    }

    #[test]
    fn lambda_hat_low_orders() {
        assert_eq!(lambda_hat(&F, 0).unwrap(), MPoly::one());
        let c = &(&F.pow(-1) + &F.pow(-5)) + &F.pow(-9);
        assert_eq!(lambda_hat(&F, 1).unwrap(), &c * &(&xp(1) + &xp(-1)));
        for m in 0..=5 {
            let l = lambda_hat(&F, m).unwrap();
            assert_eq!(l.invert_var(Var::X), l);
        }
    }

    #[test]
    fn series_spec_example() {
        let f = frac(
            MPoly::one(),
            &[one_minus(F.mono(-1, 1, 1)), one_minus(F.mono(-1, -1, 1))],
        );
        let s = TSeries::of(&f, 1).unwrap();
        assert_eq!(s.coeff(1).as_poly(), Some(&(&F.mono(-1, 1, 0) + &F.mono(-1, -1, 0))));
    }

    #[test]
    fn hp_numeric_two() {
        let r = verify_hp(&PrimeSpec::Numeric(2), 10).unwrap();
        assert!(r.holds, "{:?}", r.first_mismatch);
    }

    #[test]
    fn hp_formal() {
        assert!(verify_hp(&F, 8).unwrap().holds);
    }

    #[test]
    fn perturbation_is_detected_at_its_order() {
        let p = PrimeSpec::Numeric(3);
        let target = params(0, 1, 2);
        let r = verify_hp_with(&p, 5, |prm| {
            let f = ftilde(prm, &p)?;
            Ok(if *prm == target { &f + &MPoly::term(mono(&[(Var::X, 1)]), qf(1, 7)) } else { f })
        })
        .unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_mismatch, Some(3));
    }

    #[test]
    fn alternative_quadratic_coefficient_breaks_identity() {
        let p = PrimeSpec::Numeric(3);
        let table = DensityTable::new(&p, 2).unwrap();
        let rhs = TSeries::of(&local_factor_rhs(&p), 2).unwrap();
        let lam2 = lambda_hat_with(&table, 2, |prm| ftilde(prm, &p)).unwrap();
        assert_eq!(Some(&lam2), rhs.coeff(2).as_poly());
        let shift = qpow(&q(3), -8) - qpow(&q(3), -18);
        let bumped = &lam2 + &ftilde(&params(0, 1, 1), &p).unwrap().scale(&shift);
        assert_ne!(Some(&bumped), rhs.coeff(2).as_poly());
    }

    #[test]
    fn kp_identities() {
        let r = verify_kp();
        for c in &r.checks {
            assert!(c.holds, "{} {:?}", c.name, c.residual);
        }
        assert!(r.holds);
    }

    #[test]
    fn prime_spec_parsing() {
        assert_eq!("formal".parse::<PrimeSpec>().unwrap(), F);
        assert_eq!("7".parse::<PrimeSpec>().unwrap(), PrimeSpec::Numeric(7));
        assert!("8".parse::<PrimeSpec>().is_err());
        assert!("x".parse::<PrimeSpec>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn ftilde_symmetric_numeric(m1 in 0u32..3, m2 in 0u32..3, extra in 0u32..3, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let prm = params(m1, m2, m2 + extra);
            let f = ftilde(&prm, &PrimeSpec::Numeric(p)).unwrap();
            prop_assert_eq!(f.invert_var(Var::X), f);
        }
    }
}
