//! The verification suites behind `verify`.

use std::sync::{Arc, OnceLock};

use clap::ValueEnum;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::report::{Check, Outcome, Plan, Status, VerificationReport};
use crate::arith::{fmt_q, primes_up_to, q, qpow, Q};
use crate::charsum::counting::{closed_a_p, closed_a_prim_p, closed_i_eta, hyperbolic, reduced_count};
use crate::charsum::{
    cal_d, characters, chi_from_counts, cube_root, cube_scalars, gauss, has_cube_root, i_eta_sum, jacobi,
    jacobi_j2, u0, value_histogram, DirichletCharacter, Guard, Histogram,
};
use crate::error::{Error, Result};
use crate::freudenthal::{gamma_element, is_lattice_preserving, level_pairs};
use crate::jordan::{random_integral_jordan, random_integral_jordan2, JordanElement};
use crate::kmseries::{
    constant_check, eigenform, fourier_coefficient, km1, km2_convolution, km2_local, KmCoefficients,
};
use crate::linalg::QMatrix;
use crate::octonion::{random_order_element, IntegralOrder, Octonion};
use crate::ratfun::Var;
use crate::siegel::{ftilde, verify_hp, verify_kp, PrimeSpec, SiegelParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Algebra,
    Freudenthal,
    Charsums,
    Siegel,
    Km,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Algebra => "algebra",
            SuiteName::Freudenthal => "freudenthal",
            SuiteName::Charsums => "charsums",
            SuiteName::Siegel => "siegel",
            SuiteName::Km => "km",
            SuiteName::All => "all",
        }
    }
}

pub const CUBE_SCALAR_SKIP: &str = "hypothesis (odd N / primitivity) not met";

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub guard: Guard,
    pub seed: u64,
    /// Random samples per algebra identity.
    pub samples: usize,
    pub composition_samples: usize,
    /// Levels for the Freudenthal elements.
    pub levels: Vec<i64>,
    /// Moduli for the character-sum identities.
    pub moduli: Vec<u64>,
    /// Also run the prime-power enumerations (counts and `I_eta`).
    pub counts: bool,
    pub primes: Vec<PrimeSpec>,
    pub formal_order: usize,
    pub numeric_order: usize,
    /// Weight `2k` of the lift; the eigenform has weight `2k - 8`.
    pub lift_weight: u32,
    pub max_n: usize,
    pub km_modulus: u64,
    pub first_kind_moduli: Vec<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            guard: Guard::Default,
            seed: 20_260_101,
            samples: 1000,
            composition_samples: 10_000,
            levels: (1..=12).collect(),
            moduli: (3..=13).collect(),
            counts: true,
            primes: vec![
                PrimeSpec::Formal,
                PrimeSpec::Numeric(2),
                PrimeSpec::Numeric(3),
                PrimeSpec::Numeric(5),
            ],
            formal_order: 8,
            numeric_order: 10,
            lift_weight: 20,
            max_n: 200,
            km_modulus: 5,
            first_kind_moduli: vec![5, 7, 13],
        }
    }
}

impl SuiteConfig {
    pub fn eigen_weight(&self) -> Result<u32> {
        self.lift_weight
            .checked_sub(8)
            .ok_or_else(|| Error::Precondition(format!("lift weight {} is below 8", self.lift_weight)))
    }
}

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> VerificationReport {
    match name {
        SuiteName::Algebra => VerificationReport::new("algebra", algebra(cfg).run()),
        SuiteName::Freudenthal => VerificationReport::new("freudenthal", freudenthal(cfg).run()),
        SuiteName::Charsums => VerificationReport::new("charsums", charsums(cfg).run()),
        SuiteName::Siegel => VerificationReport::new("siegel", siegel(cfg)),
        SuiteName::Km => VerificationReport::new("km", km(cfg).run()),
        SuiteName::All => {
            let parts = [
                SuiteName::Algebra,
                SuiteName::Freudenthal,
                SuiteName::Charsums,
                SuiteName::Siegel,
                SuiteName::Km,
            ]
            .iter()
            .map(|&s| run_suite(s, cfg))
            .collect();
            VerificationReport::merge("all", parts)
        }
    }
}

fn render_oct(x: &Octonion) -> String {
    let c = IntegralOrder::get().to_order_coords(x);
    format!("[{}]", c.iter().map(fmt_q).collect::<Vec<_>>().join(","))
}

fn render_jordan(x: &JordanElement) -> String {
    format!(
        "diag({}) off({}, {}, {})",
        x.diag.iter().map(fmt_q).collect::<Vec<_>>().join(","),
        render_oct(x.x()),
        render_oct(x.y()),
        render_oct(x.z())
    )
}

fn order_form() -> Vec<Vec<i64>> {
    IntegralOrder::get().gram2.iter().map(|r| r.to_vec()).collect()
}

/// Coefficients of `det(X + sY)` in `s`, by finite differences of four evaluations.
pub fn det_cubic(x: &JordanElement, y: &JordanElement) -> [Q; 4] {
    let v: Vec<Q> = (0..4).map(|s| (x + &y.scale(&q(s))).det3()).collect();
    let d1 = [&v[1] - &v[0], &v[2] - &v[1], &v[3] - &v[2]];
    let d2 = [&d1[1] - &d1[0], &d1[2] - &d1[1]];
    let d3 = &d2[1] - &d2[0];
    let c3 = &d3 / q(6);
    let c2 = &d2[0] / q(2) - &c3 * q(3);
    let c1 = &d1[0] - &c2 - &c3;
    [v[0].clone(), c1, c2, c3]
}

fn algebra(cfg: &SuiteConfig) -> Plan {
    let mut plan = Plan::new();
    let (seed, n, comp, guard) = (cfg.seed, cfg.samples, cfg.composition_samples, cfg.guard);

    plan.add("algebra.composition", "norm of a product of Cayley numbers", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..comp {
            let x = random_order_element(&mut rng, 6);
            let y = random_order_element(&mut rng, 6);
            if (&x * &y).norm() != x.norm() * y.norm() {
                return Ok(Outcome::Fail(format!("pair {i}: x = {}, y = {}", render_oct(&x), render_oct(&y))));
            }
        }
        Ok(Outcome::Pass(format!("N(xy) = N(x)N(y) on {comp} random pairs in o")))
    });

    plan.add("algebra.order_lattice", "norm form on the maximal order", || {
        let g2 = IntegralOrder::get().gram2;
        let m = QMatrix::from_rows(g2.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect());
        let even = (0..8).all(|i| g2[i][i] % 2 == 0);
        let det = m.det();
        let pd = m.is_positive_definite();
        Ok(Outcome::from_bool(
            even && det.is_one() && pd,
            "2S even, det 2S = 1, positive definite",
            || format!("even diagonal: {even}, det 2S = {}, positive definite: {pd}", fmt_q(&det)),
        ))
    });

    for p in [2u64, 3, 5] {
        plan.add(format!("algebra.chi_p.{p}"), "quadratic character of the norm form from solution counts", move || {
            let chi = chi_from_counts(&order_form(), p, guard)?;
            Ok(Outcome::from_bool(chi == 1, format!("chi_{p}(S) = +1"), || format!("chi_{p}(S) = {chi}")))
        });
    }

    plan.add("jordan.polarization", "cubic expansion of det(X + sY)", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..n {
            let x = random_integral_jordan(&mut rng, 3);
            let y = random_integral_jordan(&mut rng, 3);
            let c = det_cubic(&x, &y);
            let expect = [x.det3(), x.sharp().pair(&y), x.pair(&y.sharp()), y.det3()];
            if c != expect {
                return Ok(Outcome::Fail(format!(
                    "X = {}, Y = {}: coefficients {:?} vs {:?}",
                    render_jordan(&x),
                    render_jordan(&y),
                    c.iter().map(fmt_q).collect::<Vec<_>>(),
                    expect.iter().map(fmt_q).collect::<Vec<_>>()
                )));
            }
        }
        Ok(Outcome::Pass(format!("{n} random integral pairs")))
    });

    plan.add("jordan.adjoint_square", "X## = det(X) X", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        for _ in 0..n {
            let x = random_integral_jordan(&mut rng, 3);
            if x.sharp().sharp() != x.scale(&x.det3()) {
                return Ok(Outcome::Fail(format!("X = {}", render_jordan(&x))));
            }
        }
        Ok(Outcome::Pass(format!("{n} random integral elements")))
    });

    plan.add("jordan.bordered_determinant", "determinant of a rank-2 block bordered by (w, 1 - tr Z)", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        for _ in 0..n {
            let z = random_integral_jordan2(&mut rng, 4);
            let w1 = random_order_element(&mut rng, 3);
            let w2 = random_order_element(&mut rng, 3);
            let corner = q(1) - z.trace2();
            let lhs = z.border(&w1, &w2, corner.clone()).det3();
            let rhs = -z.adj2().bracket(&w1, &w2) + z.det2() * corner;
            if lhs != rhs {
                return Ok(Outcome::Fail(format!(
                    "Z = ({}, {}, {}), w = ({}, {}): {} vs {}",
                    fmt_q(&z.a),
                    fmt_q(&z.d),
                    render_oct(&z.x),
                    render_oct(&w1),
                    render_oct(&w2),
                    fmt_q(&lhs),
                    fmt_q(&rhs)
                )));
            }
        }
        Ok(Outcome::Pass(format!("{n} random integral (Z, w)")))
    });
    plan
}

fn freudenthal(cfg: &SuiteConfig) -> Plan {
    let mut plan = Plan::new();
    for &n in &cfg.levels {
        plan.add(format!("freudenthal.gamma.{n}"), "level-N element of the Freudenthal group", move || {
            if n < 1 {
                return Err(Error::Precondition(format!("level {n} must be positive")));
            }
            let pairs = level_pairs(n);
            for &(a, b) in &pairs {
                let g = gamma_element(a, b, n)?;
                if !g.mu.is_one() {
                    return Ok(Outcome::Fail(format!("(a, b) = ({a}, {b}): mu = {}", fmt_q(&g.mu))));
                }
                if !is_lattice_preserving(&g)? {
                    return Ok(Outcome::Fail(format!("(a, b) = ({a}, {b}): not integral with integral inverse")));
                }
            }
            Ok(Outcome::Pass(format!(
                "{} pairs (a, b); integral, integral inverse, mu = 1, quartic and symplectic laws",
                pairs.len()
            )))
        });
    }
    plan
}

fn label(chi: &DirichletCharacter) -> String {
    format!("chi_{}[{}]", chi.modulus(), chi.index())
}

fn primitive_characters(n: u64) -> Vec<DirichletCharacter> {
    characters(n).into_iter().filter(|c| c.is_primitive()).collect()
}

/// `(chi, cube root)` for primitive non-quadratic cubes mod odd `n`.
pub fn cube_admissible(n: u64) -> Vec<(DirichletCharacter, DirichletCharacter)> {
    if n.is_multiple_of(2) {
        return Vec::new();
    }
    primitive_characters(n)
        .into_iter()
        .filter(|c| !c.is_quadratic() && has_cube_root(c))
        .map(|c| {
            let r = cube_root(&c).expect("has a cube root");
            (c, r)
        })
        .collect()
}

/// Checks the triple Jacobi sum against the Gauss-sum quotient for every
/// admissible `(chi, eta)`; `None` when no pair is admissible.
pub fn cube_scalar_identity(n: u64) -> Result<Option<std::result::Result<usize, String>>> {
    let admissible = cube_admissible(n);
    if admissible.is_empty() {
        return Ok(None);
    }
    let mut count = 0;
    for (chi, root) in &admissible {
        for eta in cal_d(n) {
            let (j, w) = cube_scalars(chi, root, &eta)?;
            let w = w.ok_or_else(|| Error::Precondition("Gauss form needs odd N".into()))?;
            if j != w {
                return Ok(Some(Err(format!(
                    "chi = {}, eta = {}: J = {}, W^3/W = {}",
                    label(chi),
                    label(&eta),
                    j.render(),
                    w.render()
                ))));
            }
            count += 1;
        }
    }
    Ok(Some(Ok(count)))
}

fn charsums(cfg: &SuiteConfig) -> Plan {
    let mut plan = Plan::new();
    let guard = cfg.guard;
    for &n in &cfg.moduli {
        plan.add(format!("charsums.gauss_norm.{n}"), "W(chi) W(conj chi) = chi(-1) N for primitive chi", move || {
            let prim = primitive_characters(n);
            if prim.is_empty() {
                return Ok(Outcome::Skip(format!("no primitive characters mod {n}")));
            }
            for chi in &prim {
                let lhs = &gauss(chi) * &gauss(&chi.conj());
                let rhs = chi.value(-1).scale(&q(n as i64));
                if lhs != rhs {
                    return Ok(Outcome::Fail(format!("{}: {} vs {}", label(chi), lhs.render(), rhs.render())));
                }
            }
            Ok(Outcome::Pass(format!("{} primitive characters", prim.len())))
        });

        plan.add(
            format!("charsums.jacobi_pair.{n}"),
            "J(chi1, chi2) = W(chi1) W(chi2) / W(chi1 chi2) when chi1 chi2 is primitive",
            move || {
                let chars = characters(n);
                let mut count = 0;
                for a in &chars {
                    for b in &chars {
                        let ab = a.mul(b)?;
                        if !ab.is_primitive() {
                            continue;
                        }
                        let lhs = &jacobi(&[a.clone(), b.clone()])? * &gauss(&ab);
                        let rhs = &gauss(a) * &gauss(b);
                        if lhs != rhs {
                            return Ok(Outcome::Fail(format!("({}, {})", label(a), label(b))));
                        }
                        count += 1;
                    }
                }
                if count == 0 {
                    return Ok(Outcome::Skip(format!("no pair with primitive product mod {n}")));
                }
                Ok(Outcome::Pass(format!("{count} pairs")))
            },
        );

        plan.add(
            format!("charsums.jacobi_triple.{n}"),
            "J(chi1, chi2, chi3) = J(chi1 chi2, chi3) J(chi1, chi2) when chi1 chi2 is primitive",
            move || {
                let chars = characters(n);
                let mut count = 0;
                for a in &chars {
                    for b in &chars {
                        let ab = a.mul(b)?;
                        if !ab.is_primitive() {
                            continue;
                        }
                        let pair = jacobi(&[a.clone(), b.clone()])?;
                        for c in &chars {
                            let lhs = jacobi(&[a.clone(), b.clone(), c.clone()])?;
                            let rhs = &jacobi(&[ab.clone(), c.clone()])? * &pair;
                            if lhs != rhs {
                                return Ok(Outcome::Fail(format!("({}, {}, {})", label(a), label(b), label(c))));
                            }
                            count += 1;
                        }
                    }
                }
                if count == 0 {
                    return Ok(Outcome::Skip(format!("no pair with primitive product mod {n}")));
                }
                Ok(Outcome::Pass(format!("{count} triples")))
            },
        );

        plan.add(
            format!("charsums.cube_scalar.{n}"),
            "J(psi, psi, psi) W(conj chi) = W(psi)^3 with psi = conj(cube root of chi times eta)",
            move || match cube_scalar_identity(n)? {
                None => Ok(Outcome::Skip(CUBE_SCALAR_SKIP.into())),
                Some(Ok(count)) => Ok(Outcome::Pass(format!("{count} admissible (chi, eta)"))),
                Some(Err(w)) => Ok(Outcome::Fail(w)),
            },
        );

        plan.add(
            format!("charsums.jordan_jacobi.{n}"),
            "rank-2 Jordan Jacobi sum equals N^4 J(chi, chi, eta)",
            move || {
                let prim = primitive_characters(n);
                if prim.is_empty() {
                    return Ok(Outcome::Skip(format!("no primitive characters mod {n}")));
                }
                guard.check((n as u128).pow(10), crate::charsum::sums::J2_GUARD)?;
                let n4 = q(n as i64).pow(4);
                let mut count = 0;
                for chi in &prim {
                    for eta in characters(n) {
                        let lhs = jacobi_j2(chi, &eta, Guard::Force)?;
                        let rhs = jacobi(&[chi.clone(), chi.clone(), eta.clone()])?.scale(&n4);
                        if lhs != rhs {
                            return Ok(Outcome::Fail(format!(
                                "({}, {}): {} vs {}",
                                label(chi),
                                label(&eta),
                                lhs.render(),
                                rhs.render()
                            )));
                        }
                        count += 1;
                    }
                }
                Ok(Outcome::Pass(format!("{count} pairs by full enumeration")))
            },
        );
    }
    if cfg.counts {
        add_count_checks(&mut plan, guard);
    }
    plan
}

type SharedHist = Arc<OnceLock<Result<Histogram>>>;

fn shared(form: Vec<Vec<i64>>, modulus: u64, prim: u64, guard: Guard) -> impl Fn() -> Result<Histogram> {
    let cell: SharedHist = Arc::new(OnceLock::new());
    move || {
        cell.get_or_init(|| value_histogram(&form, modulus, Some(prim), guard))
            .clone()
    }
}

fn ord_class(c: u64, p: u64, m: u32) -> u32 {
    let mut k = 0;
    let mut c = c;
    while k < m && c.is_multiple_of(p) {
        c /= p;
        k += 1;
    }
    k
}

/// Counts must depend on `c` only through `min(ord_p c, m)`.
fn ord_only(all: &[u64], p: u64, m: u32) -> Option<(u64, u64)> {
    let mut rep: Vec<Option<(u64, u64)>> = vec![None; m as usize + 1];
    for (c, &v) in all.iter().enumerate() {
        let k = ord_class(c as u64, p, m) as usize;
        match rep[k] {
            None => rep[k] = Some((c as u64, v)),
            Some((c0, v0)) if v0 != v => return Some((c0, c as u64)),
            _ => {}
        }
    }
    None
}

const FORMS: [&str; 2] = ["H+H+H+H", "norm form of o"];

fn form_by_name(name: &str) -> Vec<Vec<i64>> {
    if name == FORMS[0] {
        hyperbolic(4)
    } else {
        order_form()
    }
}

/// Compares histograms mod `p` against the closed forms for all residues.
pub fn check_counts_mod_p(form_name: &str, h: &Histogram, p: u64) -> Outcome {
    for c in 0..p as i64 {
        let prim = q(h.prim[c as usize] as i64);
        let all = q(h.all[c as usize] as i64);
        if prim != closed_a_prim_p(8, p, 1, c) || all != closed_a_p(8, p, 1, c) {
            return Outcome::Fail(format!(
                "{form_name}, c = {c}: A^prim = {}, A = {}; closed forms {}, {}",
                fmt_q(&prim),
                fmt_q(&all),
                fmt_q(&closed_a_prim_p(8, p, 1, c)),
                fmt_q(&closed_a_p(8, p, 1, c))
            ));
        }
    }
    if let Some((c0, c1)) = ord_only(&h.all, p, 1) {
        return Outcome::Fail(format!("{form_name}: counts differ at c = {c0} and c = {c1} of equal order"));
    }
    Outcome::Pass(String::new())
}

/// Hensel lift of primitive counts, the `c / p^2` recursion and order-only
/// dependence mod `p^2`.
pub fn check_counts_mod_p2(form_name: &str, h2: &Histogram, h1: &Histogram, p: u64) -> Outcome {
    let l = 8i64;
    let pq = q(p as i64);
    for c in 0..(p * p) as i64 {
        let prim2 = q(h2.prim[c as usize] as i64);
        let all2 = q(h2.all[c as usize] as i64);
        let prim1 = q(h1.prim[(c % p as i64) as usize] as i64);
        let lifted = qpow(&pq, l - 1) * &prim1;
        let closed = qpow(&pq, l - 1) * closed_a_prim_p(8, p, 1, c);
        let recursion = &prim2 + qpow(&pq, l) * q(reduced_count(None, c, p, 2) as i64);
        if prim2 != lifted || prim2 != closed || all2 != recursion {
            return Outcome::Fail(format!(
                "{form_name}, c = {c}: A^prim = {}, A = {}; lifted {}, closed {}, recursion {}",
                fmt_q(&prim2),
                fmt_q(&all2),
                fmt_q(&lifted),
                fmt_q(&closed),
                fmt_q(&recursion)
            ));
        }
    }
    if let Some((c0, c1)) = ord_only(&h2.all, p, 2) {
        return Outcome::Fail(format!("{form_name}: counts differ at c = {c0} and c = {c1} of equal order"));
    }
    Outcome::Pass(String::new())
}

/// `I_eta` against its closed form for every primitive `eta` mod `p^m` and every `c`.
pub fn check_i_eta(form_name: &str, h: &Histogram, p: u64, m: u32, chi: i64) -> Result<Outcome> {
    let modulus = p.pow(m);
    let mut count = 0;
    for eta in primitive_characters(modulus) {
        for c in 0..modulus as i64 {
            let sum = i_eta_sum(&eta, h, c)?;
            let closed = closed_i_eta(&eta, 8, p, m, chi, c);
            if sum != closed {
                return Ok(Outcome::Fail(format!(
                    "{form_name}, eta = {}, c = {c}: {} vs {}",
                    label(&eta),
                    sum.render(),
                    closed.render()
                )));
            }
            count += 1;
        }
    }
    Ok(Outcome::Pass(format!("{count} (eta, c)")))
}

fn add_count_checks(plan: &mut Plan, guard: Guard) {
    for p in [3u64, 5] {
        for form_name in FORMS {
            let hist = shared(form_by_name(form_name), p, p, guard);
            let hist = Arc::new(hist);
            let h = hist.clone();
            plan.add(
                format!("counts.{p}.1.{}", short(form_name)),
                "solution counts of S[x] = c mod p against closed forms, all c",
                move || {
                    Ok(match check_counts_mod_p(form_name, &h()?, p) {
                        Outcome::Pass(_) => Outcome::Pass(format!("{p} residues, A and A^prim")),
                        other => other,
                    })
                },
            );
            plan.add(
                format!("i_eta.{p}.1.{}", short(form_name)),
                "character sum of S[w] + c equals p^(lm/2) chi(S) eta(c)",
                move || check_i_eta(form_name, &hist()?, p, 1, 1),
            );
        }
    }
    for form_name in FORMS {
        let h2 = Arc::new(shared(form_by_name(form_name), 9, 3, guard));
        let h1 = shared(form_by_name(form_name), 3, 3, guard);
        let h2c = h2.clone();
        plan.add(
            format!("counts.3.2.{}", short(form_name)),
            "solution counts mod 9: Hensel lift, c/p^2 recursion, order-only dependence",
            move || {
                Ok(match check_counts_mod_p2(form_name, &h2c()?, &h1()?, 3) {
                    Outcome::Pass(_) => Outcome::Pass("9 residues, A and A^prim".into()),
                    other => other,
                })
            },
        );
        if form_name == FORMS[1] {
            plan.add(
                format!("i_eta.3.2.{}", short(form_name)),
                "character sum of S[w] + c mod 9 equals p^(lm/2) eta(c)",
                move || check_i_eta(form_name, &h2()?, 3, 2, 1),
            );
        }
    }
}

fn short(form_name: &str) -> &'static str {
    if form_name == FORMS[0] {
        "hyperbolic"
    } else {
        "order"
    }
}

fn siegel(cfg: &SuiteConfig) -> Vec<Check> {
    let mut plan = Plan::new();
    for &p in &cfg.primes {
        let order = if p == PrimeSpec::Formal { cfg.formal_order } else { cfg.numeric_order };
        plan.add(
            format!("siegel.hp.{p}"),
            "generating series of local polynomial sums equals the product of local factors",
            move || {
                let r = verify_hp(&p, order)?;
                Ok(match r.first_mismatch {
                    None => Outcome::Pass(format!("exact through t^{order}")),
                    Some(m) => {
                        let o = &r.orders[m];
                        Outcome::Fail(format!("t^{m}: {} vs {}", o.lambda_hat, o.expected))
                    }
                })
            },
        );
    }
    plan.add(
        "siegel.ftilde_symmetry",
        "local polynomial is a Laurent polynomial invariant under X -> 1/X",
        || {
            let mut count = 0;
            for m1 in 0..=4 {
                for m3 in 0..=4 {
                    for m2 in 0..=m3 {
                        let prm = SiegelParams::new(m1, m2, m3)?;
                        let f = ftilde(&prm, &PrimeSpec::Formal)?;
                        if f.invert_var(Var::X) != f {
                            return Ok(Outcome::Fail(format!("({m1}, {m2}, {m3}): {}", f.render())));
                        }
                        count += 1;
                    }
                }
            }
            let unit = ftilde(&SiegelParams::new(0, 0, 0)?, &PrimeSpec::Formal)?;
            Ok(Outcome::from_bool(unit.is_one(), format!("{count} orbits; trivial orbit gives 1"), || {
                format!("trivial orbit gives {}", unit.render())
            }))
        },
    );
    let kp = std::sync::Mutex::new(None);
    let (mut checks, ()) = rayon::join(
        || plan.run(),
        || {
            *kp.lock().expect("unpoisoned") = Some(verify_kp());
        },
    );
    let kp = kp.into_inner().expect("unpoisoned").expect("computed");
    for c in kp.checks {
        checks.push(Check {
            id: format!("siegel.kp.{}", c.name),
            anchor: "eight-term local sum collapses to 1".into(),
            status: if c.holds { Status::Pass } else { Status::Fail },
            detail: c.residual.unwrap_or_else(|| "exact".into()),
        });
    }
    checks
}

fn first_difference(a: &KmCoefficients, b: &KmCoefficients) -> Option<usize> {
    (1..=a.max_n().min(b.max_n())).find(|&n| a.get(n) != b.get(n))
}

fn km(cfg: &SuiteConfig) -> Plan {
    let mut plan = Plan::new();
    let (guard, max_n) = (cfg.guard, cfg.max_n);
    let weight = cfg.eigen_weight();

    plan.add("km.constant", "normalizing constant times zeta values is rational", || {
        let r = constant_check();
        Ok(Outcome::from_bool(r.holds, format!("{} (pi exponent {})", r.value, r.pi_exponent), || {
            format!("{} vs {}", r.value, r.expected)
        }))
    });

    let w = weight.clone();
    plan.add("km.eigenform", "Hecke multiplicativity, prime-power recursion and Deligne bound", move || {
        let w = w.clone()?;
        let f = eigenform(w, max_n.max(97))?;
        if let Some((a, b)) = f.multiplicativity_failure() {
            return Ok(Outcome::Fail(format!("a({}) != a({a}) a({b})", a * b)));
        }
        for p in primes_up_to(7) {
            if !f.hecke_recursion_holds(p) {
                return Ok(Outcome::Fail(format!("prime-power recursion fails at {p}")));
            }
        }
        let mut worst = 0f64;
        for p in primes_up_to(97) {
            if !f.deligne_bound_holds(p)? {
                return Ok(Outcome::Fail(format!("|a({p})| exceeds 2 p^((w-1)/2)")));
            }
            worst = worst.max(f.deligne_ratio(p)?);
        }
        Ok(Outcome::Pass(format!("weight {w}; max |a(p)|/(2p^((w-1)/2)) over p <= 97 is {worst:.6}")))
    });

    for chi in characters(cfg.km_modulus) {
        let w = weight.clone();
        plan.add(
            format!("km.routes.{}", label(&chi)),
            "local-polynomial and Dirichlet-convolution assemblies agree; coefficients multiplicative",
            move || {
                let f = eigenform(w.clone()?, max_n)?;
                let a = km2_local(&f, &chi, max_n, guard)?;
                let b = km2_convolution(&f, &chi, max_n, guard)?;
                if let Some(n) = first_difference(&a, &b) {
                    return Ok(Outcome::Fail(format!("b({n}): {} vs {}", a.get(n).render(), b.get(n).render())));
                }
                if let Some((m, n)) = a.multiplicativity_failure() {
                    return Ok(Outcome::Fail(format!("b({}) != b({m}) b({n})", m * n)));
                }
                Ok(Outcome::Pass(format!("n <= {max_n}")))
            },
        );
    }

    for &n in &cfg.first_kind_moduli {
        let w = weight.clone();
        plan.add(
            format!("km.first_kind.{n}"),
            "first-kind series: Jacobi and Gauss scalar assemblies agree; vanishes off cubes",
            move || {
                let f = eigenform(w.clone()?, max_n)?;
                let mut count = 0;
                for chi in primitive_characters(n) {
                    if chi.is_quadratic() {
                        continue;
                    }
                    let r = km1(&f, &chi, max_n, guard)?;
                    let off_cube = chi.value_exp(u0(n) as i64) != Some(0);
                    if off_cube != r.vanishes || (r.vanishes && !r.jacobi_form.is_zero()) {
                        return Ok(Outcome::Fail(format!(
                            "{}: chi(u0) != 1 is {off_cube}, series vanishes is {}",
                            label(&chi),
                            r.vanishes
                        )));
                    }
                    if let Some(g) = &r.gauss_form {
                        if let Some(k) = first_difference(g, &r.jacobi_form) {
                            return Ok(Outcome::Fail(format!("{}: coefficient {k} differs", label(&chi))));
                        }
                    }
                    count += 1;
                }
                if count == 0 {
                    return Ok(Outcome::Skip(format!("no primitive non-quadratic characters mod {n}")));
                }
                Ok(Outcome::Pass(format!("{count} characters, n <= {max_n}")))
            },
        );
    }

    let w = weight;
    plan.add("km.fourier", "Fourier coefficient of the lift at small diagonal T", move || {
        let f = eigenform(w.clone()?, 8)?;
        let one = fourier_coefficient(&JordanElement::identity(), &f)?;
        let two = fourier_coefficient(&JordanElement::diag_ints(1, 1, 2), &f)?;
        let a2 = fmt_q(&Q::from_integer(f.a(2)?.clone()));
        Ok(Outcome::from_bool(one.exact == "1" && two.exact == a2, format!("T = 1: 1; T = diag(1,1,2): {}", two.expression), || {
            format!("T = 1: {}; T = diag(1,1,2): {} (expected a(2) = {a2})", one.exact, two.exact)
        }))
    });
    plan
}
