//! Dirichlet characters modulo `N` as exponent tables.
//!
//! `(Z/NZ)^x` is written as a product of cyclic groups on fixed generators:
//! for each odd prime power the smallest primitive root, for `4` the class of
//! `-1`, and for `2^e` (`e >= 3`) the classes of `-1` and `5`. Each generator
//! is lifted by CRT to be `1` modulo the other prime-power factors. A
//! character sends generator `g_i` (of order `n_i`) to `zeta_{n_i}^{k_i}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::cyclotomic::CycNumber;
use crate::arith::{euler_phi, factorize, gcd_u64, lcm_u64, mod_inv, mod_pow};
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct UnitGroup {
    pub modulus: u64,
    /// `(p, e)` factorization of the modulus.
    pub factors: Vec<(u64, u32)>,
    pub gens: Vec<u64>,
    pub gen_orders: Vec<u64>,
    /// Index into `factors` of each generator's prime.
    gen_prime: Vec<usize>,
    /// Exponent of the group; character values live in `Q(zeta_exponent)`.
    pub exponent: u64,
    logs: Vec<Option<Vec<u64>>>,
}

fn smallest_primitive_root(pe: u64, p: u64) -> u64 {
    let phi = euler_phi(pe);
    let qs: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..pe)
        .find(|&g| g % p != 0 && qs.iter().all(|&q| mod_pow(g, phi / q, pe) != 1))
        .expect("odd prime powers are cyclic")
}

/// `x ≡ r (mod pe)` and `x ≡ 1 (mod n / pe)`.
fn crt_lift(r: u64, pe: u64, n: u64) -> u64 {
    let rest = n / pe;
    if rest == 1 {
        return r % n;
    }
    // x = 1 + rest * t, rest * t ≡ r - 1 (mod pe)
    let inv = mod_inv(rest % pe, pe).expect("coprime");
    let t = ((r % pe + pe - 1) % pe) as u128 * inv as u128 % pe as u128;
    ((1 + rest as u128 * t) % n as u128) as u64
}

impl UnitGroup {
    pub fn get(n: u64) -> Arc<UnitGroup> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UnitGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().expect("poisoned").get(&n) {
            return g.clone();
        }
        let g = Arc::new(Self::build(n));
        cache.lock().expect("poisoned").insert(n, g.clone());
        g
    }

    fn build(n: u64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let factors = factorize(n);
        let (mut gens, mut gen_orders, mut gen_prime) = (vec![], vec![], vec![]);
        for (idx, &(p, e)) in factors.iter().enumerate() {
            let pe = p.pow(e);
            let local: Vec<(u64, u64)> = if p == 2 {
                match e {
                    1 => vec![],
                    2 => vec![(3, 2)],
                    _ => vec![(pe - 1, 2), (5, pe / 4)],
                }
            } else {
                vec![(smallest_primitive_root(pe, p), euler_phi(pe))]
            };
            for (g, o) in local {
                gens.push(crt_lift(g, pe, n));
                gen_orders.push(o);
                gen_prime.push(idx);
            }
        }
        let exponent = gen_orders.iter().fold(1, |a, &o| lcm_u64(a, o));
        let mut logs = vec![None; n as usize];
        let total: u64 = gen_orders.iter().product();
        for idx in 0..total {
            let mut rem = idx;
            let mut x = 1 % n;
            let mut v = Vec::with_capacity(gens.len());
            for (g, &o) in gens.iter().zip(&gen_orders) {
                let k = rem % o;
                rem /= o;
                x = ((x as u128 * mod_pow(*g, k, n) as u128) % n as u128) as u64;
                v.push(k);
            }
            logs[x as usize] = Some(v);
        }
        if n == 1 {
            logs[0] = Some(vec![]);
        }
        UnitGroup {
            modulus: n,
            factors,
            gens,
            gen_orders,
            gen_prime,
            exponent,
            logs,
        }
    }

    pub fn order(&self) -> u64 {
        self.gen_orders.iter().product()
    }

    /// Generator coordinates of `a`, `None` off units.
    pub fn log(&self, a: i64) -> Option<&[u64]> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        self.logs[r].as_deref()
    }

    pub fn is_unit(&self, a: i64) -> bool {
        self.log(a).is_some()
    }
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    /// `k_i`: the image of generator `i` is `zeta_{n_i}^{k_i}`.
    exps: Vec<u64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[mod {}; {:?}]", self.group.modulus, self.exps)
    }
}

/// All characters modulo `n`, ordered by [`DirichletCharacter::index`].
pub fn characters(n: u64) -> Vec<DirichletCharacter> {
    let g = UnitGroup::get(n);
    (0..g.order())
        .map(|i| DirichletCharacter::from_index(g.clone(), i))
        .collect()
}

impl DirichletCharacter {
    pub fn principal(n: u64) -> Self {
        let g = UnitGroup::get(n);
        let exps = vec![0; g.gens.len()];
        DirichletCharacter { group: g, exps }
    }

    pub fn from_exps(n: u64, exps: Vec<u64>) -> Result<Self> {
        let g = UnitGroup::get(n);
        if exps.len() != g.gens.len() {
            return Err(Error::Precondition(format!(
                "modulus {n} has {} generators, got {} exponents",
                g.gens.len(),
                exps.len()
            )));
        }
        let exps = exps.iter().zip(&g.gen_orders).map(|(k, o)| k % o).collect();
        Ok(DirichletCharacter { group: g, exps })
    }

    fn from_index(group: Arc<UnitGroup>, mut idx: u64) -> Self {
        let exps = group
            .gen_orders
            .iter()
            .map(|&o| {
                let k = idx % o;
                idx /= o;
                k
            })
            .collect();
        DirichletCharacter { group, exps }
    }

    /// Mixed-radix position in [`characters`].
    pub fn index(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.group.gen_orders)
            .rev()
            .fold(0, |acc, (&k, &o)| acc * o + k)
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &UnitGroup {
        &self.group
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// Values live in `Q(zeta_L)` for this `L`.
    pub fn value_field(&self) -> u64 {
        self.group.exponent
    }

    /// `chi(a) = zeta_L^e`, `None` when `a` is not a unit.
    pub fn value_exp(&self, a: i64) -> Option<u64> {
        let l = self.group.exponent;
        self.group.log(a).map(|v| {
            v.iter()
                .zip(&self.exps)
                .zip(&self.group.gen_orders)
                .fold(0u64, |acc, ((&x, &k), &o)| (acc + x * k % o * (l / o)) % l)
        })
    }

    pub fn value(&self, a: i64) -> CycNumber {
        let l = self.group.exponent;
        match self.value_exp(a) {
            Some(e) => CycNumber::zeta(l, e as i64),
            None => CycNumber::zero(l),
        }
    }

    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.group.gen_orders)
            .fold(1, |acc, (&k, &o)| lcm_u64(acc, o / gcd_u64(o, k)))
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&k| k == 0)
    }

    pub fn is_quadratic(&self) -> bool {
        self.order() == 2
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.group.gen_orders)
            .map(|((a, b), o)| (a + b) % o)
            .collect();
        Ok(DirichletCharacter {
            group: self.group.clone(),
            exps,
        })
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    pub fn pow(&self, e: i64) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.gen_orders)
            .map(|(&k, &o)| (k as i64 * e).rem_euclid(o as i64) as u64)
            .collect();
        DirichletCharacter {
            group: self.group.clone(),
            exps,
        }
    }

    /// Smallest `d | N` such that `chi` is trivial on units `≡ 1 (mod d)`.
    pub fn conductor(&self) -> u64 {
        let n = self.modulus();
        let mut divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        divisors
            .into_iter()
            .find(|&d| {
                (0..n)
                    .filter(|&a| a % d == 1 % d && self.group.is_unit(a as i64))
                    .all(|a| self.value_exp(a as i64) == Some(0))
            })
            .unwrap_or(n)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// The factor of `chi` at `p`, a character modulo `p^e`.
    pub fn local_component(&self, p: u64) -> Result<Self> {
        let idx = self
            .group
            .factors
            .iter()
            .position(|&(q, _)| q == p)
            .ok_or_else(|| Error::Precondition(format!("{p} does not divide {}", self.modulus())))?;
        let pe = p.pow(self.group.factors[idx].1);
        let exps = self
            .exps
            .iter()
            .zip(&self.group.gen_prime)
            .filter(|(_, &gp)| gp == idx)
            .map(|(&k, _)| k)
            .collect();
        Self::from_exps(pe, exps)
    }

    /// Product of the values of several characters at `a`.
    pub fn eval_product(components: &[DirichletCharacter], a: i64) -> CycNumber {
        components.iter().fold(CycNumber::one(1), |acc, c| &acc * &c.value(a))
    }
}

/// `l = gcd(3, phi(N))`.
pub fn cube_level(n: u64) -> u64 {
    gcd_u64(3, euler_phi(n))
}

/// Smallest unit `u` of multiplicative order `l`.
pub fn u0(n: u64) -> u64 {
    let l = cube_level(n);
    if l == 1 {
        return 1;
    }
    (2..n)
        .find(|&u| u.gcd(&n) == 1 && mod_pow(u, 3, n) == 1)
        .expect("3 | phi(N) gives an element of order 3")
}

/// Units `u` with `u^l = 1`.
pub fn l_torsion(n: u64) -> Vec<u64> {
    let l = cube_level(n);
    (0..n)
        .filter(|&u| u.gcd(&n) == 1 && mod_pow(u, l, n) == 1 % n)
        .collect()
}

/// Whether `chi` is a cube: trivial on all `l`-torsion units.
pub fn has_cube_root(chi: &DirichletCharacter) -> bool {
    l_torsion(chi.modulus())
        .into_iter()
        .all(|u| chi.value_exp(u as i64) == Some(0))
}

/// The first `psi` in [`characters`] order with `psi^3 = chi`.
pub fn cube_root(chi: &DirichletCharacter) -> Result<DirichletCharacter> {
    characters(chi.modulus())
        .into_iter()
        .find(|psi| &psi.pow(3) == chi)
        .ok_or_else(|| {
            Error::Precondition(format!(
                "{chi:?} is not a cube (nontrivial on u0 = {})",
                u0(chi.modulus())
            ))
        })
}

/// `{eta : eta^l = 1}`.
pub fn cal_d(n: u64) -> Vec<DirichletCharacter> {
    let l = cube_level(n) as i64;
    characters(n)
        .into_iter()
        .filter(|eta| eta.pow(l).is_principal())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration() {
        for n in 1..=40u64 {
            let cs = characters(n);
            assert_eq!(cs.len() as u64, euler_phi(n));
            for (i, c) in cs.iter().enumerate() {
                assert_eq!(c.index(), i as u64);
                assert_eq!(c.value_exp(1), Some(0));
            }
        }
        assert_eq!(characters(5).len(), 4);
    }

    #[test]
    fn multiplicative() {
        for n in [8u64, 12, 15, 27, 28] {
            for c in characters(n) {
                let l = c.value_field();
                for a in 0..n as i64 {
                    for b in 0..n as i64 {
                        let lhs = c.value_exp(a * b);
                        let rhs = c.value_exp(a).zip(c.value_exp(b)).map(|(x, y)| (x + y) % l);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn primitivity() {
        assert!(DirichletCharacter::principal(1).is_primitive());
        assert!(!DirichletCharacter::principal(5).is_primitive());
        assert_eq!(characters(5).iter().filter(|c| c.is_primitive()).count(), 3);
        // phi*: 4 -> 1, 8 -> 2, 9 -> 4
        assert_eq!(characters(8).iter().filter(|c| c.is_primitive()).count(), 2);
        assert_eq!(characters(9).iter().filter(|c| c.is_primitive()).count(), 4);
        assert_eq!(characters(15).iter().filter(|c| c.is_primitive()).count(), 3);
    }

    #[test]
    fn local_components_multiply_back() {
        for n in [15u64, 36, 91] {
            for c in characters(n) {
                let comps: Vec<_> = factorize(n)
                    .into_iter()
                    .map(|(p, _)| c.local_component(p).unwrap())
                    .collect();
                for a in 0..n as i64 {
                    assert_eq!(DirichletCharacter::eval_product(&comps, a), c.value(a));
                }
            }
        }
        assert!(characters(15)[1].local_component(7).is_err());
    }

    #[test]
    fn cube_bookkeeping() {
        assert_eq!(cube_level(5), 1);
        assert_eq!(u0(5), 1);
        assert!(characters(5).iter().all(has_cube_root));
        assert_eq!(cal_d(5).len(), 1);
        assert_eq!(cube_level(13), 3);
        assert_eq!(u0(13), 3);
        assert_eq!(cal_d(13).len(), 3);
        assert_eq!(cal_d(91).len(), 9);
        assert_eq!(cal_d(9).len(), 3);
        for c in characters(13) {
            let root = cube_root(&c);
            assert_eq!(root.is_ok(), c.value_exp(3) == Some(0));
            if let Ok(r) = root {
                assert_eq!(r.pow(3), c);
            }
        }
    }
}
