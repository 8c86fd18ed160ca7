use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_q, q, qpow, Q};

pub const NVARS: usize = 5;

pub type Exps = [i32; NVARS];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    P = 0,
    X = 1,
    T = 2,
    Y = 3,
    Z = 4,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::P, Var::X, Var::T, Var::Y, Var::Z];

    pub fn name(self) -> &'static str {
        ["p", "X", "t", "Y", "Z"][self as usize]
    }
}

/// Sparse Laurent polynomial with rational coefficients in `p, X, t, Y, Z`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, Q>,
}

pub fn mono(pairs: &[(Var, i32)]) -> Exps {
    let mut e = [0; NVARS];
    for &(v, k) in pairs {
        e[v as usize] += k;
    }
    e
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term([0; NVARS], c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn term(e: Exps, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, k: i32) -> Self {
        Self::term(mono(&[(v, k)]), Q::one())
    }

    pub fn monomial(pairs: &[(Var, i32)], c: Q) -> Self {
        Self::term(mono(pairs), c)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, Q)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The only term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(Exps, Q)> {
        (self.terms.len() == 1).then(|| {
            let (e, c) = self.terms.iter().next().expect("one term");
            (*e, c.clone())
        })
    }

    /// Lex-greatest term.
    pub fn leading(&self) -> Option<(&Exps, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn shift(&self, e: &Exps) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (std::array::from_fn(|i| k[i] + e[i]), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn max_exp(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|e| e[v as usize]).max()
    }

    pub fn min_exp(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|e| e[v as usize]).min()
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v as usize] != 0)
    }

    /// Componentwise minimum exponent vector (zero for the zero polynomial).
    pub fn min_exps(&self) -> Exps {
        let mut m = [0; NVARS];
        if let Some(first) = self.terms.keys().next() {
            m = *first;
            for e in self.terms.keys() {
                for i in 0..NVARS {
                    m[i] = m[i].min(e[i]);
                }
            }
        }
        m
    }

    pub fn is_ordinary(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k >= 0))
    }

    /// Coefficient of `v^k`, as a polynomial free of `v`.
    pub fn coeff_of(&self, v: Var, k: i32) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v as usize] == k)
                .map(|(e, c)| {
                    let mut e = *e;
                    e[v as usize] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficient of a monomial in a subset of variables.
    pub fn coeff_of_monomial(&self, pairs: &[(Var, i32)]) -> Self {
        pairs
            .iter()
            .fold(self.clone(), |acc, &(v, k)| acc.coeff_of(v, k))
    }

    /// Drop terms with `deg_v > max`.
    pub fn truncate(&self, v: Var, max: i32) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v as usize] <= max)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Monomial substitution `v -> c * prod_w w^{image_w}`.
    pub fn subs_monomial(&self, v: Var, image: &Exps, c: &Q) -> Self {
        let mut out = MPoly::zero();
        let vi = v as usize;
        for (e, x) in &self.terms {
            let k = e[vi];
            let mut ne = *e;
            ne[vi] = 0;
            for i in 0..NVARS {
                ne[i] += k * image[i];
            }
            out.add_term(ne, x * qpow(c, k as i64));
        }
        out
    }

    /// `v -> v^-1`.
    pub fn invert_var(&self, v: Var) -> Self {
        self.subs_monomial(v, &mono(&[(v, -1)]), &Q::one())
    }

    /// Substitute rational values for some variables.
    pub fn eval_partial(&self, vals: &[(Var, Q)]) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut ne = *e;
            let mut c = c.clone();
            for (v, x) in vals {
                let k = ne[*v as usize];
                if k != 0 {
                    c *= qpow(x, k as i64);
                    ne[*v as usize] = 0;
                }
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Value at a point; `None` if a zero value meets a negative exponent.
    pub fn eval(&self, point: &[Q; NVARS]) -> Option<Q> {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                if e[i] != 0 {
                    if point[i].is_zero() && e[i] < 0 {
                        return None;
                    }
                    t *= qpow(&point[i], e[i] as i64);
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Substitute a polynomial for `v`. Negative powers of `v` need a
    /// monomial image.
    pub fn compose(&self, v: Var, image: &MPoly) -> Self {
        let vi = v as usize;
        let mut by_power: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = *e;
            ne[vi] = 0;
            by_power.entry(e[vi]).or_default().add_term(ne, c.clone());
        }
        let mut out = MPoly::zero();
        for (k, rest) in by_power {
            let pw = if k >= 0 {
                image.pow(k as u32)
            } else {
                let (me, mc) = image
                    .as_monomial()
                    .expect("negative powers need a monomial image");
                MPoly::term(std::array::from_fn(|i| me[i] * k), qpow(&mc, k as i64))
            };
            out = &out + &(&rest * &pw);
        }
        out
    }

    /// Exact quotient `self / d` in the Laurent ring, if it exists.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        let (ns, ds) = (self.min_exps(), d.min_exps());
        let n0 = self.shift(&ns.map(|k| -k));
        let d0 = d.shift(&ds.map(|k| -k));
        let q0 = super::gcd::div_ordinary(&n0, &d0)?;
        Some(q0.shift(&std::array::from_fn(|i| ns[i] - ds[i])))
    }

    /// Canonical text: terms in decreasing lex order of `(p, X, t, Y, Z)` exponents.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for v in Var::ALL {
                let k = e[v as usize];
                match k {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    _ => factors.push(format!("{}^{}", v.name(), k)),
                }
            }
            if factors.is_empty() || !a.is_one() {
                factors.insert(0, fmt_q(&a));
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut acc: BTreeMap<Exps, Q> = BTreeMap::new();
        for (e1, c1) in &small.terms {
            for (e2, c2) in &big.terms {
                let e: Exps = std::array::from_fn(|i| e1[i] + e2[i]);
                let prod = c1 * c2;
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += prod;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
