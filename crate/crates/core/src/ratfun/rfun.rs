use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;

use super::gcd::{div_ordinary, gcd, monic};
use super::mpoly::{Exps, MPoly, Var, NVARS};
use crate::arith::{q, Q};
use crate::error::{Error, Result};

/// Rational function: a Laurent numerator over a product of powers of
/// monic ordinary polynomials, none of which divides the numerator.
#[derive(Clone)]
pub struct RFun {
    num: MPoly,
    den: Vec<(MPoly, u32)>,
}

/// Split `f = c * x^e * f0` with `f0` ordinary, free of monomial factors and lex-monic.
fn split_factor(f: &MPoly) -> (Q, Exps, MPoly) {
    let e = f.min_exps();
    let f0 = f.shift(&e.map(|k| -k));
    let c = f0.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero);
    (c.clone(), e, f0.scale(&c.recip()))
}

fn push_factor(list: &mut Vec<(MPoly, u32)>, f: MPoly, k: u32) {
    if k == 0 {
        return;
    }
    match list.iter_mut().find(|(g, _)| *g == f) {
        Some(entry) => entry.1 += k,
        None => list.push((f, k)),
    }
}

fn expand(factors: &[(MPoly, u32)]) -> MPoly {
    factors
        .iter()
        .fold(MPoly::one(), |acc, (f, k)| &acc * &f.pow(*k))
}

impl RFun {
    pub fn zero() -> Self {
        RFun::from_poly(MPoly::zero())
    }

    pub fn one() -> Self {
        RFun::from_poly(MPoly::one())
    }

    pub fn constant(c: Q) -> Self {
        RFun::from_poly(MPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        RFun::from_poly(MPoly::var(v))
    }

    pub fn from_poly(num: MPoly) -> Self {
        RFun { num, den: Vec::new() }
    }

    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        Self::from_factors(num, &[den])
    }

    /// `num / prod dens`.
    pub fn from_factors(num: MPoly, dens: &[MPoly]) -> Result<Self> {
        let mut num = num;
        let mut factors = Vec::new();
        for d in dens {
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let (c, e, f0) = split_factor(d);
            num = num.shift(&e.map(|k| -k)).scale(&c.recip());
            if f0.as_constant().is_none() {
                push_factor(&mut factors, f0, 1);
            }
        }
        Ok(Self::reduce(num, factors))
    }

    fn reduce(mut num: MPoly, factors: Vec<(MPoly, u32)>) -> Self {
        let mut queue = factors;
        let mut kept: Vec<(MPoly, u32)> = Vec::new();
        while let Some((f, mut k)) = queue.pop() {
            if num.is_zero() {
                return RFun::zero();
            }
            while k > 0 {
                match num.div_exact(&f) {
                    Some(q) => {
                        num = q;
                        k -= 1;
                    }
                    None => break,
                }
            }
            if k == 0 {
                continue;
            }
            let shifted = num.shift(&num.min_exps().map(|x| -x));
            let g = gcd(&shifted, &f);
            if g.as_constant().is_some() {
                push_factor(&mut kept, f, k);
                continue;
            }
            let h = monic(&div_ordinary(&f, &g).expect("gcd divides"));
            queue.push((g, k));
            if h.as_constant().is_none() {
                queue.push((h, k));
            }
        }
        kept.sort_by_key(|a| a.0.render());
        RFun { num, den: kept }
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(MPoly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> MPoly {
        expand(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial this function equals, if it is one.
    pub fn as_poly(&self) -> Option<&MPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn into_poly(self) -> Result<MPoly> {
        if self.den.is_empty() {
            Ok(self.num)
        } else {
            Err(Error::NotLaurent(self.render()))
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        RFun {
            num: self.num.scale(c),
            den: if c.is_zero() { Vec::new() } else { self.den.clone() },
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::from_factors(self.denominator(), std::slice::from_ref(&self.num))
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(RFun {
            num: base.num.pow(k),
            den: base.den.iter().map(|(f, m)| (f.clone(), m * k)).collect(),
        })
    }

    pub fn subs_monomial(&self, v: Var, image: &Exps, c: &Q) -> Result<Self> {
        let dens: Vec<MPoly> = self
            .den
            .iter()
            .flat_map(|(f, k)| std::iter::repeat_n(f.subs_monomial(v, image, c), *k as usize))
            .collect();
        Self::from_factors(self.num.subs_monomial(v, image, c), &dens)
    }

    pub fn invert_var(&self, v: Var) -> Result<Self> {
        self.subs_monomial(v, &super::mpoly::mono(&[(v, -1)]), &Q::one())
    }

    pub fn eval_partial(&self, vals: &[(Var, Q)]) -> Result<Self> {
        let dens: Vec<MPoly> = self
            .den
            .iter()
            .flat_map(|(f, k)| std::iter::repeat_n(f.eval_partial(vals), *k as usize))
            .collect();
        Self::from_factors(self.num.eval_partial(vals), &dens)
    }

    pub fn eval(&self, point: &[Q; NVARS]) -> Result<Q> {
        let n = self.num.eval(point).ok_or(Error::DivisionByZero)?;
        let d = self.denominator().eval(point).ok_or(Error::DivisionByZero)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(n / d)
    }

    pub fn render(&self) -> String {
        if self.den.is_empty() {
            return self.num.render();
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(f, k)| match k {
                1 => format!("({f})"),
                _ => format!("({f})^{k}"),
            })
            .collect();
        format!("({})/({})", self.num, den.join("*"))
    }
}

/// Randomized identity test: compare values at `trials` random points.
pub fn probably_equal<R: Rng>(a: &RFun, b: &RFun, trials: usize, rng: &mut R) -> bool {
    let mut done = 0;
    let mut attempts = 0;
    while done < trials && attempts < trials * 20 {
        attempts += 1;
        let point: [Q; NVARS] =
            std::array::from_fn(|_| Q::new(rng.gen_range(-97i64..=97).into(), rng.gen_range(1i64..=13).into()));
        match (a.eval(&point), b.eval(&point)) {
            (Ok(x), Ok(y)) => {
                if x != y {
                    return false;
                }
                done += 1;
            }
            _ => continue,
        }
    }
    done == trials
}

impl PartialEq for RFun {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl fmt::Debug for RFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for RFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<MPoly> for RFun {
    fn from(p: MPoly) -> Self {
        RFun::from_poly(p)
    }
}

impl From<i64> for RFun {
    fn from(c: i64) -> Self {
        RFun::constant(q(c))
    }
}

impl Add for &RFun {
    type Output = RFun;
    fn add(self, rhs: &RFun) -> RFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut lcm: Vec<(MPoly, u32)> = self.den.clone();
        for (f, k) in &rhs.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some(e) => e.1 = e.1.max(*k),
                None => lcm.push((f.clone(), *k)),
            }
        }
        let cofactor = |den: &[(MPoly, u32)]| -> MPoly {
            let rest: Vec<(MPoly, u32)> = lcm
                .iter()
                .map(|(f, k)| {
                    let have = den.iter().find(|(g, _)| g == f).map_or(0, |e| e.1);
                    (f.clone(), k - have)
                })
                .collect();
            expand(&rest)
        };
        let num = &(&self.num * &cofactor(&self.den)) + &(&rhs.num * &cofactor(&rhs.den));
        RFun::reduce(num, lcm)
    }
}

impl Neg for &RFun {
    type Output = RFun;
    fn neg(self) -> RFun {
        RFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RFun {
    type Output = RFun;
    fn sub(self, rhs: &RFun) -> RFun {
        self + &(-rhs)
    }
}

impl Mul for &RFun {
    type Output = RFun;
    fn mul(self, rhs: &RFun) -> RFun {
        if self.is_zero() || rhs.is_zero() {
            return RFun::zero();
        }
        let mut den = self.den.clone();
        for (f, k) in &rhs.den {
            push_factor(&mut den, f.clone(), *k);
        }
        RFun::reduce(&self.num * &rhs.num, den)
    }
}

impl Div for &RFun {
    type Output = Result<RFun>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RFun) -> Result<RFun> {
        Ok(self * &rhs.recip()?)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RFun {
            type Output = RFun;
            fn $f(self, rhs: RFun) -> RFun {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RFun {
    type Output = RFun;
    fn neg(self) -> RFun {
        -&self
    }
}
