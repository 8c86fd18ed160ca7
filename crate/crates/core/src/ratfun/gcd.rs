//! Division and gcd for ordinary (non-negative exponent) polynomials.

use num_traits::One;

use super::mpoly::{mono, Exps, MPoly, Var};
use crate::arith::Q;

fn divides(a: &Exps, b: &Exps) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Exact quotient of ordinary polynomials, `None` if `d` does not divide `n`.
pub fn div_ordinary(n: &MPoly, d: &MPoly) -> Option<MPoly> {
    let (de, dc) = d.leading().map(|(e, c)| (*e, c.clone()))?;
    for v in Var::ALL {
        if n.max_exp(v).unwrap_or(0) < d.max_exp(v).unwrap_or(0) && !n.is_zero() {
            return None;
        }
    }
    let inv = dc.recip();
    let mut r = n.clone();
    let mut quot = MPoly::zero();
    while let Some((re, rc)) = r.leading().map(|(e, c)| (*e, c.clone())) {
        if !divides(&de, &re) {
            return None;
        }
        let e: Exps = std::array::from_fn(|i| re[i] - de[i]);
        let c = rc * &inv;
        r = &r - &d.shift(&e).scale(&c);
        quot.add_term(e, c);
    }
    Some(quot)
}

/// Scale to make the lex-leading coefficient one.
pub fn monic(a: &MPoly) -> MPoly {
    match a.leading() {
        Some((_, c)) if !c.is_one() => a.scale(&c.recip()),
        _ => a.clone(),
    }
}

fn degree(a: &MPoly, v: Var) -> i32 {
    a.max_exp(v).unwrap_or(0)
}

fn coefficients(a: &MPoly, v: Var) -> Vec<MPoly> {
    (0..=degree(a, v)).map(|k| a.coeff_of(v, k)).collect()
}

fn content(a: &MPoly, v: Var) -> MPoly {
    let mut g = MPoly::zero();
    for c in coefficients(a, v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.as_constant().is_some() {
            return MPoly::one();
        }
    }
    g
}

fn primitive_part(a: &MPoly, v: Var) -> MPoly {
    let c = content(a, v);
    monic(&div_ordinary(a, &c).expect("content divides"))
}

/// `lc(b)^(deg a - deg b + 1) a mod b` in `v`.
fn prem(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
    let n = degree(b, v);
    let lcb = b.coeff_of(v, n);
    let mut r = a.clone();
    let mut steps = degree(a, v) - n + 1;
    while !r.is_zero() && degree(&r, v) >= n {
        let k = degree(&r, v);
        let lcr = r.coeff_of(v, k);
        r = &(&lcb * &r) - &(&lcr * &b.shift(&mono(&[(v, k - n)])));
        steps -= 1;
    }
    &r * &lcb.pow(steps.max(0) as u32)
}

fn exact(a: &MPoly, b: &MPoly) -> MPoly {
    div_ordinary(a, b).expect("exact division in subresultant sequence")
}

/// Monic gcd of ordinary polynomials (primitive PRS, recursive in the variables).
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MPoly::one();
    }
    if let (Some((ea, _)), Some((eb, _))) = (a.as_monomial(), b.as_monomial()) {
        let e: Exps = std::array::from_fn(|i| ea[i].min(eb[i]));
        return MPoly::term(e, Q::one());
    }
    let mut best: Option<(i32, Var)> = None;
    for v in Var::ALL {
        let (ia, ib) = (a.involves(v), b.involves(v));
        if ia && !ib {
            return gcd(&content(a, v), b);
        }
        if ib && !ia {
            return gcd(a, &content(b, v));
        }
        if ia && ib {
            let d = degree(a, v).min(degree(b, v));
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, v));
            }
        }
    }
    let (_, v) = best.expect("non-constant polynomials share a variable");
    let g = gcd(&content(a, v), &content(b, v));
    let (mut x, mut y) = (primitive_part(a, v), primitive_part(b, v));
    if degree(&x, v) < degree(&y, v) {
        std::mem::swap(&mut x, &mut y);
    }
    let (mut lead, mut h) = (MPoly::one(), MPoly::one());
    loop {
        let delta = (degree(&x, v) - degree(&y, v)) as u32;
        let r = prem(&x, &y, v);
        if r.is_zero() {
            return monic(&(&g * &primitive_part(&y, v)));
        }
        if degree(&r, v) == 0 {
            return monic(&g);
        }
        x = y;
        y = exact(&r, &(&lead * &h.pow(delta)));
        lead = x.coeff_of(v, degree(&x, v));
        h = if delta == 0 {
            h
        } else {
            exact(&lead.pow(delta), &h.pow(delta - 1))
        };
    }
}
