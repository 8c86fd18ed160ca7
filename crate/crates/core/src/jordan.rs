//! Hermitian 3x3 and 2x2 matrices over the Cayley numbers.
//!
//! A rank-3 element is stored as
//!
//! ```text
//! [ a   x   y ]
//! [ x'  b   z ]
//! [ y'  z'  c ]      (primes denote conjugates)
//! ```

use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{q, qf, Q};
use crate::octonion::{random_order_element, IntegralOrder, Octonion};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanElement {
    #[serde(with = "crate::arith::serde_q_array")]
    pub diag: [Q; 3],
    /// `[x, y, z]` = entries (1,2), (1,3), (2,3).
    pub off: [Octonion; 3],
}

/// Number of integral coordinates of a rank-3 element.
pub const JORDAN_DIM: usize = 27;

impl JordanElement {
    pub fn new(diag: [Q; 3], off: [Octonion; 3]) -> Self {
        JordanElement { diag, off }
    }

    pub fn zero() -> Self {
        Self::diagonal([Q::zero(), Q::zero(), Q::zero()])
    }

    pub fn identity() -> Self {
        Self::diagonal([Q::one(), Q::one(), Q::one()])
    }

    pub fn diagonal(diag: [Q; 3]) -> Self {
        JordanElement {
            diag,
            off: std::array::from_fn(|_| Octonion::zero()),
        }
    }

    pub fn diag_ints(a: i64, b: i64, c: i64) -> Self {
        Self::diagonal([q(a), q(b), q(c)])
    }

    pub fn x(&self) -> &Octonion {
        &self.off[0]
    }
    pub fn y(&self) -> &Octonion {
        &self.off[1]
    }
    pub fn z(&self) -> &Octonion {
        &self.off[2]
    }

    pub fn scale(&self, s: &Q) -> Self {
        JordanElement {
            diag: std::array::from_fn(|i| &self.diag[i] * s),
            off: std::array::from_fn(|i| self.off[i].scale(s)),
        }
    }

    pub fn det3(&self) -> Q {
        let [a, b, c] = &self.diag;
        let [x, y, z] = &self.off;
        a * b * c - a * z.norm() - b * y.norm() - c * x.norm() + (&(x * z) * &y.conj()).trace()
    }

    pub fn trace3(&self) -> Q {
        &self.diag[0] + &self.diag[1] + &self.diag[2]
    }

    /// Trace pairing `sum a_i a'_i + sum Tr(x_ij conj(x'_ij))`.
    pub fn pair(&self, other: &JordanElement) -> Q {
        let d = (0..3).fold(Q::zero(), |acc, i| acc + &self.diag[i] * &other.diag[i]);
        (0..3).fold(d, |acc, i| acc + self.off[i].trace_pair(&other.off[i]))
    }

    /// Quadratic adjoint, `X## = det(X) X`.
    pub fn sharp(&self) -> Self {
        let [a, b, c] = &self.diag;
        let [x, y, z] = &self.off;
        JordanElement {
            diag: [b * c - z.norm(), a * c - y.norm(), a * b - x.norm()],
            off: [
                &x.scale(&-c) + &(y * &z.conj()),
                &y.scale(&-b) + &(x * z),
                &z.scale(&-a) + &(&x.conj() * y),
            ],
        }
    }

    /// Freudenthal cross product `X x Y = ((X+Y)# - X# - Y#) / 2`.
    pub fn cross(&self, other: &JordanElement) -> Self {
        let s = &(&(self + other).sharp() - &self.sharp()) - &other.sharp();
        s.scale(&qf(1, 2))
    }

    pub fn is_integral(&self) -> bool {
        let o = IntegralOrder::get();
        self.diag.iter().all(|d| d.denom().is_one()) && self.off.iter().all(|x| o.contains(x))
    }

    /// Nested-minor test: `a > 0`, `ab - N(x) > 0`, `det > 0`.
    pub fn is_positive(&self) -> bool {
        let [a, b, _] = &self.diag;
        a.is_positive() && (a * b - self.x().norm()).is_positive() && self.det3().is_positive()
    }

    /// Coordinates in the integral basis: `a, b, c`, then `x, y, z` in `o`-coordinates.
    pub fn to_lattice_coords(&self) -> [Q; JORDAN_DIM] {
        let o = IntegralOrder::get();
        let mut v: [Q; JORDAN_DIM] = std::array::from_fn(|_| Q::zero());
        v[..3].clone_from_slice(&self.diag);
        for (k, x) in self.off.iter().enumerate() {
            v[3 + 8 * k..11 + 8 * k].clone_from_slice(&o.to_order_coords(x));
        }
        v
    }

    pub fn from_lattice_coords(v: &[Q]) -> Self {
        assert_eq!(v.len(), JORDAN_DIM);
        let o = IntegralOrder::get();
        JordanElement {
            diag: std::array::from_fn(|i| v[i].clone()),
            off: std::array::from_fn(|k| {
                o.from_order_coords(&std::array::from_fn(|i| v[3 + 8 * k + i].clone()))
            }),
        }
    }
}

impl Add for &JordanElement {
    type Output = JordanElement;
    fn add(self, rhs: &JordanElement) -> JordanElement {
        JordanElement {
            diag: std::array::from_fn(|i| &self.diag[i] + &rhs.diag[i]),
            off: std::array::from_fn(|i| &self.off[i] + &rhs.off[i]),
        }
    }
}

impl Sub for &JordanElement {
    type Output = JordanElement;
    fn sub(self, rhs: &JordanElement) -> JordanElement {
        JordanElement {
            diag: std::array::from_fn(|i| &self.diag[i] - &rhs.diag[i]),
            off: std::array::from_fn(|i| &self.off[i] - &rhs.off[i]),
        }
    }
}

impl Neg for &JordanElement {
    type Output = JordanElement;
    fn neg(self) -> JordanElement {
        self.scale(&q(-1))
    }
}

pub fn det3(x: &JordanElement) -> Q {
    x.det3()
}

pub fn trace3(x: &JordanElement) -> Q {
    x.trace3()
}

pub fn pair(x: &JordanElement, y: &JordanElement) -> Q {
    x.pair(y)
}

pub fn sharp(x: &JordanElement) -> JordanElement {
    x.sharp()
}

pub fn cross(x: &JordanElement, y: &JordanElement) -> JordanElement {
    x.cross(y)
}

/// `[[a, x], [conj(x), d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jordan2Element {
    #[serde(with = "crate::arith::serde_q")]
    pub a: Q,
    #[serde(with = "crate::arith::serde_q")]
    pub d: Q,
    pub x: Octonion,
}

impl Jordan2Element {
    pub fn new(a: Q, d: Q, x: Octonion) -> Self {
        Jordan2Element { a, d, x }
    }

    pub fn diagonal(a: Q, d: Q) -> Self {
        Jordan2Element::new(a, d, Octonion::zero())
    }

    pub fn det2(&self) -> Q {
        &self.a * &self.d - self.x.norm()
    }

    pub fn trace2(&self) -> Q {
        &self.a + &self.d
    }

    pub fn adj2(&self) -> Self {
        Jordan2Element::new(self.d.clone(), self.a.clone(), -&self.x)
    }

    /// `a N(w1) + d N(w2) + Tr(conj(w1) x w2)`.
    pub fn bracket(&self, w1: &Octonion, w2: &Octonion) -> Q {
        &self.a * w1.norm() + &self.d * w2.norm() + (&w1.conj() * &(&self.x * w2)).trace()
    }

    pub fn is_integral(&self) -> bool {
        self.a.denom().is_one() && self.d.denom().is_one() && IntegralOrder::get().contains(&self.x)
    }

    /// The rank-3 element with this block in the upper left, `w` as last column
    /// and `corner` in position (3,3).
    pub fn border(&self, w1: &Octonion, w2: &Octonion, corner: Q) -> JordanElement {
        JordanElement::new(
            [self.a.clone(), self.d.clone(), corner],
            [self.x.clone(), w1.clone(), w2.clone()],
        )
    }
}

/// Integral element with entries drawn from `[-r, r]` (coordinates in `o` for the off-diagonal part).
pub fn random_integral_jordan<R: Rng>(rng: &mut R, r: i64) -> JordanElement {
    let diag = [0; 3].map(|_| q(rng.gen_range(-r..=r)));
    let off = [0; 3].map(|_| random_order_element(rng, r));
    JordanElement::new(diag, off)
}

pub fn random_integral_jordan2<R: Rng>(rng: &mut R, r: i64) -> Jordan2Element {
    let a = q(rng.gen_range(-r..=r));
    let d = q(rng.gen_range(-r..=r));
    Jordan2Element::new(a, d, random_order_element(rng, r))
}

pub fn det2(z: &Jordan2Element) -> Q {
    z.det2()
}

pub fn trace2(z: &Jordan2Element) -> Q {
    z.trace2()
}

pub fn adj2(z: &Jordan2Element) -> Jordan2Element {
    z.adj2()
}

pub fn z1_bracket(z: &Jordan2Element, w: (&Octonion, &Octonion)) -> Q {
    z.bracket(w.0, w.1)
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn order_elt(r: i64) -> impl Strategy<Value = Octonion> {
        prop::array::uniform8(-r..=r).prop_map(|v| IntegralOrder::get().from_order_ints(&v))
    }

    pub fn integral_jordan(r: i64) -> impl Strategy<Value = JordanElement> {
        (
            prop::array::uniform3(-r..=r),
            order_elt(r),
            order_elt(r),
            order_elt(r),
        )
            .prop_map(|(d, x, y, z)| JordanElement::new(d.map(q), [x, y, z]))
    }

    pub fn integral_jordan2(r: i64) -> impl Strategy<Value = Jordan2Element> {
        (-r..=r, -r..=r, order_elt(r)).prop_map(|(a, d, x)| Jordan2Element::new(q(a), q(d), x))
    }
}
