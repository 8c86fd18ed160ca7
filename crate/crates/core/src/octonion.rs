//! Cayley numbers over the rationals and the maximal order `o`.
//!
//! Basis `{1, e1, .., e7}` with `e_i^2 = -1` and, for every oriented line
//! `(i, j, k)` of the Fano plane below, `e_i e_j = e_k = -e_j e_i` (and its
//! cyclic shifts). The lines are `e_i e_{i+1} = e_{i+3}`, indices mod 7:
//!
//! ```text
//! (1,2,4) (2,3,5) (3,4,6) (4,5,7) (5,6,1) (6,7,2) (7,1,3)
//! ```

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_q, q, qf, Q};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

pub const FANO_LINES: [(usize, usize, usize); 7] = [
    (1, 2, 4),
    (2, 3, 5),
    (3, 4, 6),
    (4, 5, 7),
    (5, 6, 1),
    (6, 7, 2),
    (7, 1, 3),
];

/// `TABLE[i][j] = (sign, k)` with `e_i e_j = sign * e_k`.
pub const TABLE: [[(i8, u8); 8]; 8] = build_table();

const fn build_table() -> [[(i8, u8); 8]; 8] {
    let mut t = [[(0i8, 0u8); 8]; 8];
    let mut i = 0;
    while i < 8 {
        t[0][i] = (1, i as u8);
        t[i][0] = (1, i as u8);
        if i > 0 {
            t[i][i] = (-1, 0);
        }
        i += 1;
    }
    let mut l = 0;
    while l < 7 {
        let (a, b, c) = FANO_LINES[l];
        let rot = [(a, b, c), (b, c, a), (c, a, b)];
        let mut r = 0;
        while r < 3 {
            let (x, y, z) = rot[r];
            t[x][y] = (1, z as u8);
            t[y][x] = (-1, z as u8);
            r += 1;
        }
        l += 1;
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Octonion {
    #[serde(with = "crate::arith::serde_q_array")]
    pub coords: [Q; 8],
}

impl Octonion {
    pub fn new(coords: [Q; 8]) -> Self {
        Octonion { coords }
    }

    pub fn zero() -> Self {
        Octonion::new(std::array::from_fn(|_| Q::zero()))
    }

    pub fn one() -> Self {
        Self::scalar(Q::one())
    }

    pub fn scalar(s: Q) -> Self {
        let mut x = Self::zero();
        x.coords[0] = s;
        x
    }

    /// The basis unit `e_i` (`e_0 = 1`).
    pub fn unit(i: usize) -> Self {
        let mut x = Self::zero();
        x.coords[i] = Q::one();
        x
    }

    pub fn from_ints(v: [i64; 8]) -> Self {
        Octonion::new(v.map(q))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn real(&self) -> &Q {
        &self.coords[0]
    }

    pub fn conj(&self) -> Self {
        let mut c = self.coords.clone();
        for x in c.iter_mut().skip(1) {
            *x = -x.clone();
        }
        Octonion::new(c)
    }

    pub fn trace(&self) -> Q {
        &self.coords[0] * q(2)
    }

    pub fn norm(&self) -> Q {
        self.coords.iter().fold(Q::zero(), |acc, x| acc + x * x)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Octonion::new(std::array::from_fn(|i| &self.coords[i] * s))
    }

    /// Bilinear trace form `Tr(x conj(y)) = 2 <x, y>`.
    pub fn trace_pair(&self, other: &Octonion) -> Q {
        let dot = self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b);
        dot * q(2)
    }
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, rhs: &Octonion) -> Octonion {
        Octonion::new(std::array::from_fn(|i| &self.coords[i] + &rhs.coords[i]))
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, rhs: &Octonion) -> Octonion {
        Octonion::new(std::array::from_fn(|i| &self.coords[i] - &rhs.coords[i]))
    }
}

impl Neg for &Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion::new(std::array::from_fn(|i| -&self.coords[i]))
    }
}

impl Mul for &Octonion {
    type Output = Octonion;
    fn mul(self, rhs: &Octonion) -> Octonion {
        let mut out = Octonion::zero();
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (s, k) = TABLE[i][j];
                let prod = a * b;
                if s > 0 {
                    out.coords[k as usize] += prod;
                } else {
                    out.coords[k as usize] -= prod;
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Octonion {
            type Output = Octonion;
            fn $m(self, rhs: Octonion) -> Octonion {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        -&self
    }
}

pub fn oct_mul(x: &Octonion, y: &Octonion) -> Octonion {
    x * y
}

pub fn oct_conj(x: &Octonion) -> Octonion {
    x.conj()
}

pub fn oct_trace(x: &Octonion) -> Q {
    x.trace()
}

pub fn oct_norm(x: &Octonion) -> Q {
    x.norm()
}

/// Halving sets `{0} ∪ L` whose half-sums generate `o` together with `Z^8`.
pub const HALVING_LINES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 7],
    [1, 5, 6],
    [2, 4, 5],
    [2, 6, 7],
    [3, 4, 6],
    [3, 5, 7],
];

/// Doubled standard coordinates of the chosen Z-basis `b_0..b_7` of `o`.
const BASIS2: [[i64; 8]; 8] = [
    [2, 0, 0, 0, 0, 0, 0, 0],
    [0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 2, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0],
    [1, 0, 1, 0, 1, 1, 0, 0],
    [0, 1, 1, 0, 1, 0, 1, 0],
    [1, 1, 0, 0, 1, 0, 0, 1],
];

/// The maximal order `o` with a fixed Z-basis.
#[derive(Clone, Debug)]
pub struct IntegralOrder {
    /// Columns are the standard coordinates of `b_0..b_7`.
    pub basis_matrix: QMatrix,
    basis_inverse: QMatrix,
    /// `gram[(i,j)] = <b_i, b_j>`, so `N(sum v_i b_i) = gram[v]`.
    pub gram: QMatrix,
    /// `2 * gram` as machine integers.
    pub gram2: [[i64; 8]; 8],
    basis: [Octonion; 8],
}

impl IntegralOrder {
    pub fn get() -> &'static IntegralOrder {
        static ORDER: OnceLock<IntegralOrder> = OnceLock::new();
        ORDER.get_or_init(IntegralOrder::build)
    }

    fn build() -> Self {
        let basis: [Octonion; 8] =
            std::array::from_fn(|i| Octonion::new(BASIS2[i].map(|c| qf(c, 2))));
        let basis_matrix =
            QMatrix::from_columns(basis.iter().map(|b| b.coords.to_vec()).collect());
        let basis_inverse = basis_matrix.inverse().expect("basis of o is invertible");
        let mut gram = QMatrix::zeros(8, 8);
        let mut gram2 = [[0i64; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                let g = basis[i].trace_pair(&basis[j]) / q(2);
                gram2[i][j] = (&g * q(2)).to_integer().to_i64().expect("small");
                gram[(i, j)] = g;
            }
        }
        IntegralOrder {
            basis_matrix,
            basis_inverse,
            gram,
            gram2,
            basis,
        }
    }

    pub fn basis(&self) -> &[Octonion; 8] {
        &self.basis
    }

    /// Coordinates of `x` in the basis of `o`.
    pub fn to_order_coords(&self, x: &Octonion) -> [Q; 8] {
        let v = self.basis_inverse.mul_vec(&x.coords);
        std::array::from_fn(|i| v[i].clone())
    }

    pub fn from_order_coords(&self, v: &[Q; 8]) -> Octonion {
        let c = self.basis_matrix.mul_vec(v);
        Octonion::new(std::array::from_fn(|i| c[i].clone()))
    }

    pub fn from_order_ints(&self, v: &[i64; 8]) -> Octonion {
        self.from_order_coords(&v.map(q))
    }

    pub fn contains(&self, x: &Octonion) -> bool {
        self.to_order_coords(x).iter().all(|c| c.denom().is_one())
    }

    /// `N(sum v_i b_i)` evaluated through the Gram matrix.
    pub fn norm_form(&self, v: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..8 {
            acc += self.gram2[i][i] * v[i] * v[i] / 2;
            for j in 0..i {
                acc += self.gram2[i][j] * v[i] * v[j];
            }
        }
        acc
    }
}

/// Element of `o` with basis coordinates uniform in `[-r, r]`.
pub fn random_order_element<R: Rng>(rng: &mut R, r: i64) -> Octonion {
    let v: [i64; 8] = std::array::from_fn(|_| rng.gen_range(-r..=r));
    IntegralOrder::get().from_order_ints(&v)
}

/// The Gram matrix of the norm form on `o` in the chosen basis.
pub fn gram_matrix() -> QMatrix {
    IntegralOrder::get().gram.clone()
}

/// Reduce `o`-coordinates modulo `p^m`.
pub fn reduce_mod(coords: &[Q; 8], p: u64, m: u32) -> Result<[u64; 8]> {
    let modulus = BigInt::from(p).pow(m);
    let mut out = [0u64; 8];
    for (o, c) in out.iter_mut().zip(coords) {
        if !c.denom().is_one() {
            return Err(Error::NotIntegral(format!("o-coordinate {}", fmt_q(c))));
        }
        *o = c.numer().mod_floor(&modulus).to_u64().expect("fits");
    }
    Ok(out)
}

/// Multiplication table and basis of `o`, for external cross-checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub fano_lines: Vec<[usize; 3]>,
    /// `table[i][j] = [sign, k]` meaning `e_i e_j = sign * e_k`.
    pub table: Vec<Vec<[i64; 2]>>,
    /// Standard coordinates of the basis of `o`.
    pub order_basis: Vec<Octonion>,
    /// Gram matrix of the norm form, entries as fraction strings.
    pub gram: Vec<Vec<String>>,
}

pub fn conventions() -> Conventions {
    let o = IntegralOrder::get();
    Conventions {
        fano_lines: FANO_LINES.iter().map(|&(a, b, c)| [a, b, c]).collect(),
        table: TABLE
            .iter()
            .map(|row| row.iter().map(|&(s, k)| [s as i64, k as i64]).collect())
            .collect(),
        order_basis: o.basis.to_vec(),
        gram: (0..8)
            .map(|i| o.gram.row(i).iter().map(fmt_q).collect())
            .collect(),
    }
}
