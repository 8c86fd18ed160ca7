//! The 56-dimensional Freudenthal module `W = J + Q + J + Q` with its quartic
//! and symplectic forms, and rational linear maps on it.
//!
//! Integral coordinates: 27 of `X`, then `xi`, then 27 of `X'`, then `xi'`
//! (see [`JordanElement::to_lattice_coords`]).

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_q, q, qpow, Q};
use crate::error::{Error, Result};
use crate::jordan::{JordanElement, JORDAN_DIM};
use crate::linalg::QMatrix;

pub const W_DIM: usize = 2 * JORDAN_DIM + 2;
const XI: usize = JORDAN_DIM;
const XP: usize = JORDAN_DIM + 1;
const XIP: usize = 2 * JORDAN_DIM + 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreudenthalVector {
    pub x: JordanElement,
    #[serde(with = "crate::arith::serde_q")]
    pub xi: Q,
    pub xp: JordanElement,
    #[serde(with = "crate::arith::serde_q")]
    pub xip: Q,
}

impl FreudenthalVector {
    pub fn new(x: JordanElement, xi: Q, xp: JordanElement, xip: Q) -> Self {
        FreudenthalVector { x, xi, xp, xip }
    }

    pub fn zero() -> Self {
        Self::new(JordanElement::zero(), Q::zero(), JordanElement::zero(), Q::zero())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.x.scale(s), &self.xi * s, self.xp.scale(s), &self.xip * s)
    }

    pub fn coords(&self) -> Vec<Q> {
        let mut v = Vec::with_capacity(W_DIM);
        v.extend(self.x.to_lattice_coords());
        v.push(self.xi.clone());
        v.extend(self.xp.to_lattice_coords());
        v.push(self.xip.clone());
        v
    }

    pub fn from_coords(v: &[Q]) -> Self {
        assert_eq!(v.len(), W_DIM);
        Self::new(
            JordanElement::from_lattice_coords(&v[..XI]),
            v[XI].clone(),
            JordanElement::from_lattice_coords(&v[XP..XIP]),
            v[XIP].clone(),
        )
    }

    pub fn basis(k: usize) -> Self {
        let mut v = vec![Q::zero(); W_DIM];
        v[k] = Q::one();
        Self::from_coords(&v)
    }

    pub fn is_integral(&self) -> bool {
        self.coords().iter().all(|c| c.denom().is_one())
    }
}

/// `(X#, X'#) - xi det X - xi' det X' - ((X, X') - xi xi')^2 / 4`.
pub fn quartic(w: &FreudenthalVector) -> Q {
    let t = w.x.pair(&w.xp) - &w.xi * &w.xip;
    w.x.sharp().pair(&w.xp.sharp()) - &w.xi * w.x.det3() - &w.xip * w.xp.det3() - &t * &t / q(4)
}

pub fn symplectic(w1: &FreudenthalVector, w2: &FreudenthalVector) -> Q {
    w1.x.pair(&w2.xp) - w2.x.pair(&w1.xp) + &w1.xi * &w2.xip - &w2.xi * &w1.xip
}

/// Gram matrix of the symplectic form on the integral basis.
pub fn symplectic_gram() -> QMatrix {
    let basis: Vec<FreudenthalVector> = (0..W_DIM).map(FreudenthalVector::basis).collect();
    let mut g = QMatrix::zeros(W_DIM, W_DIM);
    for i in 0..W_DIM {
        for j in 0..W_DIM {
            g[(i, j)] = symplectic(&basis[i], &basis[j]);
        }
    }
    g
}

/// A rational linear map on `W` with its similitude factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similitude56 {
    pub matrix: QMatrix,
    pub mu: Q,
}

impl Similitude56 {
    pub fn identity() -> Self {
        Similitude56 {
            matrix: QMatrix::identity(W_DIM),
            mu: Q::one(),
        }
    }

    pub fn apply(&self, w: &FreudenthalVector) -> FreudenthalVector {
        FreudenthalVector::from_coords(&self.matrix.mul_vec(&w.coords()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similitude56) -> Self {
        Similitude56 {
            matrix: self.matrix.mul(&other.matrix),
            mu: &self.mu * &other.mu,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Similitude56 {
            matrix: self.matrix.inverse()?,
            mu: self.mu.recip(),
        })
    }
}

/// Matrix of a linear map given by its action on vectors.
fn matrix_of<F>(f: F) -> QMatrix
where
    F: Fn(&FreudenthalVector) -> FreudenthalVector + Sync,
{
    let cols: Vec<Vec<Q>> = (0..W_DIM)
        .into_par_iter()
        .map(|k| f(&FreudenthalVector::basis(k)).coords())
        .collect();
    QMatrix::from_columns(cols)
}

pub fn h0_action(a: &Q, w: &FreudenthalVector) -> FreudenthalVector {
    FreudenthalVector::new(w.x.scale(a), &w.xi / a, w.xp.clone(), &w.xip * a * a)
}

/// `(X, xi, X', xi') -> (aX, xi/a, X', a^2 xi')`.
pub fn h0(a: &Q) -> Result<Similitude56> {
    if a.is_zero() {
        return Err(Error::Precondition("h0 needs a nonzero scalar".into()));
    }
    Ok(Similitude56 {
        matrix: matrix_of(|w| h0_action(a, w)),
        mu: a.clone(),
    })
}

pub fn iota_action(w: &FreudenthalVector) -> FreudenthalVector {
    FreudenthalVector::new(-&w.xp, -&w.xip, w.x.clone(), w.xi.clone())
}

/// `(X, xi, X', xi') -> (-X', -xi', X, xi)`.
pub fn iota() -> Similitude56 {
    Similitude56 {
        matrix: matrix_of(iota_action),
        mu: Q::one(),
    }
}

/// `h0(N^2) ∘ iota`.
pub fn iota_n(n: u64) -> Result<Similitude56> {
    if n == 0 {
        return Err(Error::Precondition("level must be positive".into()));
    }
    Ok(h0(&q(n as i64 * n as i64))?.compose(&iota()))
}

/// Action of the level-`n` element attached to `(a, b)` with `ab ≡ -1 (mod n)`.
pub fn gamma_action(a: i64, b: i64, n: i64, w: &FreudenthalVector) -> FreudenthalVector {
    let (a, b, n) = (q(a), q(b), q(n));
    let one = JordanElement::identity();
    let (x, xi, xp, xip) = (&w.x, &w.xi, &w.xp, &w.xip);
    let (trx, trxp) = (x.trace3(), xp.trace3());
    let n2 = &n * &n;
    let n3 = &n2 * &n;

    let inner = &n3 * xi - &b * &n2 * &trxp + &b * &b * &n * &trx - qpow(&b, 3) * xip;
    let y1 = &(&xp.scale(&n) - &one.cross(x).scale(&(q(2) * &b))) + &one.scale(&(&b * &b * xip / &n));

    let x1 = &(&(&x.scale(&n.recip()) - &one.scale(&(&b * xip / &n2)))
        - &one.cross(&y1).scale(&(q(2) * &a / &n)))
        + &one.scale(&(&a * &a / &n2 * &inner));
    let xp1 = &y1 - &one.scale(&(&a / &n * &inner));
    let xip1 = xip / &n3 - &a / &n2 * &trx + q(3) * &a * &b * xip / &n3 + &a * &a / &n2 * one.pair(&y1)
        - qpow(&a, 3) / &n3 * &inner;
    FreudenthalVector::new(x1, inner, xp1, xip1)
}

/// The closed form of the last component when `1 + ab = lambda n`.
pub fn gamma_last_closed(a: i64, b: i64, n: i64, w: &FreudenthalVector) -> Q {
    let (a, n, s) = (q(a), q(n), q(1 + a * b));
    -qpow(&a, 3) * &w.xi + &w.xip / qpow(&n, 3) * qpow(&s, 3) - &a / (&n * &n) * w.x.trace3() * &s * &s
        + &a * &a / &n * w.xp.trace3() * &s
}

fn check_level(a: i64, b: i64, n: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::Precondition(format!("level {n} must be positive")));
    }
    if a.gcd(&n) != 1 || (a * b + 1).rem_euclid(n) != 0 {
        return Err(Error::Precondition(format!(
            "need gcd(a,N) = 1 and ab = -1 mod N, got a={a}, b={b}, N={n}"
        )));
    }
    Ok(())
}

/// Builds the element column by column and certifies its similitude factor.
pub fn gamma_element(a: i64, b: i64, n: i64) -> Result<Similitude56> {
    check_level(a, b, n)?;
    let matrix = matrix_of(|w| gamma_action(a, b, n, w));
    let mu = certify_similitude(&matrix)?;
    Ok(Similitude56 { matrix, mu })
}

/// Derives `mu` from one symplectic pair, then checks both laws on every
/// basis vector and on 100 seeded random integral vectors.
pub fn certify_similitude(g: &QMatrix) -> Result<Q> {
    if g.rows() != W_DIM || g.cols() != W_DIM {
        return Err(Error::NotSimilitude(format!("shape {}x{}", g.rows(), g.cols())));
    }
    let act = |w: &FreudenthalVector| FreudenthalVector::from_coords(&g.mul_vec(&w.coords()));
    let e_xi = FreudenthalVector::basis(XI);
    let e_xip = FreudenthalVector::basis(XIP);
    let mu = symplectic(&act(&e_xi), &act(&e_xip));

    let j = symplectic_gram();
    let pulled = g.transpose().mul(&j).mul(g);
    if pulled != j.scale(&mu) {
        return Err(Error::NotSimilitude(format!(
            "symplectic form not scaled by mu = {}",
            fmt_q(&mu)
        )));
    }

    let mu2 = &mu * &mu;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0056);
    let mut samples: Vec<FreudenthalVector> = (0..W_DIM).map(FreudenthalVector::basis).collect();
    samples.extend((0..100).map(|_| random_integral_vector(&mut rng, 3)));
    let bad = samples
        .par_iter()
        .position_first(|w| quartic(&act(w)) != &mu2 * quartic(w));
    if let Some(i) = bad {
        return Err(Error::NotSimilitude(format!("quartic law fails on sample {i}")));
    }
    Ok(mu)
}

/// Integral in both directions.
pub fn is_lattice_preserving(g: &Similitude56) -> Result<bool> {
    Ok(g.matrix.is_integral() && g.matrix.inverse()?.is_integral())
}

pub fn random_integral_vector<R: Rng>(rng: &mut R, r: i64) -> FreudenthalVector {
    let v: Vec<Q> = (0..W_DIM).map(|_| q(rng.gen_range(-r..=r))).collect();
    FreudenthalVector::from_coords(&v)
}

/// All `(a, b)` with `0 <= a, b < n`, `gcd(a, n) = 1`, `ab ≡ -1 (mod n)`.
pub fn level_pairs(n: i64) -> Vec<(i64, i64)> {
    (0..n)
        .filter(|a| a.gcd(&n) == 1)
        .map(|a| {
            let b = (0..n).find(|b| (a * b + 1).rem_euclid(n) == 0).expect("a is a unit");
            (a, b)
        })
        .collect()
}
