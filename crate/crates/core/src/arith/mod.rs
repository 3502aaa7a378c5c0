//! Exact arithmetic: rationals, number fields, étale algebras over a number
//! field, dense univariate polynomials and dense linear algebra.
//!
//! Every coefficient type implements [`Scalar`], which is all the generic
//! series, polynomial and matrix code needs. Elements of a number field carry
//! their parent, so a zero or one of the right kind is always obtained from an
//! existing element (`zero_like` / `one_like`).

pub mod etale;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod tower;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use etale::{AlgebraElement, EtaleAlgebra};
pub use field::{FieldElement, NumberField};
pub use linalg::{Matrix, Solution};
pub use poly::UniPoly;
pub use tower::{flatten_tower, TowerEmbedding};

/// Arbitrary-precision rational number, always stored in lowest terms.
pub type Rational = BigRational;

/// Coefficient arithmetic used by the generic containers.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse; fails on zero and on zero divisors.
    fn inverse(&self) -> Result<Self>;
    /// The image of a rational number in the same parent as `self`.
    fn from_rational(&self, r: &Rational) -> Self;
    fn scale(&self, r: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
    fn divide(&self, rhs: &Self) -> Result<Self> {
        Ok(self.times(&rhs.inverse()?))
    }
    /// `Σ a_i b_i`, or `None` for an empty list. Implementations may fuse
    /// the accumulation to avoid intermediate normalization.
    fn dot(terms: &[(&Self, &Self)]) -> Option<Self>
    where
        Self: Sized,
    {
        let (first, _) = terms.first()?;
        Some(terms.iter().fold(first.zero_like(), |acc, (a, b)| acc.plus(&a.times(b))))
    }
    fn from_int(&self, n: i64) -> Self {
        self.from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn from_rational(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"num/den"`, or `"num"` when the denominator is one.
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if Zero::is_zero(&d) {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| num_integer::lcm(acc, r.denom().clone()))
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive. Returns the zero vector unchanged.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let mut ints: Vec<BigInt> = v.iter().map(|r| (r * Rational::from_integer(den.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if content.is_zero() {
        return ints;
    }
    let sign_neg = ints.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false);
    for x in ints.iter_mut() {
        *x = &*x / &content;
        if sign_neg {
            *x = -&*x;
        }
    }
    ints
}

/// Whether `r` is the square of a rational number; returns the root.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Removes square factors of `n` found by trial division with primes below
/// `limit`. Returns `(core, root)` with `n = core * root^2`.
pub fn strip_small_squares(n: &BigInt, limit: u64) -> (BigInt, BigInt) {
    let mut core = n.clone();
    let mut root = BigInt::one();
    let mut p = 2u64;
    while p < limit {
        let pp = BigInt::from(p * p);
        if pp > core.abs() {
            break;
        }
        while (&core % &pp).is_zero() {
            core /= &pp;
            root *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (core, root)
}
