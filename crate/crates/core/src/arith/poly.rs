//! Dense univariate polynomials over any [`Scalar`] coefficient field.
//!
//! Coefficients are stored in ascending degree; the representation is
//! normalized so the last stored coefficient is nonzero (empty for zero).

use std::fmt;

use super::linalg::Matrix;
use super::{Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct UniPoly<T: Scalar> {
    zero: T,
    coeffs: Vec<T>,
}

impl<T: Scalar> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<T: Scalar> UniPoly<T> {
    /// Panics on an empty coefficient vector; use [`UniPoly::from_coeffs`]
    /// when the coefficient parent must be given explicitly.
    pub fn new(coeffs: Vec<T>) -> Self {
        let zero = coeffs.first().expect("UniPoly::new needs at least one coefficient").zero_like();
        Self::from_coeffs(zero, coeffs)
    }

    pub fn from_coeffs(zero: T, coeffs: Vec<T>) -> Self {
        let mut p = Self { zero, coeffs };
        p.normalize();
        p
    }

    pub fn zero(zero: T) -> Self {
        Self { zero, coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x` with coefficients in the parent of `proto`.
    pub fn x(proto: &T) -> Self {
        Self::new(vec![proto.zero_like(), proto.one_like()])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).plus(&rhs.coeff(i))).collect();
        Self::from_coeffs(self.zero.clone(), coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).minus(&rhs.coeff(i))).collect();
        Self::from_coeffs(self.zero.clone(), coeffs)
    }

    pub fn neg(&self) -> Self {
        Self { zero: self.zero.clone(), coeffs: self.coeffs.iter().map(|c| c.negated()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.zero.clone());
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self::from_coeffs(self.zero.clone(), out)
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        Self::from_coeffs(self.zero.clone(), self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(self.zero.one_like());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.zero.clone(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { zero: self.zero.clone(), coeffs }
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(self.zero.clone(), |acc, c| acc.times(x).plus(c))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.times(&c.from_int(i as i64))).collect();
        Self::from_coeffs(self.zero.clone(), coeffs)
    }

    /// Euclidean division; fails when the divisor's leading coefficient is
    /// not invertible.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lead_inv = lead.inverse()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(self.zero.clone()), self.clone()));
        }
        let mut quot = vec![self.zero.clone(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].times(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&c.times(d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(self.zero.clone(), quot), Self::from_coeffs(self.zero.clone(), rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Result<Self> {
        match self.leading() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.mul_scalar(&l.inverse()?)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() && rhs.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·rhs = g`, `g` monic.
    pub fn ext_gcd(&self, rhs: &Self) -> Result<(Self, Self, Self)> {
        if self.is_zero() && rhs.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let one = Self::constant(self.zero.one_like());
        let zero = Self::zero(self.zero.clone());
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.leading().expect("nonzero gcd").inverse()?;
        Ok((r0.mul_scalar(&inv), s0.mul_scalar(&inv), t0.mul_scalar(&inv)))
    }

    /// Yun's square-free decomposition: monic, pairwise coprime, square-free
    /// factors with their multiplicities, by increasing multiplicity. The
    /// product of `factor^multiplicity` equals `self` up to its leading
    /// coefficient.
    pub fn squarefree_decompose(&self) -> Result<Vec<(Self, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic()?;
        let mut out = Vec::new();
        if f.degree() == Some(0) {
            return Ok(out);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.exact_div(&a0)?;
        let c = df.exact_div(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() != Some(0) {
            let a = b.gcd(&d)?;
            let nb = b.exact_div(&a)?;
            let nc = d.exact_div(&a)?;
            d = nc.sub(&nb.derivative());
            b = nb;
            if a.degree() != Some(0) {
                out.push((a, i));
            }
            i += 1;
        }
        Ok(out)
    }

    /// Whether `gcd(self, self')` is constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(true);
        }
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }

    /// Determinant of the Sylvester matrix. Zero iff the two polynomials
    /// share a root over an algebraic closure.
    pub fn resultant(&self, rhs: &Self) -> Result<T> {
        let (m, n) = match (self.degree(), rhs.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Err(Error::ZeroPolynomial),
        };
        if m == 0 && n == 0 {
            return Ok(self.zero.one_like());
        }
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![self.zero.clone(); size];
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![self.zero.clone(); size];
            for (j, c) in rhs.coeffs.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        Matrix::from_rows(rows).determinant()
    }

    /// Applies a coefficient map, e.g. an embedding of fields.
    pub fn map<U: Scalar>(&self, zero: U, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly::from_coeffs(zero, self.coeffs.iter().map(f).collect())
    }
}

impl UniPoly<Rational> {
    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Self {
        let zero = Rational::from_integer(0.into());
        let mut acc = Self::zero(zero.clone());
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis = Self::constant(yi.clone());
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    let lin = Self::new(vec![-xj.clone(), zero.one_like()]);
                    basis = basis.mul(&lin).mul_scalar(&(xi - xj).recip());
                }
            }
            acc = acc.add(&basis);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(c: &[i64]) -> UniPoly<Rational> {
        UniPoly::from_coeffs(rat(0), c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 0, 1])).unwrap(), p(&[1]));
        // (x-1)^2 (x+3) and (x-1)(x+3)^2
        let a = p(&[-1, 1]).pow(2).mul(&p(&[3, 1]));
        let b = p(&[-1, 1]).mul(&p(&[3, 1]).pow(2));
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, p(&[-1, 1]).mul(&p(&[3, 1])));
        assert!(a.div_rem(&g).unwrap().1.is_zero());
        assert!(b.div_rem(&g).unwrap().1.is_zero());
        assert_eq!(p(&[0]).gcd(&p(&[0])), Err(Error::GcdOfZeros));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(p(&[-1, 0, 1]).squarefree_decompose().unwrap(), vec![(p(&[-1, 0, 1]), 1)]);
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(f.squarefree_decompose().unwrap(), vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        assert_eq!(p(&[0, 0, 0, 5]).squarefree_decompose().unwrap(), vec![(p(&[0, 1]), 3)]);
        assert_eq!(p(&[]).squarefree_decompose(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(num_traits::Signed::abs(&p(&[-1, 1]).resultant(&p(&[-2, 1])).unwrap()), rat(1));
        assert_eq!(p(&[-1, 0, 1]).resultant(&p(&[-1, 1])).unwrap(), rat(0));
        // product over roots (±i - r) for r = ±√2: (i²-2)(... ) = 9
        assert_eq!(p(&[1, 0, 1]).resultant(&p(&[-2, 0, 1])).unwrap(), rat(9));
    }

    #[test]
    fn ext_gcd_identity() {
        let a = p(&[1, 2, 0, 1]);
        let b = p(&[-3, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g, p(&[1]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, -1, 0, 2]);
        let xs: Vec<Rational> = (0..4).map(rat).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), f);
    }
}
