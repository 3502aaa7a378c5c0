//! Number fields `ℚ[θ]/(m)` given by a monic square-free polynomial, and
//! their elements in the power basis of `θ`.
//!
//! Elements are stored as integer numerators over one positive common
//! denominator, kept in lowest terms. Products are formed over the integers
//! and normalized once, which is much cheaper than normalizing every
//! rational coordinate separately.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::UniPoly;
use super::{common_denominator, Rational, Scalar};
use crate::error::{Error, Result};

/// `ℚ[θ]/(min_poly)`. Irreducibility is the caller's obligation; a reducible
/// polynomial surfaces later as [`Error::ReducibleExtension`] when a zero
/// divisor is inverted.
#[derive(Debug)]
pub struct NumberField {
    min_poly: Vec<Rational>,
    /// `θ^(n+k) = (Σ_j red_num[k][j] θ^j) / red_den` for `k in 0..n-1`.
    red_num: Vec<Vec<BigInt>>,
    red_den: BigInt,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

impl Eq for NumberField {}

impl NumberField {
    pub fn new(min_poly: Vec<Rational>) -> Result<Arc<Self>> {
        if min_poly.len() < 2 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        if !One::is_one(min_poly.last().unwrap()) {
            return Err(Error::InvalidField("defining polynomial must be monic".into()));
        }
        let p = UniPoly::new(min_poly.clone());
        if p.degree() > Some(1) && p.gcd(&p.derivative())?.degree() != Some(0) {
            return Err(Error::InvalidField("defining polynomial is not square-free".into()));
        }
        let n = min_poly.len() - 1;
        let mut reduction: Vec<Vec<Rational>> = Vec::with_capacity(n.saturating_sub(1));
        // θ^n = -(c_0 + ... + c_{n-1} θ^{n-1})
        let mut cur: Vec<Rational> = min_poly[..n].iter().map(|c| -c).collect();
        for _ in 0..n.saturating_sub(1) {
            reduction.push(cur.clone());
            let top = cur[n - 1].clone();
            let mut next = vec![Rational::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !Zero::is_zero(&top) {
                for i in 0..n {
                    next[i] = &next[i] - &top * &min_poly[i];
                }
            }
            cur = next;
        }
        let red_den = common_denominator(reduction.iter().flatten());
        let scale = Rational::from_integer(red_den.clone());
        let red_num = reduction.iter().map(|row| row.iter().map(|r| (r * &scale).to_integer()).collect()).collect();
        Ok(Arc::new(Self { min_poly, red_num, red_den }))
    }

    /// The field ℚ, encoded by the polynomial `x`.
    pub fn rationals() -> Arc<Self> {
        Self::new(vec![Rational::zero(), Rational::one()]).expect("x is a valid field")
    }

    /// `ℚ[θ]/(θ² - d)`.
    pub fn quadratic(d: &Rational) -> Result<Arc<Self>> {
        Self::new(vec![-d.clone(), Rational::zero(), Rational::one()])
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[Rational] {
        &self.min_poly
    }

    pub fn min_poly_uni(&self) -> UniPoly<Rational> {
        UniPoly::new(self.min_poly.clone())
    }

    /// Reduces an integer coefficient vector of any length modulo the
    /// defining polynomial. Returns numerators of length `n` and the factor
    /// by which the denominator must be multiplied.
    fn reduce_int(&self, mut prod: Vec<BigInt>) -> (Vec<BigInt>, BigInt) {
        let n = self.degree();
        if prod.len() <= n {
            prod.resize(n, BigInt::zero());
            return (prod, BigInt::one());
        }
        if prod.len() > 2 * n - 1 {
            let coeffs: Vec<Rational> = prod.into_iter().map(Rational::from_integer).collect();
            let (_, r) = UniPoly::new(coeffs).div_rem(&self.min_poly_uni()).expect("monic divisor");
            let mut c = r.into_coeffs();
            c.resize(n, Rational::zero());
            let l = common_denominator(&c);
            let scale = Rational::from_integer(l.clone());
            return (c.iter().map(|x| (x * &scale).to_integer()).collect(), l);
        }
        let high = prod.split_off(n);
        let mut out = prod;
        let integral = self.red_den.is_one();
        if !integral {
            for o in out.iter_mut() {
                *o *= &self.red_den;
            }
        }
        for (k, c) in high.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.red_num[k]) {
                if !r.is_zero() {
                    *o += c * r;
                }
            }
        }
        (out, self.red_den.clone())
    }
}

/// An element `Σ coords[i] θ^i` of a [`NumberField`].
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num
            && self.den == other.den
            && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn normalize(num: &mut [BigInt], den: &mut BigInt) {
    if den.is_negative() {
        *den = -&*den;
        for x in num.iter_mut() {
            *x = -&*x;
        }
    }
    if num.iter().all(|x| x.is_zero()) {
        *den = BigInt::one();
        return;
    }
    if den.is_one() {
        return;
    }
    let mut g = den.clone();
    for x in num.iter() {
        if g.is_one() {
            return;
        }
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if !g.is_one() {
        for x in num.iter_mut() {
            *x /= &g;
        }
        *den /= &g;
    }
}

impl FieldElement {
    /// Builds an element from power-basis coordinates, reducing if more than
    /// `degree` coordinates are supplied.
    pub fn new(field: &Arc<NumberField>, coords: Vec<Rational>) -> Self {
        let den = common_denominator(&coords);
        let scale = Rational::from_integer(den.clone());
        let num: Vec<BigInt> = coords.iter().map(|c| (c * &scale).to_integer()).collect();
        Self::from_integers(field, num, den)
    }

    /// The element `(Σ num[i] θ^i) / den`, with `num` of any length.
    pub fn from_integers(field: &Arc<NumberField>, num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut num, factor) = field.reduce_int(num);
        let mut den = den * factor;
        normalize(&mut num, &mut den);
        Self { field: field.clone(), num, den }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self { field: field.clone(), num: vec![BigInt::zero(); field.degree()], den: BigInt::one() }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational_in(field, &Rational::one())
    }

    pub fn from_rational_in(field: &Arc<NumberField>, r: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = r.numer().clone();
        Self { field: field.clone(), num, den: r.denom().clone() }
    }

    /// The generator θ.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_integers(field, vec![BigInt::zero(), BigInt::one()], BigInt::one())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.num.iter().map(|x| Rational::new(x.clone(), self.den.clone())).collect()
    }

    pub fn coord(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Whether the element lies in ℚ; returns it.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(self.coord(0))
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> UniPoly<Rational> {
        UniPoly::new(self.coords())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    /// Trace of multiplication by `self` on the ℚ-vector space of the field.
    pub fn trace(&self) -> Rational {
        let n = self.field.degree();
        let mut t = Rational::zero();
        let mut basis = FieldElement::one(&self.field);
        let theta = FieldElement::generator(&self.field);
        for j in 0..n {
            t += self.times(&basis).coord(j);
            basis = basis.times(&theta);
        }
        t
    }

    /// Norm, the determinant of multiplication by `self`.
    pub fn norm(&self) -> Rational {
        let n = self.field.degree();
        let mut rows = Vec::with_capacity(n);
        let mut basis = FieldElement::one(&self.field);
        let theta = FieldElement::generator(&self.field);
        for _ in 0..n {
            rows.push(self.times(&basis).coords());
            basis = basis.times(&theta);
        }
        super::linalg::Matrix::from_rows(rows).determinant().expect("rational pivots are invertible")
    }

    fn combine(&self, rhs: &Self, sign: bool) -> Self {
        let (mut num, mut den);
        if self.den == rhs.den {
            den = self.den.clone();
            num = self.num.iter().zip(&rhs.num).map(|(a, b)| if sign { a - b } else { a + b }).collect::<Vec<_>>();
        } else {
            den = &self.den * &rhs.den;
            num = self
                .num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &rhs.den, b * &self.den);
                    if sign {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
        }
        normalize(&mut num, &mut den);
        Self { field: self.field.clone(), num, den }
    }
}

/// Accumulates unreduced integer products `Σ a_i b_i` over a running common
/// denominator.
fn accumulate(acc: &mut [BigInt], acc_den: &mut BigInt, a: &FieldElement, b: &FieldElement) {
    let d = &a.den * &b.den;
    let mut factor = None;
    if &d != acc_den {
        let l = acc_den.lcm(&d);
        let up = &l / &*acc_den;
        if !up.is_one() {
            for x in acc.iter_mut() {
                *x *= &up;
            }
        }
        let f = &l / &d;
        *acc_den = l;
        if !f.is_one() {
            factor = Some(f);
        }
    }
    for (i, x) in a.num.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let x = match &factor {
            Some(f) => x * f,
            None => x.clone(),
        };
        for (j, y) in b.num.iter().enumerate() {
            if !y.is_zero() {
                acc[i + j] += &x * y;
            }
        }
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }
    fn plus(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.combine(rhs, false)
    }
    fn minus(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        self.combine(rhs, true)
    }
    fn times(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return self.zero_like();
        }
        let n = self.num.len();
        let mut acc = vec![BigInt::zero(); 2 * n - 1];
        let mut den = BigInt::one();
        accumulate(&mut acc, &mut den, self, rhs);
        Self::from_integers(&self.field, acc, den)
    }
    fn negated(&self) -> Self {
        Self { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
    /// Inverse through the extended Euclidean algorithm against the defining
    /// polynomial; a nontrivial gcd means the field is not a field.
    fn inverse(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        if self.num.len() == 1 {
            return Ok(Self::from_rational_in(&self.field, &self.coord(0).recip()));
        }
        let (g, s, _) = self.as_poly().ext_gcd(&self.field.min_poly_uni())?;
        if g.degree() != Some(0) {
            return Err(Error::ReducibleExtension);
        }
        let c = g.coeffs()[0].recip();
        Ok(Self::new(&self.field, s.coeffs().iter().map(|x| x * &c).collect()))
    }
    fn from_rational(&self, r: &Rational) -> Self {
        Self::from_rational_in(&self.field, r)
    }
    fn scale(&self, r: &Rational) -> Self {
        if Zero::is_zero(r) {
            return self.zero_like();
        }
        let mut num: Vec<BigInt> = self.num.iter().map(|c| c * r.numer()).collect();
        let mut den = &self.den * r.denom();
        normalize(&mut num, &mut den);
        Self { field: self.field.clone(), num, den }
    }
    fn dot(terms: &[(&Self, &Self)]) -> Option<Self> {
        let (first, _) = terms.first()?;
        let n = first.num.len();
        let mut acc = vec![BigInt::zero(); 2 * n - 1];
        let mut den = BigInt::one();
        for (a, b) in terms {
            if !a.is_zero() && !b.is_zero() {
                accumulate(&mut acc, &mut den, a, b);
            }
        }
        Some(Self::from_integers(&first.field, acc, den))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.plus(rhs)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> FieldElement {
        self.minus(rhs)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.times(rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.negated()
    }
}
