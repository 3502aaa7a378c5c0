//! Étale algebras `K[s]/(m(s))` over a number field `K`.
//!
//! The tensor product of a number field with a copy of itself is such an
//! algebra; it need not be a field, and a zero divisor met during inversion is
//! reported so the caller can split the algebra along the factor it reveals.

use std::fmt;
use std::sync::Arc;

use super::field::{FieldElement, NumberField};
use super::poly::UniPoly;
use super::{Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct EtaleAlgebra {
    base: Arc<NumberField>,
    /// Monic modulus, ascending, of length `rank + 1`.
    modulus: Vec<FieldElement>,
    /// `s^(rank+k) mod m` for `k in 0..rank-1`.
    reduction: Vec<Vec<FieldElement>>,
    /// `Tr(s^k)` for `k in 0..rank`.
    power_traces: Vec<FieldElement>,
}

impl PartialEq for EtaleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl EtaleAlgebra {
    /// `K[s]/(modulus)`; the modulus must be monic of positive degree.
    pub fn new(base: &Arc<NumberField>, modulus: Vec<FieldElement>) -> Result<Arc<Self>> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have positive degree".into()));
        }
        if !modulus.last().unwrap().is_one() {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let l = modulus.len() - 1;
        let zero = FieldElement::zero(base);
        let mut reduction = Vec::with_capacity(l.saturating_sub(1));
        let mut cur: Vec<FieldElement> = modulus[..l].iter().map(|c| c.negated()).collect();
        for _ in 0..l.saturating_sub(1) {
            reduction.push(cur.clone());
            let top = cur[l - 1].clone();
            let mut next = vec![zero.clone(); l];
            for i in (1..l).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for i in 0..l {
                    next[i] = next[i].minus(&top.times(&modulus[i]));
                }
            }
            cur = next;
        }
        let mut alg = Self { base: base.clone(), modulus, reduction, power_traces: Vec::new() };
        // Tr(s^k) is the trace of the multiplication matrix of s^k, whose
        // j-th diagonal entry is the j-th coordinate of s^(k+j)
        let mut traces = Vec::with_capacity(l);
        for k in 0..l {
            let mut t = zero.clone();
            for j in 0..l {
                let mut mono = vec![zero.clone(); k + j + 1];
                mono[k + j] = FieldElement::one(base);
                t = t.plus(&alg.reduce(mono)[j]);
            }
            traces.push(t);
        }
        alg.power_traces = traces;
        Ok(Arc::new(alg))
    }

    /// `K ⊗ K` realized as `K[s]/(m(s))` for the defining polynomial `m` of `K`.
    pub fn tensor_square(field: &Arc<NumberField>) -> Result<Arc<Self>> {
        let modulus = field.min_poly().iter().map(|c| FieldElement::from_rational_in(field, c)).collect();
        Self::new(field, modulus)
    }

    pub fn base(&self) -> &Arc<NumberField> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> UniPoly<FieldElement> {
        UniPoly::new(self.modulus.clone())
    }

    fn reduce(&self, mut coeffs: Vec<FieldElement>) -> Vec<FieldElement> {
        let l = self.rank();
        let zero = FieldElement::zero(&self.base);
        if coeffs.len() <= l {
            coeffs.resize(l, zero);
            return coeffs;
        }
        if coeffs.len() > 2 * l - 1 {
            let (_, r) = UniPoly::from_coeffs(zero.clone(), coeffs).div_rem(&self.modulus()).expect("monic modulus");
            let mut c = r.into_coeffs();
            c.resize(l, zero);
            return c;
        }
        let high = coeffs.split_off(l);
        (0..l)
            .map(|j| {
                let mut terms: Vec<(&FieldElement, &FieldElement)> = Vec::with_capacity(high.len());
                for (k, c) in high.iter().enumerate() {
                    terms.push((c, &self.reduction[k][j]));
                }
                FieldElement::dot(&terms).map_or_else(|| coeffs[j].clone(), |t| t.plus(&coeffs[j]))
            })
            .collect()
    }

    /// The factors `(d, m/d)` of the modulus along a monic divisor `d`.
    pub fn split(&self, divisor: &UniPoly<FieldElement>) -> Result<(Arc<Self>, Arc<Self>)> {
        let d = divisor.monic()?;
        let rest = self.modulus().exact_div(&d)?;
        Ok((Self::new(&self.base, d.into_coeffs())?, Self::new(&self.base, rest.into_coeffs())?))
    }
}

/// An element `Σ coords[i] s^i` of an [`EtaleAlgebra`].
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Arc<EtaleAlgebra>,
    coords: Vec<FieldElement>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && (Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg)
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

impl AlgebraElement {
    pub fn new(alg: &Arc<EtaleAlgebra>, coords: Vec<FieldElement>) -> Self {
        Self { alg: alg.clone(), coords: alg.reduce(coords) }
    }

    pub fn zero(alg: &Arc<EtaleAlgebra>) -> Self {
        Self { alg: alg.clone(), coords: vec![FieldElement::zero(&alg.base); alg.rank()] }
    }

    /// The image of `c ∈ K` as `c · 1`.
    pub fn from_base(alg: &Arc<EtaleAlgebra>, c: FieldElement) -> Self {
        Self::new(alg, vec![c])
    }

    /// The image `Σ c_i s^i` of a rational polynomial in the generator.
    pub fn from_rational_poly(alg: &Arc<EtaleAlgebra>, coeffs: &[Rational]) -> Self {
        Self::new(alg, coeffs.iter().map(|c| FieldElement::from_rational_in(&alg.base, c)).collect())
    }

    pub fn generator(alg: &Arc<EtaleAlgebra>) -> Self {
        let base = &alg.base;
        Self::new(alg, vec![FieldElement::zero(base), FieldElement::one(base)])
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn as_poly(&self) -> UniPoly<FieldElement> {
        UniPoly::from_coeffs(FieldElement::zero(&self.alg.base), self.coords.clone())
    }

    /// Trace of multiplication by `self` on the algebra as a free module over
    /// the base field.
    pub fn trace_to_base(&self) -> FieldElement {
        let terms: Vec<(&FieldElement, &FieldElement)> = self.coords.iter().zip(&self.alg.power_traces).collect();
        FieldElement::dot(&terms).expect("rank is positive")
    }

    /// Image in the quotient algebra `target`, whose modulus divides ours.
    pub fn project(&self, target: &Arc<EtaleAlgebra>) -> Self {
        Self::new(target, self.coords.clone())
    }

    /// The gcd of `self` with the modulus when it is a proper divisor, i.e.
    /// when `self` is a nonzero zero divisor.
    pub fn zero_divisor_factor(&self) -> Result<Option<UniPoly<FieldElement>>> {
        if self.is_zero() {
            return Ok(None);
        }
        let g = self.as_poly().gcd(&self.alg.modulus())?;
        Ok(if g.degree() == Some(0) { None } else { Some(g) })
    }
}

impl Scalar for AlgebraElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.alg)
    }
    fn one_like(&self) -> Self {
        Self::from_base(&self.alg, FieldElement::one(&self.alg.base))
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    fn plus(&self, rhs: &Self) -> Self {
        Self { alg: self.alg.clone(), coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.plus(b)).collect() }
    }
    fn minus(&self, rhs: &Self) -> Self {
        Self { alg: self.alg.clone(), coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.minus(b)).collect() }
    }
    fn times(&self, rhs: &Self) -> Self {
        Self::dot(&[(self, rhs)]).expect("one term")
    }
    fn negated(&self) -> Self {
        Self { alg: self.alg.clone(), coords: self.coords.iter().map(|c| c.negated()).collect() }
    }
    /// Fails with [`Error::NonUnitLeadingCoefficient`] on a zero divisor.
    fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.as_poly().ext_gcd(&self.alg.modulus())?;
        if g.degree() != Some(0) {
            return Err(Error::NonUnitLeadingCoefficient);
        }
        let c = g.coeffs()[0].inverse()?;
        Ok(Self::new(&self.alg, s.coeffs().iter().map(|x| x.times(&c)).collect()))
    }
    fn from_rational(&self, r: &Rational) -> Self {
        Self::from_base(&self.alg, FieldElement::from_rational_in(&self.alg.base, r))
    }
    fn scale(&self, r: &Rational) -> Self {
        Self { alg: self.alg.clone(), coords: self.coords.iter().map(|c| c.scale(r)).collect() }
    }
    fn dot(terms: &[(&Self, &Self)]) -> Option<Self> {
        let (first, _) = terms.first()?;
        let l = first.alg.rank();
        let mut buckets: Vec<Vec<(&FieldElement, &FieldElement)>> = vec![Vec::new(); 2 * l - 1];
        for (a, b) in terms {
            for (i, x) in a.coords.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.coords.iter().enumerate() {
                    if !y.is_zero() {
                        buckets[i + j].push((x, y));
                    }
                }
            }
        }
        let zero = FieldElement::zero(&first.alg.base);
        let prod = buckets.iter().map(|t| FieldElement::dot(t).unwrap_or_else(|| zero.clone())).collect();
        Some(Self::new(&first.alg, prod))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn sqrt_two_algebra() -> Arc<EtaleAlgebra> {
        let q = NumberField::rationals();
        let m = [rat(-2), rat(0), rat(1)].iter().map(|c| FieldElement::from_rational_in(&q, c)).collect();
        EtaleAlgebra::new(&q, m).unwrap()
    }

    #[test]
    fn trace_examples() {
        let a = sqrt_two_algebra();
        let s = AlgebraElement::generator(&a);
        assert_eq!(s.one_like().trace_to_base().as_rational(), Some(rat(2)));
        assert_eq!(s.trace_to_base().as_rational(), Some(rat(0)));
        assert_eq!(s.times(&s).trace_to_base().as_rational(), Some(rat(4)));
    }

    #[test]
    fn tensor_square_splits_off_diagonal() {
        // K = ℚ(∛2); θ is a root of m over K, so s - θ is a zero divisor
        let k = NumberField::new(vec![rat(-2), rat(0), rat(0), rat(1)]).unwrap();
        let a = EtaleAlgebra::tensor_square(&k).unwrap();
        assert_eq!(a.rank(), 3);
        let theta = FieldElement::generator(&k);
        let x = AlgebraElement::generator(&a).minus(&AlgebraElement::from_base(&a, theta.clone()));
        assert_eq!(x.inverse(), Err(Error::NonUnitLeadingCoefficient));
        let g = x.zero_divisor_factor().unwrap().unwrap();
        assert_eq!(g.degree(), Some(1));
        let (lin, quad) = a.split(&g).unwrap();
        assert_eq!((lin.rank(), quad.rank()), (1, 2));
        // traces add over the factors
        let y = AlgebraElement::generator(&a).times(&AlgebraElement::generator(&a));
        let total = y.project(&lin).trace_to_base().plus(&y.project(&quad).trace_to_base());
        assert_eq!(total, y.trace_to_base());
        // and s acts as θ on the linear factor
        assert_eq!(AlgebraElement::generator(&a).project(&lin).coords()[0], theta);
    }

    #[test]
    fn inverse_in_field_factor() {
        let a = sqrt_two_algebra();
        let x = AlgebraElement::from_rational_poly(&a, &[rat(1), rat(1)]);
        assert!(x.times(&x.inverse().unwrap()).is_one());
    }
}
