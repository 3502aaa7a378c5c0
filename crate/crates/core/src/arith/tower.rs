//! Rewriting a relative extension `K[y]/(p(y))` as a single number field over ℚ.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::etale::{AlgebraElement, EtaleAlgebra};
use super::field::{FieldElement, NumberField};
use super::linalg::{rank_q, Matrix, Solution};
use super::poly::UniPoly;
use super::{rat, Rational, Scalar};
use crate::error::{Error, Result};

/// Images of the base generator and of the adjoined root in the flattened
/// field.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerEmbedding {
    pub field: Arc<NumberField>,
    pub base_image: FieldElement,
    pub root_image: FieldElement,
}

impl TowerEmbedding {
    /// Image of an element of the base field.
    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for c in x.coords().iter().rev() {
            acc = acc.times(&self.base_image).plus(&FieldElement::from_rational_in(&self.field, c));
        }
        acc
    }
}

fn rational_coords(x: &AlgebraElement) -> Vec<Rational> {
    x.coords().iter().flat_map(|c| c.coords()).collect()
}

/// Builds `K(y)` for `y` a root of `ext` (monic after scaling) as a primitive
/// extension `ℚ(y + kθ)` of ℚ.
///
/// Quadratic extensions are screened for splitting: if the discriminant is a
/// square modulo every tested degree-one prime of `K`, it is taken to be a
/// square in `K` and [`Error::ReducibleExtension`] is returned. Higher-degree
/// reducible extensions are only caught through zero divisors met later.
pub fn flatten_tower(
    base: &Arc<NumberField>,
    ext: &UniPoly<FieldElement>,
) -> Result<(Arc<NumberField>, TowerEmbedding)> {
    let ext = ext.monic()?;
    let m = ext.degree().ok_or(Error::ZeroPolynomial)?;
    if m == 0 {
        return Err(Error::InvalidField("extension polynomial is constant".into()));
    }
    if m > 1 && !ext.is_squarefree()? {
        return Err(Error::InvalidField("extension polynomial is not square-free".into()));
    }
    if m == 2 {
        // y² + b y + c splits iff b² - 4c is a square
        let b = ext.coeff(1);
        let c = ext.coeff(0);
        let disc = b.times(&b).minus(&c.scale(&rat(4)));
        if is_probably_square(&disc)? {
            return Err(Error::ReducibleExtension);
        }
    }
    let alg = EtaleAlgebra::new(base, ext.into_coeffs())?;
    let n = base.degree() * m;
    let theta = AlgebraElement::from_base(&alg, FieldElement::generator(base));
    let y = AlgebraElement::generator(&alg);
    let shifts = (0..40i64).map(|i| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 });
    for k in shifts {
        if k != 0 && base.degree() == 1 {
            break;
        }
        let gamma = y.plus(&theta.scale(&rat(k)));
        let mut powers = vec![gamma.one_like()];
        for _ in 0..n {
            let next = powers.last().unwrap().times(&gamma);
            powers.push(next);
        }
        let cols: Vec<Vec<Rational>> = powers.iter().map(rational_coords).collect();
        let mut rows = vec![Vec::with_capacity(n); n];
        for col in &cols[..n] {
            for (r, v) in rows.iter_mut().zip(col) {
                r.push(v.clone());
            }
        }
        let krylov = Matrix::from_rows(rows);
        if rank_q(&krylov) < n {
            continue;
        }
        let solve = |target: &[Rational]| -> Result<Vec<Rational>> {
            match krylov.solve(target)? {
                Solution::Solved(v) => Ok(v),
                Solution::NoSolution => Err(Error::Internal("Krylov system inconsistent".into())),
            }
        };
        let relation = solve(&cols[n])?;
        let mut min_poly: Vec<Rational> = relation.iter().map(|c| -c).collect();
        min_poly.push(Rational::one());
        let field = NumberField::new(min_poly)?;
        let base_image = FieldElement::new(&field, solve(&rational_coords(&theta))?);
        let root_image = FieldElement::new(&field, solve(&rational_coords(&y))?);
        return Ok((field.clone(), TowerEmbedding { field, base_image, root_image }));
    }
    Err(Error::ReducibleExtension)
}

fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = 101u64;
    while out.len() < count {
        if (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            out.push(p);
        }
        p += 2;
    }
    out
}

fn mod_p(r: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = (r.denom() % &pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let mut num = r.numer() % &pb;
    if num.is_negative() {
        num += &pb;
    }
    let num = num.to_u64()?;
    Some(num * pow_mod(den, p - 2, p) % p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn eval_mod(coeffs: &[u64], a: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, c| (acc * a + c) % p)
}

/// Whether `x` is a square in its field, decided by reduction at degree-one
/// primes: a single nonresidue proves it is not; 48 residues and no
/// nonresidue are accepted as a square.
fn is_probably_square(x: &FieldElement) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    let field = x.field();
    let m = field.min_poly_uni();
    let disc = if field.degree() > 1 { m.resultant(&m.derivative())? } else { Rational::one() };
    let coords = x.coords();
    let mut residues = 0;
    for p in small_primes(400) {
        let Some(dm) = mod_p(&disc, p) else { continue };
        if dm == 0 {
            continue;
        }
        let Some(mp) = m.coeffs().iter().map(|c| mod_p(c, p)).collect::<Option<Vec<u64>>>() else { continue };
        let Some(xp) = coords.iter().map(|c| mod_p(c, p)).collect::<Option<Vec<u64>>>() else { continue };
        for a in 0..p {
            if eval_mod(&mp, a, p) != 0 {
                continue;
            }
            let v = eval_mod(&xp, a, p);
            if v == 0 {
                continue;
            }
            if pow_mod(v, (p - 1) / 2, p) != 1 {
                return Ok(false);
            }
            residues += 1;
            if residues >= 48 {
                return Ok(true);
            }
        }
    }
    // no degree-one prime gave a verdict either way; treat as non-square and
    // let zero divisors surface later if this was wrong
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lift(base: &Arc<NumberField>, c: &[i64]) -> UniPoly<FieldElement> {
        UniPoly::new(c.iter().map(|&v| FieldElement::from_rational_in(base, &rat(v))).collect())
    }

    #[test]
    fn cube_root_then_square_root() {
        let k = NumberField::new(vec![rat(-2), rat(0), rat(0), rat(1)]).unwrap();
        let (f, emb) = flatten_tower(&k, &lift(&k, &[-2, 0, 1])).unwrap();
        assert_eq!(f.degree(), 6);
        assert_eq!(emb.base_image.pow(3).as_rational(), Some(rat(2)));
        assert_eq!(emb.root_image.pow(2).as_rational(), Some(rat(2)));
    }

    #[test]
    fn over_rationals() {
        let q = NumberField::rationals();
        let (f, emb) = flatten_tower(&q, &lift(&q, &[-2, 0, 1])).unwrap();
        assert_eq!(f.min_poly(), &[rat(-2), rat(0), rat(1)]);
        assert_eq!(emb.root_image.pow(2).as_rational(), Some(rat(2)));
    }

    #[test]
    fn split_quadratic_is_rejected() {
        let k = NumberField::quadratic(&rat(2)).unwrap();
        assert_eq!(flatten_tower(&k, &lift(&k, &[-2, 0, 1])), Err(Error::ReducibleExtension));
        assert_eq!(flatten_tower(&k, &lift(&k, &[-8, 0, 1])).map(|_| ()), Err(Error::ReducibleExtension));
        // ℚ(√2, √3) has degree 4
        let (f, _) = flatten_tower(&k, &lift(&k, &[-3, 0, 1])).unwrap();
        assert_eq!(f.degree(), 4);
    }
}
