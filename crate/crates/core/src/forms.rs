//! Homogeneous forms with rational coefficients.
//!
//! Monomials are ordered graded-lexicographically with `x₁ > x₂ > … > x_g`;
//! within a fixed degree this is the lexicographic order on exponent vectors,
//! largest first.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{self, primitive_integer_vector, rat, Matrix, Rational};
use crate::error::{Error, Result};
use crate::series::Series;

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousForm {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponents, Rational>,
}

impl fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                    .collect();
                format!("({c}){}", if mono.is_empty() { String::new() } else { format!("*{}", mono.join("*")) })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All exponent vectors of degree `d` in `n` variables, largest first.
pub fn monomials(n: usize, d: u32) -> Vec<Exponents> {
    fn rec(n: usize, d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() == n - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Series of every degree-`d` monomial in `vars`, in [`monomials`] order.
pub fn monomial_series<T: arith::Scalar>(vars: &[Series<T>], d: u32) -> Vec<Series<T>> {
    let n = vars.len();
    if d == 0 {
        return vec![vars[0].pow(0)];
    }
    let mut layer: BTreeMap<Exponents, Series<T>> = BTreeMap::new();
    for (e, v) in monomials(n, 1).into_iter().zip(vars) {
        layer.insert(e, v.clone());
    }
    for deg in 2..=d {
        let mut next = BTreeMap::new();
        for e in monomials(n, deg) {
            // divide off the last variable that occurs
            let i = (0..n).rev().find(|&i| e[i] > 0).expect("positive degree");
            let mut prev = e.clone();
            prev[i] -= 1;
            next.insert(e, layer[&prev].mul(&vars[i]));
        }
        layer = next;
    }
    monomials(n, d).into_iter().map(|e| layer.remove(&e).expect("all monomials built")).collect()
}

impl HomogeneousForm {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self { nvars, degree, terms: BTreeMap::new() }
    }

    /// Builds a form from `(exponents, coefficient)` pairs; all exponent
    /// vectors must have length `nvars` and sum to `degree`.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let mut f = Self::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars || e.iter().sum::<u32>() != degree {
                return Err(Error::InvalidInput(format!(
                    "exponent vector {e:?} does not fit degree {degree} in {nvars} variables"
                )));
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    /// The form `Σ coeffs[i] · monomials(nvars, degree)[i]`.
    pub fn from_coeff_vector(nvars: usize, degree: u32, coeffs: &[Rational]) -> Self {
        let mut f = Self::zero(nvars, degree);
        for (e, c) in monomials(nvars, degree).into_iter().zip(coeffs) {
            f.add_term(e, c.clone());
        }
        f
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, 1, [(e, Rational::one())]).expect("valid monomial")
    }

    /// Coefficients in [`monomials`] order.
    pub fn coeff_vector(&self) -> Vec<Rational> {
        monomials(self.nvars, self.degree).iter().map(|e| self.coeff(e)).collect()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms, largest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.nvars, self.degree), (rhs.nvars, rhs.degree), "adding forms of different shape");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        Self { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(), ..self.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.degree + rhs.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::from_terms(self.nvars, 0, [(vec![0; self.nvars], Rational::one())]).expect("unit");
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * rat(i64::from(e[i])));
            }
        }
        out
    }

    /// Value at a point with coordinates in any coefficient field.
    pub fn eval<T: arith::Scalar>(&self, point: &[T]) -> T {
        let zero = point[0].zero_like();
        let mut acc = zero.clone();
        for (e, c) in &self.terms {
            let mut m = point[0].from_rational(c);
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m = m.times(x);
                }
            }
            acc = acc.plus(&m);
        }
        acc
    }

    /// Evaluation on series; the precision follows the series product rules.
    pub fn eval_series<T: arith::Scalar>(&self, vars: &[Series<T>]) -> Series<T> {
        let monos = monomial_series(vars, self.degree);
        let mut acc: Option<Series<T>> = None;
        for (e, s) in monomials(self.nvars, self.degree).iter().zip(monos) {
            let c = self.coeff(e);
            let term = s.scale(&c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term).expect("monomials share a twist"),
            });
        }
        acc.expect("at least one monomial")
    }

    /// `self(Σ_j m[0][j] x_j, …, Σ_j m[n-1][j] x_j)`: variable `i` is replaced
    /// by row `i` of the matrix read as a linear form.
    pub fn substitute_linear(&self, m: &Matrix<Rational>) -> Self {
        let n = self.nvars;
        let lin: Vec<Self> = (0..n)
            .map(|i| {
                let terms = (0..m.ncols()).map(|j| {
                    let mut e = vec![0; m.ncols()];
                    e[j] = 1;
                    (e, m[(i, j)].clone())
                });
                Self::from_terms(m.ncols(), 1, terms).expect("linear form")
            })
            .collect();
        let mut out = Self::zero(m.ncols(), self.degree);
        for (e, c) in &self.terms {
            let mut t = Self::from_terms(m.ncols(), 0, [(vec![0; m.ncols()], c.clone())]).expect("constant");
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&lin[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Scalar multiple with coprime integer coefficients whose largest
    /// monomial has a positive coefficient.
    pub fn primitive(&self) -> Self {
        let coeffs: Vec<Rational> = self.terms.values().rev().cloned().collect();
        let ints = primitive_integer_vector(&coeffs);
        let terms = self.terms.keys().rev().cloned().zip(ints.into_iter().map(Rational::from_integer)).collect();
        Self { terms, ..self.clone() }
    }

    /// Gram matrix `G` of a quadratic form, `Q(x) = xᵀ G x`.
    pub fn gram(&self) -> Matrix<Rational> {
        assert_eq!(self.degree, 2, "Gram matrix of a non-quadratic form");
        let n = self.nvars;
        let half = Rational::new(1.into(), 2.into());
        let mut g = Matrix::zeros(n, n, Rational::zero());
        for (e, c) in &self.terms {
            let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            if idx.len() == 1 {
                g[(idx[0], idx[0])] = c.clone();
            } else {
                g[(idx[0], idx[1])] = c * &half;
                g[(idx[1], idx[0])] = c * &half;
            }
        }
        g
    }

    pub fn from_gram(g: &Matrix<Rational>) -> Self {
        let n = g.nrows();
        let mut f = Self::zero(n, 2);
        for i in 0..n {
            for j in i..n {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                let c = if i == j { g[(i, i)].clone() } else { &g[(i, j)] * rat(2) };
                f.add_term(e, c);
            }
        }
        f
    }

    /// Whether the quadratic form is nondegenerate.
    pub fn is_smooth_quadric(&self) -> bool {
        self.degree == 2 && !self.gram().determinant().expect("rational").is_zero()
    }

    /// Remainder on division by a quadratic form `q` that has a nonzero
    /// `x_i²` coefficient: the unique representative of `self mod q` of
    /// degree at most one in `x_i`.
    pub fn reduce_mod_quadric_in(&self, q: &HomogeneousForm, i: usize) -> Result<Self> {
        let mut sq = vec![0; q.nvars];
        sq[i] = 2;
        let lead = q.coeff(&sq);
        if lead.is_zero() {
            return Err(Error::Internal("pivot variable does not occur squared".into()));
        }
        // x_i² ≡ x_i² - q/lead
        let tail = Self::from_terms(q.nvars, 2, [(sq.clone(), Rational::one())])?.sub(&q.scale(&lead.recip()));
        let mut out = Self::zero(self.nvars, self.degree);
        let mut work: Vec<(Exponents, Rational)> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        while let Some((e, c)) = work.pop() {
            if e[i] < 2 {
                out.add_term(e, c);
                continue;
            }
            let mut rest = e.clone();
            rest[i] -= 2;
            for (te, tc) in &tail.terms {
                let ne: Exponents = rest.iter().zip(te).map(|(a, b)| a + b).collect();
                work.push((ne, &c * tc));
            }
        }
        Ok(out)
    }

    /// Whether `self` lies in the ideal generated by the smooth quadric `q`.
    pub fn divisible_by_quadric(&self, q: &HomogeneousForm) -> Result<bool> {
        let (qt, t) = with_square_term(q)?;
        let ft = match &t {
            Some(t) => self.substitute_linear(t),
            None => self.clone(),
        };
        let i = square_variable(&qt).expect("quadric has a square term");
        Ok(ft.reduce_mod_quadric_in(&qt, i)?.is_zero())
    }

    /// A representative of `self mod q`, in the original coordinates.
    pub fn reduce_mod_quadric(&self, q: &HomogeneousForm) -> Result<Self> {
        match square_variable(q) {
            Some(i) => self.reduce_mod_quadric_in(q, i),
            None => {
                let (qt, t) = with_square_term(q)?;
                let t = t.expect("a change of variables was needed");
                let back = t.inverse()?;
                let i = square_variable(&qt).expect("quadric has a square term");
                Ok(self.substitute_linear(&t).reduce_mod_quadric_in(&qt, i)?.substitute_linear(&back))
            }
        }
    }
}

fn square_variable(q: &HomogeneousForm) -> Option<usize> {
    (0..q.nvars).find(|&i| {
        let mut e = vec![0; q.nvars];
        e[i] = 2;
        !q.coeff(&e).is_zero()
    })
}

/// `q` itself if it has a square term, else `q∘T` with `T: x_0 → x_0 + x_1`
/// (which creates one for any nonzero quadratic form without square terms
/// involving `x_0 x_1`) or a similar shear.
fn with_square_term(q: &HomogeneousForm) -> Result<(HomogeneousForm, Option<Matrix<Rational>>)> {
    if square_variable(q).is_some() {
        return Ok((q.clone(), None));
    }
    let n = q.nvars;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut t = Matrix::identity(n, &Rational::zero());
            t[(i, j)] = Rational::one();
            let qt = q.substitute_linear(&t);
            if square_variable(&qt).is_some() {
                return Ok((qt, Some(t)));
            }
        }
    }
    Err(Error::SingularConic)
}

/// Sign of the first nonzero entry, used when normalizing kernels.
pub fn leading_sign(v: &[Rational]) -> i32 {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -1,
        Some(_) => 1,
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn form(n: usize, d: u32, t: &[(&[u32], i64)]) -> HomogeneousForm {
        HomogeneousForm::from_terms(n, d, t.iter().map(|(e, c)| (e.to_vec(), rat(*c)))).unwrap()
    }

    #[test]
    fn monomial_order() {
        let m = monomials(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[1], vec![1, 1, 0]);
        assert_eq!(m[2], vec![1, 0, 1]);
        assert_eq!(m[3], vec![0, 2, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
        assert_eq!(monomials(2, 1), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn reduction_mod_sum_of_squares() {
        let q = form(3, 2, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        assert!(q.mul(&form(3, 2, &[(&[1, 1, 0], 3), (&[0, 0, 2], -1)])).divisible_by_quadric(&q).unwrap());
        assert!(!form(3, 2, &[(&[2, 0, 0], 1)]).divisible_by_quadric(&q).unwrap());
        // a² ≡ -b² - c²
        let r = form(3, 2, &[(&[2, 0, 0], 1)]).reduce_mod_quadric(&q).unwrap();
        assert_eq!(r, form(3, 2, &[(&[0, 2, 0], -1), (&[0, 0, 2], -1)]));
    }

    #[test]
    fn reduction_without_square_terms() {
        let q = form(3, 2, &[(&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]);
        let f = form(3, 1, &[(&[1, 0, 0], 2), (&[0, 0, 1], -5)]);
        assert!(q.mul(&f).divisible_by_quadric(&q).unwrap());
        let g = form(3, 3, &[(&[3, 0, 0], 1)]);
        let r = g.reduce_mod_quadric(&q).unwrap();
        assert!(g.sub(&r).divisible_by_quadric(&q).unwrap());
        assert!(!r.divisible_by_quadric(&q).unwrap());
    }

    #[test]
    fn gram_round_trip() {
        let q = form(3, 2, &[(&[1, 1, 0], 1), (&[0, 1, 1], 3), (&[2, 0, 0], -2)]);
        assert_eq!(HomogeneousForm::from_gram(&q.gram()), q);
        assert!(form(3, 2, &[(&[0, 2, 0], 1), (&[1, 0, 1], -1)]).is_smooth_quadric());
        assert!(!form(3, 2, &[(&[2, 0, 0], 1)]).is_smooth_quadric());
    }

    #[test]
    fn linear_substitution() {
        // x1 x2 under x1 → x1 + x2, x2 → x1 - x2 gives x1² - x2²
        let f = form(2, 2, &[(&[1, 1], 1)]);
        let m = Matrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]]);
        assert_eq!(f.substitute_linear(&m), form(2, 2, &[(&[2, 0], 1), (&[0, 2], -1)]));
    }

    #[test]
    fn primitive_normalization() {
        let f = HomogeneousForm::from_terms(
            2,
            1,
            [(vec![1, 0], Rational::new((-2).into(), 3.into())), (vec![0, 1], rat(4))],
        )
        .unwrap();
        assert_eq!(f.primitive(), form(2, 1, &[(&[1, 0], 1), (&[0, 1], -6)]));
    }
}
