//! Truncated Laurent series in a uniformizer `q` with explicit absolute
//! precision and a twist exponent.
//!
//! A series stores the coefficients of `q^v, q^(v+1), …, q^(N-1)` and is known
//! up to `O(q^N)`. The twist `n` records that the series carries `dq^n`
//! (`n > 0`) or `(d/dq)^(-n)` (`n < 0`), so products of differentials and
//! vector fields keep track of which bundle they are sections of.

use std::fmt;

use crate::arith::{AlgebraElement, FieldElement, Matrix, Rational, Scalar, UniPoly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Series<T: Scalar> {
    zero: T,
    /// Exponent of `coeffs[0]`; equals `abs_prec` when no coefficient is known
    /// to be nonzero.
    start: i64,
    coeffs: Vec<T>,
    abs_prec: i64,
    twist: i32,
}

/// Valuation and precision of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionReport {
    /// `None` when the series is zero to its precision.
    pub valuation: Option<i64>,
    pub abs_prec: i64,
    pub rel_prec: Option<i64>,
}

impl<T: Scalar> fmt::Debug for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(q^{}: {:?} + O(q^{}), twist {})", self.start, self.coeffs, self.abs_prec, self.twist)
    }
}

impl<T: Scalar> Series<T> {
    /// `Σ coeffs[i] q^(start+i) + O(q^(start + coeffs.len()))`.
    pub fn new(zero: T, start: i64, coeffs: Vec<T>, twist: i32) -> Self {
        let abs_prec = start + coeffs.len() as i64;
        let mut s = Self { zero, start, coeffs, abs_prec, twist };
        s.normalize();
        s
    }

    /// Like [`Series::new`] with an explicit precision; coefficients at or
    /// beyond `abs_prec` are dropped and missing ones are zero.
    pub fn with_precision(zero: T, start: i64, mut coeffs: Vec<T>, abs_prec: i64, twist: i32) -> Self {
        let len = (abs_prec - start).max(0) as usize;
        coeffs.resize(len, zero.clone());
        let start = start.min(abs_prec);
        Self::new(zero, start, coeffs, twist)
    }

    /// `O(q^abs_prec)`.
    pub fn zero(zero: T, abs_prec: i64, twist: i32) -> Self {
        Self { zero, start: abs_prec, coeffs: Vec::new(), abs_prec, twist }
    }

    /// The constant `c + O(q^abs_prec)`.
    pub fn constant(c: T, abs_prec: i64) -> Self {
        let zero = c.zero_like();
        Self::with_precision(zero, 0, vec![c], abs_prec, 0)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    pub fn twist(&self) -> i32 {
        self.twist
    }

    pub fn with_twist(mut self, twist: i32) -> Self {
        self.twist = twist;
        self
    }

    pub fn abs_prec(&self) -> i64 {
        self.abs_prec
    }

    /// Exponent of the first stored coefficient.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Stored coefficients from `q^start()` on.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient, `None` if the series is zero to
    /// its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation, or the precision when nothing nonzero is known.
    fn val_or_prec(&self) -> i64 {
        self.start
    }

    pub fn report(&self) -> PrecisionReport {
        let valuation = self.valuation();
        PrecisionReport { valuation, abs_prec: self.abs_prec, rel_prec: valuation.map(|v| self.abs_prec - v) }
    }

    /// Coefficient of `q^k`; panics if `k` is not below the precision.
    pub fn coeff(&self, k: i64) -> T {
        assert!(k < self.abs_prec, "coefficient q^{k} beyond precision {}", self.abs_prec);
        if k < self.start {
            self.zero.clone()
        } else {
            self.coeffs[(k - self.start) as usize].clone()
        }
    }

    /// Leading coefficient, if any.
    pub fn leading(&self) -> Option<&T> {
        self.coeffs.first()
    }

    /// Lowers the precision to `min(abs_prec, n)`.
    pub fn truncate(&self, n: i64) -> Self {
        if n >= self.abs_prec {
            return self.clone();
        }
        let keep = (n - self.start).max(0) as usize;
        let mut s = Self {
            zero: self.zero.clone(),
            start: self.start.min(n),
            coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
            abs_prec: n,
            twist: self.twist,
        };
        s.normalize();
        s
    }

    fn combine(&self, rhs: &Self, op: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.twist != rhs.twist {
            return Err(Error::TwistMismatch(self.twist, rhs.twist));
        }
        let abs = self.abs_prec.min(rhs.abs_prec);
        let start = self.start.min(rhs.start).min(abs);
        let coeffs = (start..abs).map(|k| op(&self.coeff(k), &rhs.coeff(k))).collect();
        Ok(Self::with_precision(self.zero.clone(), start, coeffs, abs, self.twist))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, |a, b| a.plus(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, |a, b| a.minus(b))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(self.zero.clone(), |c| c.negated())
    }

    /// Product; twists add and the precision is
    /// `min(a.abs + val(b), b.abs + val(a))`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let twist = self.twist + rhs.twist;
        let abs = (self.abs_prec + rhs.val_or_prec()).min(rhs.abs_prec + self.val_or_prec());
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero(self.zero.clone(), abs, twist);
        }
        let start = self.start + rhs.start;
        let n = (abs - start).max(0) as usize;
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let coeffs = (0..n)
            .map(|k| {
                let lo = k.saturating_sub(b.len() - 1);
                let hi = k.min(a.len() - 1);
                let terms: Vec<(&T, &T)> = (lo..=hi).map(|i| (&a[i], &b[k - i])).collect();
                T::dot(&terms).unwrap_or_else(|| self.zero.clone())
            })
            .collect();
        Self::with_precision(self.zero.clone(), start, coeffs, abs, twist)
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        self.map_coeffs(self.zero.clone(), |x| x.times(c))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(self.zero.clone(), |x| x.scale(r))
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { start: self.start + k, abs_prec: self.abs_prec + k, ..self.clone() }
    }

    /// Multiplicative inverse; the twist negates and the relative precision
    /// is preserved.
    pub fn invert(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::PrecisionExhausted("inverting a series that is zero to precision".into()))?;
        let rel = (self.abs_prec - v) as usize;
        let a = &self.coeffs;
        let inv0 = a[0].inverse().map_err(|e| match e {
            Error::DivisionByZero => Error::NonUnitLeadingCoefficient,
            other => other,
        })?;
        let mut b: Vec<T> = Vec::with_capacity(rel);
        b.push(inv0.clone());
        for n in 1..rel {
            let terms: Vec<(&T, &T)> = (1..=n.min(a.len() - 1)).map(|i| (&a[i], &b[n - i])).collect();
            let s = T::dot(&terms).unwrap_or_else(|| self.zero.clone());
            b.push(s.times(&inv0).negated());
        }
        Ok(Self::new(self.zero.clone(), -v, b, -self.twist))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.invert()?))
    }

    /// `self^e`; the zeroth power is `1` to the relative precision of `self`.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            let rel = self.report().rel_prec.unwrap_or(0);
            return Self::constant(self.zero.one_like(), rel).with_twist(0);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Adds `c` to the coefficient of `q^0` (exactly; no precision change).
    pub fn add_constant(&self, c: &T) -> Self {
        if self.abs_prec <= 0 || c.is_zero() {
            return self.clone();
        }
        let start = self.start.min(0);
        let mut coeffs: Vec<T> = (start..self.abs_prec).map(|k| self.coeff(k)).collect();
        coeffs[(-start) as usize] = coeffs[(-start) as usize].plus(c);
        Self::with_precision(self.zero.clone(), start, coeffs, self.abs_prec, self.twist)
    }

    /// `d/dq` of a function; the result carries one `dq`.
    pub fn derivative(&self) -> Result<Self> {
        if self.twist != 0 {
            return Err(Error::TwistedSeries(self.twist));
        }
        let abs = self.abs_prec - 1;
        let start = self.start - 1;
        let coeffs: Vec<T> =
            self.coeffs.iter().enumerate().map(|(i, c)| c.from_int(self.start + i as i64).times(c)).collect();
        Ok(Self::with_precision(self.zero.clone(), start, coeffs, abs, 1))
    }

    pub fn map_coeffs<U: Scalar>(&self, zero: U, f: impl Fn(&T) -> U) -> Series<U> {
        Series::with_precision(zero, self.start, self.coeffs.iter().map(f).collect(), self.abs_prec, self.twist)
    }

    /// Whether the section this series represents is exactly zero: a section
    /// of a bundle of degree `degree_bound` vanishing to order greater than
    /// `degree_bound / field_degree` is zero. Requires
    /// `abs_prec · field_degree > degree_bound`.
    pub fn is_zero_as_section(&self, degree_bound: i64, field_degree: usize) -> Result<bool> {
        let available = self.abs_prec * field_degree as i64;
        if available <= degree_bound {
            return Err(Error::InsufficientPrecision { needed: degree_bound + 1, available });
        }
        Ok(self.coeffs.is_empty())
    }

    /// `p(self)` for a polynomial with coefficients of the same kind, by
    /// Horner's rule.
    pub fn compose_poly(&self, p: &UniPoly<T>) -> Self {
        let c = p.coeffs();
        match c.len() {
            0 => Self::zero(self.zero.clone(), self.abs_prec, 0),
            1 => Self::constant(c[0].clone(), self.abs_prec),
            n => {
                let mut acc = self.mul_scalar(&c[n - 1]).add_constant(&c[n - 2]);
                for k in (0..n - 2).rev() {
                    acc = acc.mul(self).add_constant(&c[k]);
                }
                acc
            }
        }
    }

    /// Square root with prescribed constant term `root`, by Newton iteration
    /// `s ← (s + c/s)/2` doubling the precision each round. Requires an
    /// untwisted series of valuation 0.
    pub fn sqrt_with_root(&self, root: &T) -> Result<Self> {
        if self.twist != 0 {
            return Err(Error::TwistedSeries(self.twist));
        }
        if self.valuation() != Some(0) || root.times(root) != self.coeffs[0] {
            return Err(Error::BadInitialRoot);
        }
        let target = self.abs_prec;
        let half = Rational::new(1.into(), 2.into());
        let mut s = Self::constant(root.clone(), 1);
        let mut prec = 1;
        while prec < target {
            prec = (2 * prec).min(target);
            let s_ext = Self::with_precision(self.zero.clone(), 0, s.coeffs.clone(), prec, 0);
            let c = self.truncate(prec);
            s = s_ext.add(&c.div(&s_ext)?)?.scale(&half);
        }
        Ok(s)
    }
}

/// `Σ c_i · s_i`, all series sharing one twist.
pub fn linear_combination<T: Scalar>(coeffs: &[T], series: &[Series<T>]) -> Result<Series<T>> {
    let first = series.first().ok_or_else(|| Error::DimensionMismatch("empty combination".into()))?;
    let abs = series.iter().map(Series::abs_prec).min().unwrap_or(0);
    let mut acc = Series::zero(first.zero.clone(), abs, first.twist);
    for (c, s) in coeffs.iter().zip(series) {
        if !c.is_zero() {
            acc = acc.add(&s.mul_scalar(c))?;
        }
    }
    Ok(acc)
}

/// Row-reduces `rows` so that the valuations strictly increase. Returns the
/// new rows and the matrix `m` with `new = m · rows`.
pub fn valuation_staircase<T: Scalar>(rows: &[Series<T>]) -> Result<(Vec<Series<T>>, Matrix<T>)> {
    let n = rows.len();
    let first = rows.first().ok_or_else(|| Error::DimensionMismatch("no series".into()))?;
    let zero = first.zero.clone();
    let one = zero.one_like();
    let abs = rows.iter().map(Series::abs_prec).min().unwrap_or(0);
    let lo = rows.iter().map(Series::start).min().unwrap_or(abs).min(abs);
    let width = (abs - lo) as usize;
    let mut coeffs: Vec<Vec<T>> = rows.iter().map(|s| (lo..abs).map(|k| s.coeff(k)).collect()).collect();
    let mut change: Vec<Vec<T>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect();
    let mut done = 0;
    for col in 0..width {
        let Some(p) = (done..n).find(|&r| !coeffs[r][col].is_zero()) else { continue };
        coeffs.swap(done, p);
        change.swap(done, p);
        let pivot_inv = coeffs[done][col].inverse()?;
        for r in done + 1..n {
            if coeffs[r][col].is_zero() {
                continue;
            }
            let factor = coeffs[r][col].times(&pivot_inv);
            for k in col..width {
                let v = coeffs[r][k].minus(&factor.times(&coeffs[done][k]));
                coeffs[r][k] = v;
            }
            for k in 0..n {
                let v = change[r][k].minus(&factor.times(&change[done][k]));
                change[r][k] = v;
            }
        }
        done += 1;
        if done == n {
            break;
        }
    }
    if done < n {
        // independent differentials vanish to order at most 2g - 2
        return Err(if width + 1 >= 2 * n {
            Error::RankDeficient
        } else {
            Error::PrecisionExhausted("rows agree to the available precision".into())
        });
    }
    let ordered = change.iter().map(|c| linear_combination(c, rows)).collect::<Result<Vec<_>>>()?;
    Ok((ordered, Matrix::from_rows_with(zero, change)))
}

impl Series<AlgebraElement> {
    /// Power-basis components over the base field, one series per
    /// coordinate of the algebra.
    pub fn project_coefficients(&self) -> Vec<Series<FieldElement>> {
        let alg = self.zero.algebra().clone();
        let zero = FieldElement::zero(alg.base());
        (0..alg.rank()).map(|j| self.map_coeffs(zero.clone(), |c| c.coords()[j].clone())).collect()
    }

    /// Coefficientwise trace down to the base field.
    pub fn trace_to_base(&self) -> Series<FieldElement> {
        let zero = FieldElement::zero(self.zero.algebra().base());
        self.map_coeffs(zero, |c| c.trace_to_base())
    }
}
