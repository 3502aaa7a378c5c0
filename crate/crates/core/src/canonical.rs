//! The canonical ideal from truncated expansions of regular 1-forms, and the
//! hyperelliptic test on its quadratic part.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::linalg::{kernel_q, rank_q};
use crate::arith::{FieldElement, Matrix, NumberField, Rational};
use crate::error::{Error, Result};
use crate::forms::{monomial_series, monomials, HomogeneousForm};
use crate::json;
use crate::series::Series;

/// `g` expansions of a basis of regular 1-forms at a point with residue field
/// `K`, each known up to `O(q^B) dq`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInput {
    pub genus: usize,
    pub field: Arc<NumberField>,
    pub precision: i64,
    pub forms: Vec<Series<FieldElement>>,
}

impl ProblemInput {
    /// Checks the shape of the data: `g ≥ 2` series of twist one, without
    /// poles, all of precision `B`, and linearly independent over ℚ.
    pub fn new(
        genus: usize,
        field: Arc<NumberField>,
        precision: i64,
        forms: Vec<Series<FieldElement>>,
    ) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidInput("genus must be at least 2".into()));
        }
        if forms.len() != genus {
            return Err(Error::InvalidInput(format!("{} series for genus {genus}", forms.len())));
        }
        for (i, w) in forms.iter().enumerate() {
            if w.twist() != 1 || w.abs_prec() != precision || w.start() < 0 {
                return Err(Error::InvalidInput(format!("series {} is not a 1-form known to O(q^{precision})", i + 1)));
            }
        }
        let input = Self { genus, field, precision, forms };
        if rank_q(&input.monomial_evaluation_matrix(1)) < genus {
            return Err(Error::InconsistentInput("input series are linearly dependent over Q".into()));
        }
        Ok(input)
    }

    pub fn field_degree(&self) -> usize {
        self.field.degree()
    }

    pub fn to_json(&self) -> Value {
        let forms: Vec<Value> = self
            .forms
            .iter()
            .map(|w| Value::Array((0..self.precision).map(|k| json::element(&w.coeff(k))).collect()))
            .collect();
        json!({
            "genus": self.genus,
            "field": {"min_poly": json::field(&self.field)},
            "precision": self.precision,
            "forms": forms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let genus = json::get_i64(v, "genus")?;
        let genus = usize::try_from(genus).map_err(|_| Error::InvalidInput("negative genus".into()))?;
        let field = json::parse_field(json::get(json::get(v, "field")?, "min_poly")?)?;
        let precision = json::get_i64(v, "precision")?;
        let forms =
            json::get(v, "forms")?.as_array().ok_or_else(|| Error::InvalidInput("forms must be a list".into()))?;
        let zero = FieldElement::zero(&field);
        let mut series = Vec::with_capacity(forms.len());
        for f in forms {
            let coeffs = f.as_array().ok_or_else(|| Error::InvalidInput("each form must be a list".into()))?;
            if coeffs.len() as i64 != precision {
                return Err(Error::InvalidInput(format!(
                    "form has {} coefficients, precision is {precision}",
                    coeffs.len()
                )));
            }
            let c = coeffs.iter().map(|x| json::parse_element(&field, x)).collect::<Result<Vec<_>>>()?;
            series.push(Series::new(zero.clone(), 0, c, 1));
        }
        Self::new(genus, field, precision, series)
    }

    /// Rows indexed by (power of `q`, coordinate in `K`), columns by the
    /// degree-`d` monomials in the input series.
    pub fn monomial_evaluation_matrix(&self, d: u32) -> Matrix<Rational> {
        let monos = monomial_series(&self.forms, d);
        series_coordinate_matrix(&monos, 0, self.precision)
    }

    /// Replaces the series by `m · (series)`.
    pub fn scrambled(&self, m: &Matrix<Rational>) -> Result<Self> {
        if m.nrows() != self.genus || m.ncols() != self.genus {
            return Err(Error::DimensionMismatch("scramble matrix must be g x g".into()));
        }
        m.inverse()?;
        let zero = FieldElement::zero(&self.field);
        let forms = (0..self.genus)
            .map(|i| {
                let mut acc = Series::zero(zero.clone(), self.precision, 1);
                for j in 0..self.genus {
                    acc = acc.add(&self.forms[j].scale(&m[(i, j)])).expect("same twist");
                }
                acc
            })
            .collect();
        Ok(Self { forms, ..self.clone() })
    }
}

/// Matrix over ℚ whose column `c` lists the rational coordinates of the
/// coefficients of `q^lo, …, q^(hi-1)` of series `c`.
pub fn series_coordinate_matrix(cols: &[Series<FieldElement>], lo: i64, hi: i64) -> Matrix<Rational> {
    let n = cols.first().map_or(1, |s| s.zero_elem().field().degree());
    let nrows = ((hi - lo).max(0) as usize) * n;
    let mut m = Matrix::zeros(nrows, cols.len(), Rational::from_integer(0.into()));
    for (c, s) in cols.iter().enumerate() {
        for k in lo.max(s.start())..hi.min(s.abs_prec()) {
            let coeff = s.coeff(k);
            for (j, x) in coeff.coords().into_iter().enumerate() {
                m[(((k - lo) as usize) * n + j, c)] = x;
            }
        }
    }
    m
}

/// `I_d` for one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalIdealComponent {
    pub degree: u32,
    pub basis: Vec<HomogeneousForm>,
}

/// Basis of the degree-`d` part of the canonical ideal: the forms vanishing on
/// the input series. Exact when `B·[K:ℚ] > d(2g−2)`.
pub fn canonical_ideal_component(input: &ProblemInput, d: u32) -> Result<CanonicalIdealComponent> {
    let bound = i64::from(d) * (2 * input.genus as i64 - 2);
    let available = input.precision * input.field_degree() as i64;
    if available <= bound {
        return Err(Error::InsufficientPrecision { needed: bound + 1, available });
    }
    let kernel = kernel_q(&input.monomial_evaluation_matrix(d));
    let basis = kernel.iter().map(|v| HomogeneousForm::from_coeff_vector(input.genus, d, v)).collect();
    Ok(CanonicalIdealComponent { degree: d, basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveType {
    Hyperelliptic,
    Nonhyperelliptic,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Decides hyperellipticity from `dim I₂`, which is `C(g−1, 2)` for
/// hyperelliptic curves and `C(g−2, 2)` otherwise. Genus two is always
/// hyperelliptic.
pub fn detect_hyperelliptic(g: usize, dim_i2: usize) -> Result<CurveType> {
    if g == 2 {
        return Ok(CurveType::Hyperelliptic);
    }
    if dim_i2 == binomial(g - 1, 2) {
        Ok(CurveType::Hyperelliptic)
    } else if dim_i2 == binomial(g - 2, 2) {
        Ok(CurveType::Nonhyperelliptic)
    } else {
        Err(Error::InconsistentInput(format!("dim I_2 = {dim_i2} fits neither curve type in genus {g}")))
    }
}

/// `I₂ ∪ I₃ ∪ I₄`, which cuts out a nonhyperelliptic canonical curve.
pub fn nonhyperelliptic_model(input: &ProblemInput) -> Result<Vec<CanonicalIdealComponent>> {
    (2..=4).map(|d| canonical_ideal_component(input, d)).collect()
}

/// Number of degree-`d` monomials in `n` variables.
pub fn monomial_count(n: usize, d: u32) -> usize {
    monomials(n, d).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_is_hyperelliptic() {
        assert_eq!(detect_hyperelliptic(2, 0).unwrap(), CurveType::Hyperelliptic);
        assert_eq!(detect_hyperelliptic(3, 1).unwrap(), CurveType::Hyperelliptic);
        assert_eq!(detect_hyperelliptic(3, 0).unwrap(), CurveType::Nonhyperelliptic);
        assert!(detect_hyperelliptic(4, 2).is_err());
    }

    /// `x^(i-1)` for `x = q` gives the rational normal curve: the 2x2 minors
    /// of a Hankel matrix span I₂.
    #[test]
    fn rational_normal_curve_quadrics() {
        let k = NumberField::rationals();
        let zero = FieldElement::zero(&k);
        let b = 12;
        let forms: Vec<_> = (0..3)
            .map(|i| {
                let mut c = vec![zero.clone(); b];
                c[i] = FieldElement::one(&k);
                Series::new(zero.clone(), 0, c, 1)
            })
            .collect();
        let input = ProblemInput::new(3, k, b as i64, forms).unwrap();
        let i2 = canonical_ideal_component(&input, 2).unwrap();
        assert_eq!(i2.basis.len(), 1);
        let f = &i2.basis[0];
        assert!(f.eval_series(&input.forms).is_zero_to_precision());
        assert_eq!(monomial_count(3, 2), 6);
    }
}
