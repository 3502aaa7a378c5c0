//! Even genus: the conic has a rational point, and a pencil of forms
//! vanishing on the divisor of `ω₁` parametrizes it.

use std::time::Instant;

use crate::arith::linalg::{kernel_q, rref_q};
use crate::arith::{rat, FieldElement, Rational, UniPoly};
use crate::canonical::series_coordinate_matrix;
use crate::error::{Error, Result};
use crate::forms::{monomial_series, HomogeneousForm};
use crate::model::{homogenize_in, square_normalizer, Certificate, WeierstrassModel};
use crate::precision::ObjectId;
use crate::series::Series;

use super::PipelineState;

/// A Weierstrass model with the coordinate change that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenGenusResult {
    pub model: WeierstrassModel,
    pub certificate: Certificate,
    /// `h = N(x) / D(x)`.
    pub fit: (UniPoly<Rational>, UniPoly<Rational>),
}

/// The two-dimensional space of forms `S` of degree `g/2` with
/// `ω₁ R_j(∂) = S(∂) ω_j` for some `R_j`, as a basis `(S₁, S₂)` where
/// `S₂(∂)` has the smaller valuation.
pub fn pencil(state: &mut PipelineState) -> Result<(HomogeneousForm, HomogeneousForm)> {
    let g = state.genus();
    let half = (g / 2) as u32;
    let sections = state.sections()?.to_vec();
    let forms = state.input.forms.clone();
    let monos = monomial_series(&sections, half);
    let n = monos.len();
    let hi = state.budget().step6;
    let w1_monos: Vec<Series<FieldElement>> = monos.iter().map(|m| forms[0].mul(m)).collect();
    if let Some(m) = w1_monos.first() {
        state.record(ObjectId::Step6Bilinear, "omega_1 * monomial", m);
    }
    let available = w1_monos.iter().map(Series::abs_prec).min().unwrap_or(0);
    if available < hi {
        return Err(Error::InsufficientPrecision { needed: hi, available });
    }
    let zero = Series::zero(FieldElement::zero(&state.input.field), hi, 1 - half as i32);
    let mut blocks = Vec::new();
    for j in 1..g {
        let mut cols = vec![zero.clone(); (g - 1) * n];
        cols[(j - 1) * n..j * n].clone_from_slice(&w1_monos);
        cols.extend(monos.iter().map(|m| forms[j].mul(m).neg()));
        let lo = cols.iter().map(Series::start).min().unwrap_or(0).min(hi);
        blocks.push(series_coordinate_matrix(&cols, lo, hi));
    }
    let rows: Vec<Vec<Rational>> = blocks.iter().flat_map(|b| b.rows()).collect();
    let system = crate::arith::Matrix::from_rows_with(rat(0), rows);
    let kernel = kernel_q(&system);
    let projected: Vec<Vec<Rational>> = kernel.iter().map(|v| v[(g - 1) * n..].to_vec()).collect();
    if projected.is_empty() {
        return Err(Error::SectionDimension(0));
    }
    let (reduced, pivots) = rref_q(&crate::arith::Matrix::from_rows_with(rat(0), projected));
    if pivots.len() != 2 {
        return Err(Error::SectionDimension(pivots.len()));
    }
    let a = HomogeneousForm::from_coeff_vector(3, half, reduced.row(0));
    let b = HomogeneousForm::from_coeff_vector(3, half, reduced.row(1));
    let va = a.eval_series(&sections).valuation();
    let vb = b.eval_series(&sections).valuation();
    Ok(if vb <= va { (a, b) } else { (b, a) })
}

/// `N, D` of degree at most `2g + 6` with `N(x) = h·D(x)` to `O(q^(8g+25))`.
fn fit_rational_function(
    h: &Series<FieldElement>,
    x: &Series<FieldElement>,
    g: usize,
    hi: i64,
) -> Result<(UniPoly<Rational>, UniPoly<Rational>)> {
    let max_degree = 2 * g + 6;
    let one = FieldElement::one(x.zero_elem().field());
    let mut powers = vec![Series::constant(one, x.abs_prec())];
    for k in 1..=max_degree {
        powers.push(powers[k - 1].mul(x));
    }
    let cols: Vec<Series<FieldElement>> = powers.iter().cloned().chain(powers.iter().map(|p| h.mul(p).neg())).collect();
    let available = cols.iter().map(Series::abs_prec).min().unwrap_or(0);
    if available < hi {
        return Err(Error::InsufficientPrecision { needed: hi, available });
    }
    let lo = cols.iter().map(Series::start).min().unwrap_or(0).min(hi);
    let kernel = kernel_q(&series_coordinate_matrix(&cols, lo, hi));
    let m = max_degree + 1;
    for v in &kernel {
        let num = UniPoly::from_coeffs(rat(0), v[..m].to_vec());
        let den = UniPoly::from_coeffs(rat(0), v[m..].to_vec());
        if !den.is_zero() && !num.is_zero() {
            return Ok((num, den));
        }
    }
    Err(Error::NoValidSolution)
}

/// `y² = f(x)` from the pencil, the fit of `h` and the odd part of `N·D`.
pub fn step6_even_genus(state: &mut PipelineState) -> Result<EvenGenusResult> {
    let start = Instant::now();
    let g = state.genus();
    if g % 2 == 1 {
        return Err(Error::Internal("even-genus step called in odd genus".into()));
    }
    let (s1, s2) = pencil(state)?;
    let sections = state.sections()?.to_vec();
    let x = s1.eval_series(&sections).div(&s2.eval_series(&sections))?;
    let h = state.h()?.clone();
    let (num, den) = fit_rational_function(&h, &x, g, state.budget().f_hg)?;
    let product = num.mul(&den);
    let lead = product.leading().cloned().ok_or(Error::NoValidSolution)?;
    let mut odd = UniPoly::constant(lead);
    let mut square = UniPoly::constant(rat(1));
    for (factor, mult) in product.squarefree_decompose()? {
        if mult % 2 == 1 {
            odd = odd.mul(&factor);
        }
        square = square.mul(&factor.pow(mult / 2));
    }
    let degree = odd.degree().unwrap_or(0);
    if degree != 2 * g + 1 && degree != 2 * g + 2 {
        return Err(Error::InconsistentInput(format!("Weierstrass polynomial of degree {degree} in genus {g}")));
    }
    let r = square_normalizer(odd.coeffs());
    let f = odd.mul_scalar(&(&r * &r));
    // y_model = r · y · D(x) / square(x), written with forms in the sections
    let dd = den.degree().unwrap_or(0);
    let ds = square.degree().unwrap_or(0);
    let y_num = homogenize_in(&den.mul_scalar(&r), dd, &s1, &s2).mul(&s2.pow(ds as u32));
    let y_den = homogenize_in(&square, ds, &s1, &s2).mul(&s2.pow(dd as u32));
    let certificate = Certificate { frame: None, x: Some((s1, s2)), y: (y_num, y_den) };
    state.time("step6", start);
    Ok(EvenGenusResult { model: WeierstrassModel { f }, certificate, fit: (num, den) })
}
