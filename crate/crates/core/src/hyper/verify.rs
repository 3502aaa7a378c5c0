//! Checking a model against the input it was reconstructed from, by
//! expanding its coordinates at the point and testing every defining
//! identity to a precision that certifies exact vanishing.

use std::sync::Arc;

use crate::arith::{FieldElement, NumberField, Scalar};
use crate::canonical::ProblemInput;
use crate::error::{Error, Result};
use crate::model::{Certificate, CurveModel};
use crate::series::{linear_combination, Series};

use super::{step1_ordered_basis, step2_trace_sections, step4_h_series, PipelineState};

/// The deterministic part of the pipeline that coordinates are expressed in:
/// the sections `∂ᵢ` and the function `y`.
pub fn recompute(input: &ProblemInput) -> Result<PipelineState> {
    let mut state = step1_ordered_basis(input)?;
    step2_trace_sections(&mut state)?;
    step4_h_series(&mut state)?;
    Ok(state)
}

/// Expansions of a model's coordinates at the point.
#[derive(Clone, Debug)]
pub struct ModelSeries {
    /// Plane coordinates of the conic, or `x` for a Weierstrass model.
    pub coords: Vec<Series<FieldElement>>,
    pub y: Series<FieldElement>,
}

pub fn model_series(state: &PipelineState, certificate: &Certificate) -> Result<ModelSeries> {
    let sections = state.sections()?;
    let coords = match (&certificate.x, &certificate.frame) {
        (Some((num, den)), _) => vec![num.eval_series(sections).div(&den.eval_series(sections))?],
        (None, None) => sections.to_vec(),
        (None, Some(frame)) => (0..3)
            .map(|i| {
                let row: Vec<FieldElement> =
                    (0..3).map(|j| FieldElement::from_rational_in(&state.input.field, &frame[(i, j)])).collect();
                linear_combination(&row, sections)
            })
            .collect::<Result<_>>()?,
    };
    let (num, den) = &certificate.y;
    let y = state.y()?.mul(&num.eval_series(sections)).div(&den.eval_series(sections))?;
    Ok(ModelSeries { coords, y })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records whether `s` vanishes as a section given that its degree is at
    /// most `bound`.
    fn section(&mut self, name: &str, s: Result<Series<FieldElement>>, bound: i64, field_degree: usize) {
        match s.and_then(|s| s.is_zero_as_section(bound, field_degree).map(|z| (z, s))) {
            Ok((true, s)) => self.push(name, true, format!("zero to O(q^{}), degree bound {bound}", s.abs_prec())),
            Ok((false, s)) => self.push(name, false, format!("nonzero coefficient at q^{}", s.start())),
            Err(e) => self.push(name, false, e.to_string()),
        }
    }
}

/// Every defining identity of `model` on the input expansions. Hyperelliptic
/// models need their certificate.
///
/// The degree bounds count zeros and poles on `X`: the sections `∂ᵢ` have
/// degree 4, `y` has at most `2g + 6` poles, and a function or section
/// vanishing at `P` to order above `bound / [K:ℚ]` is zero.
pub fn verify(input: &ProblemInput, model: &CurveModel) -> Result<Verification> {
    let g = input.genus as i64;
    let n = input.field_degree();
    let mut out = Verification::default();
    if model.genus() != input.genus {
        out.push("genus", false, format!("model genus {} differs from input genus {g}", model.genus()));
        return Ok(out);
    }
    match model {
        CurveModel::Nonhyperelliptic { generators, .. } => {
            for (i, f) in generators.iter().enumerate() {
                if f.nvars() != input.genus {
                    out.push("generator shape", false, format!("generator {i} has {} variables", f.nvars()));
                    continue;
                }
                let bound = i64::from(f.degree()) * (2 * g - 2);
                out.section(&format!("generator {i} vanishes"), Ok(f.eval_series(&input.forms)), bound, n);
            }
            if generators.is_empty() {
                out.push("generators", false, "no generators");
            }
        }
        CurveModel::Weierstrass { model, certificate, .. } => {
            let cert = certificate.as_ref().ok_or_else(|| Error::InvalidInput("model has no certificate".into()))?;
            let f = &model.f;
            let degree = f.degree().unwrap_or(0) as i64;
            out.push("degree", degree == 2 * g + 1 || degree == 2 * g + 2, format!("deg f = {degree}"));
            out.push("separable", f.is_squarefree()?, "gcd(f, f') = 1");
            let state = recompute(input)?;
            let residual = model_series(&state, cert).and_then(|ms| {
                let k = &input.field;
                let fk = f.map(FieldElement::zero(k), |c| FieldElement::from_rational_in(k, c));
                ms.y.mul(&ms.y).sub(&ms.coords[0].compose_poly(&fk))
            });
            let x_degree = cert.x.as_ref().map_or(0, |(_, d)| i64::from(d.degree()));
            let y_degree = i64::from(cert.y.1.degree());
            let bound = 2 * (2 * g + 6) + 8 * y_degree + 4 * x_degree * (2 * g + 2);
            out.section("y^2 = f(x)", residual, bound, n);
        }
        CurveModel::Conic { model, certificate, .. } => {
            let cert = certificate.as_ref().ok_or_else(|| Error::InvalidInput("model has no certificate".into()))?;
            out.push("smooth conic", model.conic.is_smooth_quadric(), "nonzero Gram determinant");
            out.push(
                "weight degree",
                i64::from(model.weight.degree()) == g + 1 && model.weight.nvars() == 3,
                format!("deg H = {}", model.weight.degree()),
            );
            let state = recompute(input)?;
            match model_series(&state, cert) {
                Ok(ms) => {
                    // a quadric in the ∂ has degree 8; 2·6 is the customary looser bound
                    out.section("Q = 0", Ok(model.conic.eval_series(&ms.coords)), 12, n);
                    let bound = 4 * (g + 1) + 2 * (2 * g + 6) + 8 * i64::from(cert.y.1.degree());
                    let residual = ms.y.mul(&ms.y).sub(&model.weight.eval_series(&ms.coords));
                    out.section("y^2 = H", residual, bound, n);
                }
                Err(e) => out.push("coordinates", false, e.to_string()),
            }
        }
    }
    Ok(out)
}

/// The point `P` in the model's coordinates, over `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointImage {
    pub field: Arc<NumberField>,
    /// `(x, y)` for a Weierstrass model, `(a : b : c : y)` (weights
    /// `1, 1, 1, (g+1)/2`) for a conic model.
    pub coords: Vec<FieldElement>,
    /// Set when `P` lies over `x = ∞`; `coords` is then `(y / x^(g+1))` there.
    pub at_infinity: bool,
}

pub fn image_of_point(ms: &ModelSeries, genus: usize) -> Result<PointImage> {
    let field = ms.y.zero_elem().field().clone();
    if ms.coords.len() == 1 {
        let x = &ms.coords[0];
        let vx = x.valuation().ok_or_else(|| Error::PrecisionExhausted("x vanishes".into()))?;
        if vx >= 0 {
            return Ok(PointImage { field, coords: vec![x.coeff(0), ms.y.coeff(0)], at_infinity: false });
        }
        let scaled = ms.y.div(&x.pow(genus as u32 + 1))?;
        return Ok(PointImage { field, coords: vec![scaled.coeff(0)], at_infinity: true });
    }
    let v = ms
        .coords
        .iter()
        .filter_map(Series::valuation)
        .min()
        .ok_or_else(|| Error::PrecisionExhausted("coordinates vanish".into()))?;
    let mut coords: Vec<FieldElement> = ms.coords.iter().map(|c| c.coeff(v)).collect();
    let weight = (genus as i64 + 1) / 2;
    coords.push(ms.y.coeff(v * weight));
    if coords.iter().take(3).all(|c| c.is_zero()) {
        return Err(Error::Internal("point image has all coordinates zero".into()));
    }
    Ok(PointImage { field, coords, at_infinity: false })
}
