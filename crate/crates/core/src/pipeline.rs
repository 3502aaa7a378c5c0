//! End-to-end reconstruction: chooses the branch, runs the steps, and
//! collects the outputs and diagnostics into one report.

use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::arith::Rational;
use crate::canonical::{
    canonical_ideal_component, detect_hyperelliptic, nonhyperelliptic_model, CurveType, ProblemInput,
};
use crate::error::{Error, Result};
use crate::forms::HomogeneousForm;
use crate::hyper::{
    diagonalize_conic, image_of_point, model_series, reduce_to_p1, step1_ordered_basis, step2_trace_sections,
    step3_find_conic, step4_h_series, step5_express_h, step6_even_genus, step7_parity_split, PipelineState, PointImage,
};
use crate::json;
use crate::model::{square_normalizer, Certificate, ConicModel, CurveModel};
use crate::precision::{minimum_b, ConformanceResult};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReconstructOptions {
    /// Run below `B = 19g + 48`; steps that cannot certify their result
    /// still fail.
    pub allow_low_precision: bool,
    /// A rational point `(a : b : c)` on the output conic, for a second
    /// model `y² = f(x)`.
    pub rational_point: Option<[Rational; 3]>,
    /// Replace the conic by a diagonal one with squarefree coefficients.
    pub diagonalize: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub model: CurveModel,
    /// The Weierstrass model from a rational point on the conic.
    pub reduced: Option<CurveModel>,
    pub point_image: PointImage,
    pub precision_report: Vec<ConformanceResult>,
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn branch(&self) -> &'static str {
        self.model.branch()
    }

    /// The report without timings, which is identical across runs.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("branch".into(), json!(self.branch()));
        m.insert("model".into(), self.model.to_json());
        if let Some(r) = &self.reduced {
            m.insert("reduced_model".into(), r.to_json());
        }
        m.insert("point_image".into(), point_image_json(&self.point_image));
        m.insert("precision_report".into(), serde_json::to_value(&self.precision_report).expect("serializable"));
        Value::Object(m)
    }

    pub fn timings_json(&self) -> Value {
        Value::Object(self.timings.iter().map(|(k, t)| (k.clone(), json!(t))).collect())
    }

    pub fn conformance_violations(&self) -> usize {
        self.precision_report.iter().filter(|c| !c.passed()).count()
    }
}

fn point_image_json(p: &PointImage) -> Value {
    json!({
        "field": json::field(&p.field),
        "coords": p.coords.iter().map(json::element).collect::<Vec<_>>(),
        "at_infinity": p.at_infinity,
    })
}

pub fn reconstruct(input: &ProblemInput, opts: &ReconstructOptions) -> Result<RunReport> {
    let g = input.genus as i64;
    if input.precision < minimum_b(g) && !opts.allow_low_precision {
        return Err(Error::InsufficientPrecision { needed: minimum_b(g), available: input.precision });
    }
    let start = Instant::now();
    let kind = if input.genus == 2 {
        CurveType::Hyperelliptic
    } else {
        detect_hyperelliptic(input.genus, canonical_ideal_component(input, 2)?.basis.len())?
    };
    let detection = ("detect".to_string(), start.elapsed().as_secs_f64());
    let mut report = match kind {
        CurveType::Nonhyperelliptic => nonhyperelliptic(input)?,
        CurveType::Hyperelliptic => hyperelliptic(input, opts)?,
    };
    report.timings.insert(0, detection);
    Ok(report)
}

fn nonhyperelliptic(input: &ProblemInput) -> Result<RunReport> {
    let start = Instant::now();
    let generators = nonhyperelliptic_model(input)?.into_iter().flat_map(|c| c.basis).collect();
    let v = input
        .forms
        .iter()
        .filter_map(|w| w.valuation())
        .min()
        .ok_or(Error::PrecisionExhausted("all forms vanish".into()))?;
    let point_image = PointImage {
        field: input.field.clone(),
        coords: input.forms.iter().map(|w| w.coeff(v)).collect(),
        at_infinity: false,
    };
    Ok(RunReport {
        model: CurveModel::Nonhyperelliptic { genus: input.genus, generators },
        reduced: None,
        point_image,
        precision_report: Vec::new(),
        timings: vec![("ideal".into(), start.elapsed().as_secs_f64())],
    })
}

fn hyperelliptic(input: &ProblemInput, opts: &ReconstructOptions) -> Result<RunReport> {
    let g = input.genus;
    let mut state = step1_ordered_basis(input)?;
    step2_trace_sections(&mut state)?;
    step3_find_conic(&mut state)?;
    step4_h_series(&mut state)?;
    step5_express_h(&mut state)?;
    let (model, reduced) = if g.is_multiple_of(2) {
        let res = step6_even_genus(&mut state)?;
        (CurveModel::Weierstrass { genus: g, model: res.model, certificate: Some(res.certificate) }, None)
    } else {
        odd_genus(&mut state, opts)?
    };
    let certificate = match &model {
        CurveModel::Weierstrass { certificate, .. } | CurveModel::Conic { certificate, .. } => certificate.as_ref(),
        CurveModel::Nonhyperelliptic { .. } => None,
    }
    .ok_or_else(|| Error::Internal("hyperelliptic model without certificate".into()))?;
    let point_image = image_of_point(&model_series(&state, certificate)?, g)?;
    Ok(RunReport {
        model,
        reduced,
        point_image,
        precision_report: std::mem::take(&mut state.conformance),
        timings: std::mem::take(&mut state.timings),
    })
}

fn odd_genus(state: &mut PipelineState, opts: &ReconstructOptions) -> Result<(CurveModel, Option<CurveModel>)> {
    let g = state.genus();
    let res = step7_parity_split(state)?;
    let mut conic = res.model;
    let (mut y_num, y_den) = res.y_factor;
    let mut frame = None;
    if opts.diagonalize {
        let (diagonal, change) = diagonalize_conic(&conic.conic)?;
        // coordinates are change·∂, so the old ones are change⁻¹ applied to them
        let weight = conic.weight.substitute_linear(&change.inverse()?);
        let r = square_normalizer(&weight.coeff_vector());
        conic = ConicModel { conic: diagonal, weight: weight.scale(&(&r * &r)) };
        y_num = y_num.scale(&r);
        frame = Some(change);
    }
    let in_sections = |f: &HomogeneousForm| match &frame {
        Some(m) => f.substitute_linear(m),
        None => f.clone(),
    };
    let reduced = match &opts.rational_point {
        None => None,
        Some(point) => {
            let red = reduce_to_p1(&conic, point)?;
            let certificate = Certificate {
                frame: None,
                x: Some((in_sections(&red.s.0), in_sections(&red.s.1))),
                y: (y_num.mul(&in_sections(&red.y_factor.0)), y_den.mul(&in_sections(&red.y_factor.1))),
            };
            Some(CurveModel::Weierstrass { genus: g, model: red.model, certificate: Some(certificate) })
        }
    };
    let certificate = Certificate { frame, x: None, y: (y_num, y_den) };
    Ok((CurveModel::Conic { genus: g, model: conic, certificate: Some(certificate) }, reduced))
}

/// Parses `a:b:c` into rationals.
pub fn parse_point(s: &str) -> Result<[Rational; 3]> {
    let parts: Vec<Rational> = s.split(':').map(|p| json::parse_rat(&json!(p.trim()))).collect::<Result<_>>()?;
    <[Rational; 3]>::try_from(parts).map_err(|_| Error::InvalidInput(format!("expected a:b:c, got {s:?}")))
}
