//! JSON encodings shared by the input, model and report formats.
//!
//! Rationals are strings `"num/den"` (or `"num"`), a number field is the
//! ascending coefficient list of its defining polynomial, a field element is
//! its ascending power-basis coordinate list, and a form is a list of
//! `{"exponents": [...], "coeff": "p/q"}` terms, largest monomial first.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::{parse_rational, rational_to_string, FieldElement, NumberField, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::forms::HomogeneousForm;
use crate::series::Series;

fn bad(what: &str) -> Error {
    Error::InvalidInput(format!("malformed {what}"))
}

pub fn rational(r: &Rational) -> Value {
    Value::String(rational_to_string(r))
}

/// Accepts a string or an integer literal.
pub fn parse_rat(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(bad("rational")),
    }
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn parse_rats(v: &Value) -> Result<Vec<Rational>> {
    v.as_array().ok_or_else(|| bad("rational list"))?.iter().map(parse_rat).collect()
}

pub fn field(k: &NumberField) -> Value {
    rationals(k.min_poly())
}

pub fn parse_field(v: &Value) -> Result<Arc<NumberField>> {
    NumberField::new(parse_rats(v)?)
}

pub fn element(x: &FieldElement) -> Value {
    rationals(&x.coords())
}

pub fn parse_element(k: &Arc<NumberField>, v: &Value) -> Result<FieldElement> {
    let c = parse_rats(v)?;
    if c.len() > k.degree() {
        return Err(Error::InvalidInput(format!("{} coordinates for a field of degree {}", c.len(), k.degree())));
    }
    Ok(FieldElement::new(k, c))
}

pub fn form(f: &HomogeneousForm) -> Value {
    Value::Array(f.terms().map(|(e, c)| json!({"exponents": e, "coeff": rational(c)})).collect())
}

/// Parses a form; `shape` gives `(nvars, degree)` and is required when the
/// term list may be empty.
pub fn parse_form(v: &Value, shape: Option<(usize, u32)>) -> Result<HomogeneousForm> {
    let arr = v.as_array().ok_or_else(|| bad("form"))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let e: Vec<u32> = t
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("form term"))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| bad("exponent")))
            .collect::<Result<_>>()?;
        let c = parse_rat(t.get("coeff").ok_or_else(|| bad("form term"))?)?;
        terms.push((e, c));
    }
    let (n, d) = match (shape, terms.first()) {
        (Some(s), _) => s,
        (None, Some((e, _))) => (e.len(), e.iter().sum()),
        (None, None) => return Err(bad("form (empty without shape)")),
    };
    HomogeneousForm::from_terms(n, d, terms)
}

pub fn poly(p: &UniPoly<Rational>) -> Value {
    rationals(p.coeffs())
}

pub fn series(s: &Series<FieldElement>) -> Value {
    json!({
        "val_offset": s.start(),
        "abs_prec": s.abs_prec(),
        "twist": s.twist(),
        "coeffs": s.coeffs().iter().map(element).collect::<Vec<_>>(),
    })
}

pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::InvalidInput(format!("missing field {key:?}")))
}

pub fn get_i64(v: &Value, key: &str) -> Result<i64> {
    get(v, key)?.as_i64().ok_or_else(|| Error::InvalidInput(format!("field {key:?} is not an integer")))
}
