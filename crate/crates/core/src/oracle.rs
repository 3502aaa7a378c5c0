//! Forward generation of test inputs: expansions of a basis of regular
//! 1-forms of an explicit curve at a nonrational point.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::arith::linalg::rank_q;
use crate::arith::{flatten_tower, rat, FieldElement, Matrix, NumberField, Rational, Scalar, TowerEmbedding, UniPoly};
use crate::canonical::{series_coordinate_matrix, ProblemInput};
use crate::error::{Error, Result};
use crate::forms::{monomial_series, HomogeneousForm};
use crate::json;
use crate::series::Series;

#[derive(Clone, Debug, PartialEq)]
pub enum OracleModel {
    /// `y² = f(x)`.
    HyperellipticPoly { f: UniPoly<Rational> },
    /// `Q(a,b,c) = 0, y² = H(a,b,c)` with `deg H = g + 1` even.
    ConicWeighted { conic: HomogeneousForm, weight: HomogeneousForm },
    /// A smooth plane quartic `F(x,y,z) = 0`.
    PlaneQuartic { quartic: HomogeneousForm },
}

/// A curve, a point on it, and a precision.
///
/// The point is given by its affine first coordinate `x0` (with `z = 1`).
/// The second affine coordinate is `second` when present and otherwise
/// adjoined as a root of the curve equation; for the conic model the square
/// root `y` is adjoined likewise unless `y0` is given. `negate_root` flips
/// the sign of `y` for the two double-cover models.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSpec {
    pub model: OracleModel,
    pub x0: FieldElement,
    pub second: Option<FieldElement>,
    pub y0: Option<FieldElement>,
    pub negate_root: bool,
    pub precision: i64,
    pub scramble: Option<Matrix<Rational>>,
}

impl OracleSpec {
    pub fn genus(&self) -> Result<usize> {
        match &self.model {
            OracleModel::HyperellipticPoly { f } => match f.degree() {
                Some(d) if d >= 5 => Ok((d - 1) / 2),
                _ => Err(Error::InvalidInput("f must have degree at least 5".into())),
            },
            OracleModel::ConicWeighted { weight, .. } => {
                let d = weight.degree() as usize;
                if d < 4 || d % 2 == 1 {
                    return Err(Error::InvalidInput("H must have even degree at least 4".into()));
                }
                Ok(d - 1)
            }
            OracleModel::PlaneQuartic { .. } => Ok(3),
        }
    }

    pub fn to_json(&self) -> Value {
        let model = match &self.model {
            OracleModel::HyperellipticPoly { f } => json!({"type": "hyp_poly", "f": json::poly(f)}),
            OracleModel::ConicWeighted { conic, weight } => {
                json!({"type": "conic", "Q": json::form(conic), "H": json::form(weight)})
            }
            OracleModel::PlaneQuartic { quartic } => json!({"type": "plane_quartic", "F": json::form(quartic)}),
        };
        let mut m = Map::new();
        m.insert("model".into(), model);
        m.insert("x0".into(), json!({"field": json::field(self.x0.field()), "coords": json::element(&self.x0)}));
        if let Some(s) = &self.second {
            m.insert("second".into(), json::element(s));
        }
        if let Some(y) = &self.y0 {
            m.insert("y0".into(), json::element(y));
        }
        m.insert("branch".into(), json!(if self.negate_root { "-" } else { "+" }));
        m.insert("B".into(), json!(self.precision));
        if let Some(s) = &self.scramble {
            let rows: Vec<Value> = s.rows().iter().map(|r| json::rationals(r)).collect();
            m.insert("scramble".into(), Value::Array(rows));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let model = json::get(v, "model")?;
        let kind = json::get(model, "type")?.as_str().unwrap_or_default();
        let model = match kind {
            "hyp_poly" => OracleModel::HyperellipticPoly { f: UniPoly::new(json::parse_rats(json::get(model, "f")?)?) },
            "conic" => OracleModel::ConicWeighted {
                conic: json::parse_form(json::get(model, "Q")?, None)?,
                weight: json::parse_form(json::get(model, "H")?, None)?,
            },
            "plane_quartic" => OracleModel::PlaneQuartic { quartic: json::parse_form(json::get(model, "F")?, None)? },
            other => return Err(Error::InvalidInput(format!("unknown model type {other:?}"))),
        };
        let x0v = json::get(v, "x0")?;
        let field = json::parse_field(json::get(x0v, "field")?)?;
        let x0 = json::parse_element(&field, json::get(x0v, "coords")?)?;
        let opt = |key: &str| v.get(key).map(|c| json::parse_element(&field, c)).transpose();
        let negate_root = match v.get("branch").and_then(Value::as_str).unwrap_or("+") {
            "+" => false,
            "-" => true,
            other => return Err(Error::InvalidInput(format!("branch must be + or -, got {other:?}"))),
        };
        let scramble = match v.get("scramble") {
            None | Some(Value::Null) => None,
            Some(rows) => {
                let rows = rows.as_array().ok_or_else(|| Error::InvalidInput("scramble must be a matrix".into()))?;
                let rows = rows.iter().map(json::parse_rats).collect::<Result<Vec<_>>>()?;
                Some(Matrix::from_rows_with(rat(0), rows))
            }
        };
        Ok(Self {
            model,
            second: opt("second")?,
            y0: opt("y0")?,
            x0,
            negate_root,
            precision: json::get_i64(v, "B")?,
            scramble,
        })
    }
}

/// Square root of `c` with constant term `y0`.
pub fn newton_sqrt_series(c: &Series<FieldElement>, y0: &FieldElement) -> Result<Series<FieldElement>> {
    c.sqrt_with_root(y0)
}

/// The field generated by a root of `p` over `k`, or `k` itself with the
/// given root.
fn adjoin_root(
    k: &Arc<NumberField>,
    p: &UniPoly<FieldElement>,
    given: Option<&FieldElement>,
) -> Result<TowerEmbedding> {
    match given {
        Some(r) => {
            if !p.eval(r).is_zero() {
                return Err(Error::BadInitialRoot);
            }
            Ok(TowerEmbedding { field: k.clone(), base_image: FieldElement::generator(k), root_image: r.clone() })
        }
        None => flatten_tower(k, p).map(|(_, e)| e),
    }
}

/// `f(x0, y, 1)` as a polynomial in `y`.
fn restrict_to_line(f: &HomogeneousForm, x0: &FieldElement) -> UniPoly<FieldElement> {
    let k = x0.field();
    let point = [x0.clone(), FieldElement::zero(k), FieldElement::one(k)];
    let mut coeffs = Vec::new();
    let mut d = f.clone();
    let mut fact = rat(1);
    for j in 0..=f.degree() {
        if j > 0 {
            d = d.partial(1);
            fact *= rat(i64::from(j));
        }
        let c = d.eval(&point);
        coeffs.push(c.scale(&(rat(1) / fact.clone())));
    }
    UniPoly::from_coeffs(FieldElement::zero(k), coeffs)
}

/// Solves `f(x(q), y(q), 1) = 0` for `y(q)` with `y(0) = y0` by Newton
/// iteration, doubling the precision each round.
fn solve_affine(f: &HomogeneousForm, x: &Series<FieldElement>, y0: &FieldElement) -> Result<Series<FieldElement>> {
    let k = y0.field();
    let zero = FieldElement::zero(k);
    let fy = f.partial(1);
    let point = [x.coeff(0), y0.clone(), FieldElement::one(k)];
    if !f.eval(&point).is_zero() {
        return Err(Error::BadInitialRoot);
    }
    if fy.eval(&point).is_zero() {
        return Err(Error::SingularAtPoint);
    }
    let target = x.abs_prec();
    let mut y = Series::constant(y0.clone(), 1);
    let mut prec = 1;
    while prec < target {
        prec = (2 * prec).min(target);
        let y_ext = Series::with_precision(zero.clone(), y.start(), y.coeffs().to_vec(), prec, 0);
        let vars = [x.truncate(prec), y_ext.clone(), Series::constant(FieldElement::one(k), prec)];
        let step = f.eval_series(&vars).div(&fy.eval_series(&vars))?;
        y = y_ext.sub(&step)?;
    }
    Ok(y)
}

fn uniformizer_chart(x0: &FieldElement, b: i64) -> Series<FieldElement> {
    let k = x0.field();
    Series::with_precision(FieldElement::zero(k), 0, vec![x0.clone(), FieldElement::one(k)], b, 0)
}

fn finish(
    spec: &OracleSpec,
    genus: usize,
    field: Arc<NumberField>,
    forms: Vec<Series<FieldElement>>,
) -> Result<ProblemInput> {
    let input = ProblemInput::new(genus, field, spec.precision, forms)?;
    match &spec.scramble {
        Some(m) => scramble_basis(&input, m),
        None => Ok(input),
    }
}

/// `x^(i-1) dx / y` for `i = 1..g` at `x = x0 + q`.
pub fn expand_hyperelliptic(spec: &OracleSpec) -> Result<ProblemInput> {
    let OracleModel::HyperellipticPoly { f } = &spec.model else {
        return Err(Error::InvalidInput("not a hyperelliptic spec".into()));
    };
    let g = spec.genus()?;
    if !f.is_squarefree()? {
        return Err(Error::InvalidInput("f is not separable".into()));
    }
    let k0 = spec.x0.field();
    let fx0 = f.map(FieldElement::zero(k0), |c| FieldElement::from_rational_in(k0, c)).eval(&spec.x0);
    let sq = UniPoly::from_coeffs(
        FieldElement::zero(k0),
        vec![fx0.negated(), FieldElement::zero(k0), FieldElement::one(k0)],
    );
    let emb = adjoin_root(k0, &sq, spec.y0.as_ref())?;
    let k = emb.field.clone();
    let mut y0 = emb.root_image.clone();
    if spec.negate_root {
        y0 = y0.negated();
    }
    let x = uniformizer_chart(&emb.embed(&spec.x0), spec.precision);
    let fk = f.map(FieldElement::zero(&k), |c| FieldElement::from_rational_in(&k, c));
    let y = newton_sqrt_series(&x.compose_poly(&fk), &y0)?;
    let inv_y = y.invert()?.with_twist(1);
    let mut forms = vec![inv_y];
    for i in 1..g {
        forms.push(forms[i - 1].mul(&x));
    }
    finish(spec, g, k, forms)
}

/// `A(a,b,1) da / (Q_b · y)` for `A` running over independent forms of
/// degree `(g−1)/2`, in the chart `c = 1` with uniformizer `a − a0`.
pub fn expand_conic_model(spec: &OracleSpec) -> Result<ProblemInput> {
    let OracleModel::ConicWeighted { conic, weight } = &spec.model else {
        return Err(Error::InvalidInput("not a conic-model spec".into()));
    };
    let g = spec.genus()?;
    if conic.nvars() != 3 || conic.degree() != 2 || !conic.is_smooth_quadric() {
        return Err(Error::SingularConic);
    }
    let k0 = spec.x0.field();
    let line = restrict_to_line(conic, &spec.x0);
    if line.degree() != Some(2) {
        return Err(Error::DegenerateParametrization);
    }
    let line = line.monic()?;
    let e1 = adjoin_root(k0, &line, spec.second.as_ref())?;
    let k1 = e1.field.clone();
    let a0 = e1.embed(&spec.x0);
    let b0 = e1.root_image.clone();
    let one1 = FieldElement::one(&k1);
    let h0 = weight.eval(&[a0.clone(), b0.clone(), one1.clone()]);
    if h0.is_zero() {
        return Err(Error::BadInitialRoot);
    }
    let zero1 = FieldElement::zero(&k1);
    let sq = UniPoly::from_coeffs(zero1.clone(), vec![h0.negated(), zero1, one1]);
    let e2 = adjoin_root(&k1, &sq, spec.y0.as_ref())?;
    let k = e2.field.clone();
    let mut y0 = e2.root_image.clone();
    if spec.negate_root {
        y0 = y0.negated();
    }
    let a = uniformizer_chart(&e2.embed(&a0), spec.precision);
    let b = solve_affine(conic, &a, &e2.embed(&b0)).map_err(|e| match e {
        Error::SingularAtPoint => Error::DegenerateParametrization,
        e => e,
    })?;
    let vars = [a, b, Series::constant(FieldElement::one(&k), spec.precision)];
    let y = newton_sqrt_series(&weight.eval_series(&vars), &y0)?;
    let denom = conic.partial(1).eval_series(&vars).mul(&y).invert()?.with_twist(1);
    let mut forms: Vec<Series<FieldElement>> = Vec::new();
    for m in monomial_series(&vars, ((g - 1) / 2) as u32) {
        let mut trial = forms.clone();
        trial.push(m.mul(&denom));
        if rank_q(&series_coordinate_matrix(&trial, 0, spec.precision)) == trial.len() {
            forms = trial;
        }
        if forms.len() == g {
            break;
        }
    }
    if forms.len() < g {
        return Err(Error::RankDeficient);
    }
    finish(spec, g, k, forms)
}

/// `{1, x, y} dx / F_y` at an affine point of a plane quartic.
pub fn expand_plane_quartic(spec: &OracleSpec) -> Result<ProblemInput> {
    let OracleModel::PlaneQuartic { quartic } = &spec.model else {
        return Err(Error::InvalidInput("not a plane quartic spec".into()));
    };
    if quartic.nvars() != 3 || quartic.degree() != 4 {
        return Err(Error::InvalidInput("F must be a ternary quartic".into()));
    }
    let k0 = spec.x0.field();
    let line = restrict_to_line(quartic, &spec.x0);
    let emb = adjoin_root(k0, &line, spec.second.as_ref())?;
    let k = emb.field.clone();
    let x = uniformizer_chart(&emb.embed(&spec.x0), spec.precision);
    let y = solve_affine(quartic, &x, &emb.root_image)?;
    let vars = [x.clone(), y.clone(), Series::constant(FieldElement::one(&k), spec.precision)];
    let inv = quartic.partial(1).eval_series(&vars).invert()?.with_twist(1);
    let forms = vec![inv.clone(), inv.mul(&x), inv.mul(&y)];
    finish(spec, 3, k, forms)
}

pub fn generate(spec: &OracleSpec) -> Result<ProblemInput> {
    match spec.model {
        OracleModel::HyperellipticPoly { .. } => expand_hyperelliptic(spec),
        OracleModel::ConicWeighted { .. } => expand_conic_model(spec),
        OracleModel::PlaneQuartic { .. } => expand_plane_quartic(spec),
    }
}

/// Replaces the series by `m · (series)`.
pub fn scramble_basis(input: &ProblemInput, m: &Matrix<Rational>) -> Result<ProblemInput> {
    input.scrambled(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::canonical::{canonical_ideal_component, detect_hyperelliptic, CurveType};

    fn form(n: usize, d: u32, terms: &[(&[u32], i64)]) -> HomogeneousForm {
        HomogeneousForm::from_terms(n, d, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c)))).unwrap()
    }

    fn hyp(f: &[i64], field: &[i64], x0: &[i64], b: i64) -> OracleSpec {
        let k = NumberField::new(field.iter().map(|&c| rat(c)).collect()).unwrap();
        OracleSpec {
            model: OracleModel::HyperellipticPoly { f: UniPoly::new(f.iter().map(|&c| rat(c)).collect()) },
            x0: FieldElement::new(&k, x0.iter().map(|&c| rat(c)).collect()),
            second: None,
            y0: None,
            negate_root: false,
            precision: b,
            scramble: None,
        }
    }

    #[test]
    fn binomial_square_root() {
        let k = NumberField::rationals();
        let c = |x: Rational| FieldElement::from_rational_in(&k, &x);
        let one_plus_q = Series::with_precision(c(rat(0)), 0, vec![c(rat(1)), c(rat(1))], 4, 0);
        let s = newton_sqrt_series(&one_plus_q, &c(rat(1))).unwrap();
        let expected = [rat(1), ratio(1, 2), ratio(-1, 8), ratio(1, 16)];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(s.coeff(k as i64).as_rational().unwrap(), *e);
        }
        assert_eq!(s.abs_prec(), 4);
        let four = Series::with_precision(c(rat(0)), 0, vec![c(rat(4))], 3, 0);
        let s = newton_sqrt_series(&four, &c(rat(-2))).unwrap();
        assert_eq!(s, Series::with_precision(c(rat(0)), 0, vec![c(rat(-2))], 3, 0));
        let vanishing = Series::with_precision(c(rat(0)), 1, vec![c(rat(1))], 3, 0);
        assert!(newton_sqrt_series(&vanishing, &c(rat(0))).is_err());
    }

    #[test]
    fn sextic_at_cube_root_of_two() {
        let input = expand_hyperelliptic(&hyp(&[-2, 0, 0, 0, 0, 0, 1], &[-2, 0, 0, 1], &[0, 1], 20)).unwrap();
        assert_eq!(input.field_degree(), 6);
        let w0 = input.forms[0].coeff(0);
        assert_eq!(w0.times(&w0).as_rational(), Some(ratio(1, 2)));
        let x0 = input.forms[1].coeff(0).divide(&w0).unwrap();
        let diff = input.forms[1].sub(&input.forms[0].mul_scalar(&x0)).unwrap();
        assert_eq!(diff.valuation(), Some(1));
    }

    #[test]
    fn quintic_at_root_two_has_quartic_field() {
        let input = expand_hyperelliptic(&hyp(&[3, 1, 0, 0, 0, 1], &[-2, 0, 1], &[0, 1], 12)).unwrap();
        assert_eq!(input.field_degree(), 4);
        assert_eq!(input.genus, 2);
    }

    #[test]
    fn klein_quartic_is_not_hyperelliptic() {
        let k = NumberField::new(vec![rat(1), rat(1), rat(0), rat(1)]).unwrap();
        let quartic = form(3, 4, &[(&[3, 1, 0], 1), (&[0, 3, 1], 1), (&[1, 0, 3], 1)]);
        let spec = OracleSpec {
            model: OracleModel::PlaneQuartic { quartic },
            x0: FieldElement::one(&k),
            second: Some(FieldElement::generator(&k)),
            y0: None,
            negate_root: false,
            precision: 16,
            scramble: None,
        };
        let input = generate(&spec).unwrap();
        let i2 = canonical_ideal_component(&input, 2).unwrap();
        assert_eq!(i2.basis.len(), 0);
        assert_eq!(detect_hyperelliptic(3, 0).unwrap(), CurveType::Nonhyperelliptic);
        let i4 = canonical_ideal_component(&input, 4).unwrap();
        assert_eq!(i4.basis.len(), 1);
    }

    #[test]
    fn conic_model_gives_rational_basis() {
        let conic = form(3, 2, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        let weight =
            form(3, 4, &[(&[4, 0, 0], 1), (&[0, 4, 0], 2), (&[0, 0, 4], 3), (&[1, 1, 2], 1), (&[2, 0, 2], -1)]);
        let spec = OracleSpec {
            model: OracleModel::ConicWeighted { conic, weight },
            x0: FieldElement::one(&NumberField::rationals()),
            second: None,
            y0: None,
            negate_root: false,
            precision: 20,
            scramble: None,
        };
        let input = generate(&spec).unwrap();
        assert_eq!(input.genus, 3);
        let i2 = canonical_ideal_component(&input, 2).unwrap();
        assert_eq!(i2.basis.len(), 1);
        assert!(i2.basis[0].is_smooth_quadric());
    }

    #[test]
    fn spec_json_round_trip() {
        let mut spec = hyp(&[3, 1, 0, 0, 0, 1], &[-2, 0, 1], &[0, 1], 12);
        spec.scramble = Some(Matrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(0), rat(1)]]));
        spec.negate_root = true;
        assert_eq!(OracleSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}
