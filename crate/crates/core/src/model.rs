//! Output models and the data needed to check them against the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{common_denominator, rat, strip_small_squares, Matrix, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::forms::HomogeneousForm;
use crate::json;

/// `y² = f(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassModel {
    pub f: UniPoly<Rational>,
}

/// `Q(a,b,c) = 0`, `y² = H(a,b,c)` in weighted projective space.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicModel {
    pub conic: HomogeneousForm,
    pub weight: HomogeneousForm,
}

/// How the model's coordinates are expanded from the sections `∂₀, ∂₁, ∂₂`
/// and the function `y` that the pipeline computes from the input.
///
/// The plane coordinates are `frame · (∂₀, ∂₁, ∂₂)`; for a Weierstrass model
/// the coordinate `x` is `x_num(∂) / x_den(∂)`; in both cases the model's `y`
/// is `y · y_num(∂) / y_den(∂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub frame: Option<Matrix<Rational>>,
    pub x: Option<(HomogeneousForm, HomogeneousForm)>,
    pub y: (HomogeneousForm, HomogeneousForm),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveModel {
    Nonhyperelliptic { genus: usize, generators: Vec<HomogeneousForm> },
    Weierstrass { genus: usize, model: WeierstrassModel, certificate: Option<Certificate> },
    Conic { genus: usize, model: ConicModel, certificate: Option<Certificate> },
}

impl CurveModel {
    pub fn branch(&self) -> &'static str {
        match self {
            Self::Nonhyperelliptic { .. } => "nonhyperelliptic",
            Self::Weierstrass { .. } => "hyperelliptic_poly",
            Self::Conic { .. } => "hyperelliptic_conic",
        }
    }

    pub fn genus(&self) -> usize {
        match self {
            Self::Nonhyperelliptic { genus, .. } | Self::Weierstrass { genus, .. } | Self::Conic { genus, .. } => {
                *genus
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("branch".into(), json!(self.branch()));
        m.insert("genus".into(), json!(self.genus()));
        let cert = match self {
            Self::Nonhyperelliptic { generators, .. } => {
                m.insert("generators".into(), Value::Array(generators.iter().map(json::form).collect()));
                None
            }
            Self::Weierstrass { model, certificate, .. } => {
                m.insert("f".into(), json::poly(&model.f));
                certificate.as_ref()
            }
            Self::Conic { model, certificate, .. } => {
                m.insert("Q".into(), json::form(&model.conic));
                m.insert("H".into(), json::form(&model.weight));
                certificate.as_ref()
            }
        };
        if let Some(c) = cert {
            m.insert("certificate".into(), c.to_json());
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let genus = json::get_i64(v, "genus")?;
        let genus = usize::try_from(genus).map_err(|_| Error::InvalidInput("negative genus".into()))?;
        let certificate = v.get("certificate").map(Certificate::from_json).transpose()?;
        match json::get(v, "branch")?.as_str().unwrap_or_default() {
            "nonhyperelliptic" => {
                let gens = json::get(v, "generators")?
                    .as_array()
                    .ok_or_else(|| Error::InvalidInput("generators must be a list".into()))?;
                let generators = gens.iter().map(|f| json::parse_form(f, None)).collect::<Result<_>>()?;
                Ok(Self::Nonhyperelliptic { genus, generators })
            }
            "hyperelliptic_poly" => {
                let f = UniPoly::new(json::parse_rats(json::get(v, "f")?)?);
                Ok(Self::Weierstrass { genus, model: WeierstrassModel { f }, certificate })
            }
            "hyperelliptic_conic" => {
                let conic = json::parse_form(json::get(v, "Q")?, Some((3, 2)))?;
                let weight = json::parse_form(json::get(v, "H")?, Some((3, genus as u32 + 1)))?;
                Ok(Self::Conic { genus, model: ConicModel { conic, weight }, certificate })
            }
            other => Err(Error::InvalidInput(format!("unknown branch {other:?}"))),
        }
    }
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        if let Some(f) = &self.frame {
            m.insert("frame".into(), Value::Array(f.rows().iter().map(|r| json::rationals(r)).collect()));
        }
        if let Some((n, d)) = &self.x {
            m.insert("x".into(), json!({"num": json::form(n), "den": json::form(d)}));
        }
        m.insert("y".into(), json!({"num": json::form(&self.y.0), "den": json::form(&self.y.1)}));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let pair = |p: &Value| -> Result<(HomogeneousForm, HomogeneousForm)> {
            Ok((json::parse_form(json::get(p, "num")?, None)?, json::parse_form(json::get(p, "den")?, None)?))
        };
        let frame = match v.get("frame") {
            None => None,
            Some(rows) => {
                let rows = rows.as_array().ok_or_else(|| Error::InvalidInput("frame must be a matrix".into()))?;
                let rows = rows.iter().map(json::parse_rats).collect::<Result<Vec<_>>>()?;
                if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
                    return Err(Error::InvalidInput("frame must be 3 x 3".into()));
                }
                Some(Matrix::from_rows_with(rat(0), rows))
            }
        };
        Ok(Self { frame, x: v.get("x").map(pair).transpose()?, y: pair(json::get(v, "y")?)? })
    }
}

/// A square `r²` such that `r² · c` has integer entries with no small square
/// factor in their content. Returns `r`.
pub fn square_normalizer(c: &[Rational]) -> Rational {
    let den = common_denominator(c);
    let content = c
        .iter()
        .map(|x| (x * Rational::from_integer(den.clone() * den.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    if content.is_zero() {
        return Rational::one();
    }
    let (_, root) = strip_small_squares(&content, 10_000);
    Rational::new(den, root)
}

/// `Σ p_k · s1^k · s2^(degree - k)`.
pub fn homogenize_in(
    p: &UniPoly<Rational>,
    degree: usize,
    s1: &HomogeneousForm,
    s2: &HomogeneousForm,
) -> HomogeneousForm {
    let n = s1.nvars();
    let mut acc = HomogeneousForm::zero(n, s1.degree() * degree as u32);
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&s1.pow(k as u32).mul(&s2.pow((degree - k) as u32)).scale(c));
    }
    acc
}
