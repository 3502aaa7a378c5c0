//! Odd genus: splitting the zero locus of `FG` on the conic into a reduced
//! part and a doubled part, conic diagonalization, and the passage to
//! `y² = f(x)` when the conic has a known rational point.

use std::sync::Arc;
use std::time::Instant;

use crate::arith::linalg::kernel_q;
use crate::arith::{
    rat, rational_sqrt, strip_small_squares, FieldElement, Matrix, NumberField, Rational, Scalar, UniPoly,
};
use crate::error::{Error, Result};
use crate::forms::{monomials, HomogeneousForm};
use crate::model::{homogenize_in, square_normalizer, ConicModel, WeierstrassModel};

use super::PipelineState;

/// A degree-2 map `P¹ → C` over `E = ℚ(√d)`, as three binary quadratic forms
/// dehomogenized at `t = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    pub field: Arc<NumberField>,
    pub discriminant: Rational,
    pub base_point: Vec<FieldElement>,
    pub coords: [UniPoly<FieldElement>; 3],
    /// `(s : t) = (ℓ₁ : ℓ₂)` inverts the map; the forms have coefficients in `E`.
    pub inverse: (Vec<FieldElement>, Vec<FieldElement>),
}

/// The pullback `u · v²` of the zero locus of `FG`, with `u` reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityDecomposition {
    pub u: UniPoly<FieldElement>,
    pub v: UniPoly<FieldElement>,
    pub parametrization: Parametrization,
    pub discriminant: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OddGenusResult {
    pub weight: HomogeneousForm,
    pub square_factor: HomogeneousForm,
    pub alpha: Rational,
    pub model: ConicModel,
    pub parity: ParityDecomposition,
    /// `(y_num, y_den)` with model `y = y · y_num(∂) / y_den(∂)`.
    pub y_factor: (HomogeneousForm, HomogeneousForm),
    /// Outcome of the projection-from-a-rational-center cross-check, when a
    /// suitable center was found.
    pub projection_check: Option<bool>,
}

/// `form(φ₀(s), φ₁(s), φ₂(s))` for a parametrization by polynomials.
pub fn pullback(form: &HomogeneousForm, phi: &[UniPoly<FieldElement>; 3]) -> UniPoly<FieldElement> {
    let zero = phi[0].zero_elem().clone();
    let powers: Vec<Vec<UniPoly<FieldElement>>> = phi
        .iter()
        .map(|p| {
            let mut v = vec![UniPoly::constant(zero.one_like())];
            for k in 1..=form.degree() as usize {
                v.push(v[k - 1].mul(p));
            }
            v
        })
        .collect();
    let mut acc = UniPoly::zero(zero.clone());
    for (e, c) in form.terms() {
        let mut t = UniPoly::constant(zero.from_rational(c));
        for (i, &k) in e.iter().enumerate() {
            t = t.mul(&powers[i][k as usize]);
        }
        acc = acc.add(&t);
    }
    acc
}

fn bilinear(
    gram: &Matrix<Rational>,
    x: &[UniPoly<FieldElement>],
    y: &[UniPoly<FieldElement>],
) -> UniPoly<FieldElement> {
    let zero = x[0].zero_elem().clone();
    let mut acc = UniPoly::zero(zero.clone());
    for i in 0..3 {
        for j in 0..3 {
            if !gram[(i, j)].is_zero() {
                acc = acc.add(&x[i].mul(&y[j]).mul_scalar(&zero.from_rational(&gram[(i, j)])));
            }
        }
    }
    acc
}

/// Lines through which a point of the conic is sought, as pairs of points
/// spanning them.
const LINES: [([i64; 3], [i64; 3]); 4] =
    [([0, 1, 0], [0, 0, 1]), ([1, 0, 0], [0, 0, 1]), ([1, 0, 0], [0, 1, 0]), ([1, 1, 0], [0, 0, 1])];

/// A point of `C` over `ℚ(√d)` on the first of the lines `a = 0`, `b = 0`,
/// `c = 0`, `a = b` meeting `C` in two distinct points, and the
/// parametrization by lines through it.
pub fn parametrize_conic(q: &HomogeneousForm) -> Result<Parametrization> {
    if !q.is_smooth_quadric() {
        return Err(Error::SingularConic);
    }
    let gram = q.gram();
    let value = |x: &[Rational], y: &[Rational]| -> Rational {
        let mut acc = rat(0);
        for i in 0..3 {
            for j in 0..3 {
                acc += &gram[(i, j)] * &x[i] * &y[j];
            }
        }
        acc
    };
    for (p1, p2) in LINES {
        let p1: Vec<Rational> = p1.iter().map(|&x| rat(x)).collect();
        let p2: Vec<Rational> = p2.iter().map(|&x| rat(x)).collect();
        // Q(u p1 + v p2) = a u² + b uv + c v²
        let a = value(&p1, &p1);
        let b = value(&p1, &p2) * rat(2);
        let c = value(&p2, &p2);
        let disc = &b * &b - rat(4) * &a * &c;
        if disc.is_zero() {
            continue;
        }
        if a.is_zero() {
            return parametrize_from(
                q,
                &NumberField::rationals(),
                rat(1),
                p1.iter().map(|x| FieldElement::from_rational_in(&NumberField::rationals(), x)).collect(),
            );
        }
        let (k, root, d) = match rational_sqrt(&disc) {
            Some(r) => (NumberField::rationals(), None, r),
            None => {
                let den = crate::arith::common_denominator([&disc]);
                let n = (&disc * Rational::from_integer(den.clone() * den.clone())).to_integer();
                let (core, _) = strip_small_squares(&n, 10_000);
                let core = Rational::from_integer(core);
                let k = NumberField::quadratic(&core)?;
                let scale = rational_sqrt(&(&disc / &core)).ok_or_else(|| Error::Internal("square class".into()))?;
                (k, Some(scale), core)
            }
        };
        let sqrt_disc = match &root {
            None => FieldElement::from_rational_in(&k, &d),
            Some(scale) => FieldElement::generator(&k).scale(scale),
        };
        let u = sqrt_disc.minus(&FieldElement::from_rational_in(&k, &b)).scale(&(rat(1) / (rat(2) * &a)));
        let point: Vec<FieldElement> =
            (0..3).map(|i| u.scale(&p1[i]).plus(&FieldElement::from_rational_in(&k, &p2[i]))).collect();
        let disc_class = if root.is_none() { rat(1) } else { d };
        return parametrize_from(q, &k, disc_class, point);
    }
    Err(Error::DegenerateParametrization)
}

fn parametrize_from(
    q: &HomogeneousForm,
    k: &Arc<NumberField>,
    d: Rational,
    p: Vec<FieldElement>,
) -> Result<Parametrization> {
    let zero = FieldElement::zero(k);
    if !q.eval(&p).is_zero() {
        return Err(Error::PointNotOnConic);
    }
    let pivot = (0..3).rev().find(|&i| !p[i].is_zero()).ok_or(Error::DegenerateParametrization)?;
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    // v = s e_i + e_j
    let v: Vec<UniPoly<FieldElement>> = (0..3)
        .map(|i| {
            if i == others[0] {
                UniPoly::x(&zero)
            } else if i == others[1] {
                UniPoly::constant(zero.one_like())
            } else {
                UniPoly::zero(zero.clone())
            }
        })
        .collect();
    let pc: Vec<UniPoly<FieldElement>> = p.iter().map(|x| UniPoly::constant(x.clone())).collect();
    let gram = q.gram();
    let qv = bilinear(&gram, &v, &v);
    let bpv = bilinear(&gram, &pc, &v).mul_scalar(&zero.from_int(2));
    let coords: [UniPoly<FieldElement>; 3] = std::array::from_fn(|i| qv.mul(&pc[i]).sub(&bpv.mul(&v[i])));
    if coords.iter().all(UniPoly::is_zero) || !pullback(q, &coords).is_zero() {
        return Err(Error::DegenerateParametrization);
    }
    let mut l1 = vec![zero.clone(); 3];
    let mut l2 = vec![zero.clone(); 3];
    l1[others[0]] = p[pivot].clone();
    l1[pivot] = p[others[0]].negated();
    l2[others[1]] = p[pivot].clone();
    l2[pivot] = p[others[1]].negated();
    Ok(Parametrization { field: k.clone(), discriminant: d, base_point: p, coords, inverse: (l1, l2) })
}

/// Splits the pullback of `FG` (formal degree `4g + 12`) as `c · u · v²`
/// with `u` squarefree of formal degree `2g + 2`.
pub fn parity_decomposition(fg: &HomogeneousForm, param: &Parametrization, g: usize) -> Result<ParityDecomposition> {
    let p = pullback(fg, &param.coords);
    let formal = 2 * fg.degree() as usize;
    let actual = p.degree().ok_or_else(|| Error::ParityFailure("FG vanishes on the conic".into()))?;
    let at_infinity = formal - actual;
    let zero = p.zero_elem().clone();
    let mut u = UniPoly::constant(zero.one_like());
    let mut v = UniPoly::constant(zero.one_like());
    let mut u_degree = at_infinity % 2;
    let mut v_degree = at_infinity / 2;
    for (factor, mult) in p.squarefree_decompose()? {
        let d = factor.degree().unwrap_or(0);
        if mult % 2 == 1 {
            u = u.mul(&factor);
            u_degree += d;
        }
        v = v.mul(&factor.pow(mult / 2));
        v_degree += d * (mult / 2);
    }
    if u_degree != 2 * g + 2 {
        return Err(Error::ParityFailure(format!("reduced part has degree {u_degree}, expected {}", 2 * g + 2)));
    }
    if v_degree != g + 5 {
        return Err(Error::ParityFailure(format!("doubled part has degree {v_degree}, expected {}", g + 5)));
    }
    Ok(ParityDecomposition { u, v, parametrization: param.clone(), discriminant: param.discriminant.clone() })
}

/// A rational form `A` of the given degree with `A∘φ = λ · target` for some
/// nonzero `λ ∈ E`.
fn form_with_pullback(param: &Parametrization, degree: u32, target: &UniPoly<FieldElement>) -> Result<HomogeneousForm> {
    let k = &param.field;
    let e = k.degree();
    let monos = monomials(3, degree);
    let pulled: Vec<UniPoly<FieldElement>> = monos
        .iter()
        .map(|m| {
            pullback(&HomogeneousForm::from_terms(3, degree, [(m.clone(), rat(1))]).expect("monomial"), &param.coords)
        })
        .collect();
    let mut lambda_cols: Vec<UniPoly<FieldElement>> = Vec::new();
    let mut basis = FieldElement::one(k);
    for _ in 0..e {
        lambda_cols.push(target.mul_scalar(&basis).neg());
        basis = basis.times(&FieldElement::generator(k));
    }
    let cols: Vec<&UniPoly<FieldElement>> = pulled.iter().chain(&lambda_cols).collect();
    let len = 2 * degree as usize + 1;
    let mut rows = Vec::with_capacity(len * e);
    for power in 0..len {
        for coord in 0..e {
            rows.push(cols.iter().map(|c| c.coeff(power).coord(coord)).collect());
        }
    }
    let kernel = kernel_q(&Matrix::from_rows_with(rat(0), rows));
    let n = monos.len();
    let v = kernel
        .iter()
        .find(|v| v[n..].iter().any(|x| !x.is_zero()))
        .ok_or_else(|| Error::ParityFailure("no form cuts out the required divisor".into()))?;
    Ok(HomogeneousForm::from_coeff_vector(3, degree, &v[..n]))
}

/// The centers tried by the projection cross-check.
const CENTERS: [[i64; 3]; 5] = [[1, 2, 3], [2, -1, 5], [3, 5, -2], [-4, 1, 7], [5, 3, 11]];

/// Projects `C` from a rational center not on it and checks that the odd
/// part of the image of `FG = 0` has degree `2g + 2`. `None` when no tried
/// center is off the conic.
pub fn projection_check(q: &HomogeneousForm, fg: &HomogeneousForm, g: usize) -> Result<Option<bool>> {
    let mut any = None;
    for center in CENTERS {
        let p: Vec<Rational> = center.iter().map(|&x| rat(x)).collect();
        if q.eval(&p).is_zero() {
            continue;
        }
        // columns e_0, e_1 and the center: (0:0:1) ↦ center
        let t = Matrix::from_rows(vec![
            vec![rat(1), rat(0), p[0].clone()],
            vec![rat(0), rat(1), p[1].clone()],
            vec![rat(0), rat(0), p[2].clone()],
        ]);
        if t.determinant()?.is_zero() {
            continue;
        }
        let qt = q.substitute_linear(&t);
        let ft = fg.substitute_linear(&t);
        let degree = 2 * fg.degree() as usize;
        let in_c = |f: &HomogeneousForm, a: &Rational| -> UniPoly<Rational> {
            let mut coeffs = vec![rat(0); f.degree() as usize + 1];
            for (e, c) in f.terms() {
                let mut term = c.clone();
                for _ in 0..e[0] {
                    term *= a;
                }
                coeffs[e[2] as usize] += term;
            }
            UniPoly::new(coeffs)
        };
        let xs: Vec<Rational> = (0..=degree as i64).map(rat).collect();
        let ys = xs.iter().map(|a| in_c(&qt, a).resultant(&in_c(&ft, a))).collect::<Result<Vec<_>>>()?;
        let image = UniPoly::interpolate(&xs, &ys);
        let Some(actual) = image.degree() else { continue };
        let mut odd = (degree - actual) % 2;
        for (factor, mult) in image.squarefree_decompose()? {
            if mult % 2 == 1 {
                odd += factor.degree().unwrap_or(0);
            }
        }
        if odd == 2 * g + 2 {
            return Ok(Some(true));
        }
        any = Some(false);
    }
    Ok(any)
}

/// `H` of degree `g + 1` and `J` of degree `(g + 5)/2` with
/// `FG ≡ α H J² (mod Q)`; the model is `y² = α H` after removing squares
/// from `α` and reducing modulo `Q`.
pub fn step7_parity_split(state: &mut PipelineState) -> Result<OddGenusResult> {
    let start = Instant::now();
    let g = state.genus();
    if g.is_multiple_of(2) {
        return Err(Error::Internal("odd-genus step called in even genus".into()));
    }
    let q = state.conic()?.clone();
    let (num, den) = state.ratio.clone().ok_or_else(|| Error::Internal("F, G not computed".into()))?;
    let fg = num.mul(&den);
    let param = parametrize_conic(&q)?;
    let parity = parity_decomposition(&fg, &param, g)?;
    let weight = form_with_pullback(&param, g as u32 + 1, &parity.u)?;
    let square_factor = form_with_pullback(&param, (g as u32 + 5) / 2, &parity.v)?;
    let lhs = pullback(&fg, &param.coords);
    let hw = pullback(&weight, &param.coords);
    let jw = pullback(&square_factor, &param.coords);
    let rhs = hw.mul(&jw).mul(&jw);
    let k = (0..=rhs.degree().unwrap_or(0)).find(|&i| !rhs.coeff(i).is_zero()).ok_or(Error::NoValidSolution)?;
    let alpha = lhs
        .coeff(k)
        .divide(&rhs.coeff(k))?
        .as_rational()
        .ok_or_else(|| Error::ParityFailure("scale factor is not rational".into()))?;
    let difference = fg.sub(&weight.mul(&square_factor).mul(&square_factor).scale(&alpha));
    if !difference.divisible_by_quadric(&q)? {
        return Err(Error::ParityFailure("FG - alpha H J^2 is not a multiple of Q".into()));
    }
    let scaled = weight.scale(&alpha).reduce_mod_quadric(&q)?;
    let r = square_normalizer(&scaled.coeff_vector());
    let h_model = scaled.scale(&(&r * &r));
    let projection = projection_check(&q, &fg, g)?;
    state.time("step7", start);
    Ok(OddGenusResult {
        weight: h_model.clone(),
        square_factor: square_factor.clone(),
        alpha,
        model: ConicModel { conic: q, weight: h_model },
        parity,
        y_factor: (den.scale(&r), square_factor),
        projection_check: projection,
    })
}

/// Symmetric elimination: `change` with `Q∘change⁻¹` diagonal with
/// squarefree integer coefficients.
pub fn diagonalize_conic(q: &HomogeneousForm) -> Result<(HomogeneousForm, Matrix<Rational>)> {
    if q.nvars() != 3 || !q.is_smooth_quadric() {
        return Err(Error::SingularConic);
    }
    let n = 3;
    let mut g = q.gram();
    // columns of t are the new basis vectors: Q(t x') = Σ d_i x'_i²
    let mut t = Matrix::identity(n, &rat(1));
    for i in 0..n {
        if g[(i, i)].is_zero() {
            let j = (i + 1..n).find(|&j| !g[(i, j)].is_zero()).ok_or(Error::SingularConic)?;
            // e_i ← e_i + e_j or e_i - e_j makes the diagonal entry nonzero
            let sign = if (&g[(j, j)] + &g[(i, j)] * rat(2)).is_zero() { rat(-1) } else { rat(1) };
            let mut e = Matrix::identity(n, &rat(1));
            e[(j, i)] = sign;
            g = e.transpose().mul(&g)?.mul(&e)?;
            t = t.mul(&e)?;
        }
        let pivot = g[(i, i)].clone();
        let mut e = Matrix::identity(n, &rat(1));
        for j in i + 1..n {
            e[(i, j)] = -(&g[(i, j)] / &pivot);
        }
        g = e.transpose().mul(&g)?.mul(&e)?;
        t = t.mul(&e)?;
    }
    let mut scale = Matrix::identity(n, &rat(1));
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let r = square_normalizer(&[g[(i, i)].clone()]);
        diag.push(&g[(i, i)] * &r * &r);
        scale[(i, i)] = r;
    }
    let content =
        diag.iter().map(|d| d.to_integer()).fold(num_bigint::BigInt::from(0), |a, b| num_integer::Integer::gcd(&a, &b));
    let t = t.mul(&scale)?;
    let diagonal = q.substitute_linear(&t).scale(&(rat(1) / Rational::from_integer(content)));
    Ok((diagonal, t.inverse()?))
}

/// The Weierstrass model `y² = r² H(φ(s, 1))` obtained by parametrizing the
/// conic from a rational point, with the data to express `s` and the new `y`
/// in the old coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PointReduction {
    pub model: WeierstrassModel,
    /// `s = ℓ₁/ℓ₂` as linear forms in the conic coordinates.
    pub s: (HomogeneousForm, HomogeneousForm),
    /// `y_new = y_conic · num / den`, forms in the conic coordinates.
    pub y_factor: (HomogeneousForm, HomogeneousForm),
}

pub fn reduce_to_p1(model: &ConicModel, point: &[Rational; 3]) -> Result<PointReduction> {
    let q = &model.conic;
    if !q.eval(point).is_zero() {
        return Err(Error::PointNotOnConic);
    }
    let k = NumberField::rationals();
    let p: Vec<FieldElement> = point.iter().map(|x| FieldElement::from_rational_in(&k, x)).collect();
    let param = parametrize_from(q, &k, rat(1), p)?;
    let degree = model.weight.degree() as usize;
    let g = degree - 1;
    let f = pullback(&model.weight, &param.coords).map(rat(0), |c| c.as_rational().expect("rational"));
    let fd = f.degree().unwrap_or(0);
    if !f.is_squarefree()? || (fd != 2 * degree && fd != 2 * degree - 1) {
        return Err(Error::InconsistentInput("weight form is not squarefree on the conic".into()));
    }
    let r = square_normalizer(f.coeffs());
    let f = f.mul_scalar(&(&r * &r));
    let linear = |v: &[FieldElement]| {
        HomogeneousForm::from_coeff_vector(
            3,
            1,
            &v.iter().map(|x| x.as_rational().expect("rational")).collect::<Vec<_>>(),
        )
    };
    let l1 = linear(&param.inverse.0);
    let l2 = linear(&param.inverse.1);
    // coordinates = λ · φ(ℓ₁, ℓ₂); pick one with φ_i(ℓ₁, ℓ₂) nonzero on C
    let half = g.div_ceil(2);
    let (i, phi_i) = (0..3)
        .map(|i| (i, homogenize_in(&param.coords[i].map(rat(0), |c| c.as_rational().expect("rational")), 2, &l1, &l2)))
        .find(|(_, f)| !f.divisible_by_quadric(q).unwrap_or(true))
        .ok_or(Error::DegenerateParametrization)?;
    let xi = HomogeneousForm::variable(3, i);
    let num = phi_i.pow(half as u32).scale(&r);
    let den = xi.pow(half as u32).mul(&l2.pow(g as u32 + 1));
    Ok(PointReduction { model: WeierstrassModel { f }, s: (l1, l2), y_factor: (num, den) })
}
