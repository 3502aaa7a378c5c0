//! From the input expansions to the conic, the function `h` and the ratio
//! `F/G`: everything both genus parities share.

use std::sync::Arc;
use std::time::Instant;

use crate::arith::linalg::kernel_q;
use crate::arith::{AlgebraElement, EtaleAlgebra, FieldElement, Matrix, Scalar};
use crate::canonical::{series_coordinate_matrix, ProblemInput};
use crate::error::{Error, Result};
use crate::forms::{monomial_series, HomogeneousForm};
use crate::precision::{check_conformance, expected_row, Budget, ConformanceResult, ObjectId};
use crate::series::{valuation_staircase, Series};

/// The expansions over one factor of `L ⊗ K` of the reordered basis and of
/// the coordinate `t`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub algebra: Arc<EtaleAlgebra>,
    pub basis: Vec<Series<AlgebraElement>>,
    pub t: Option<Series<AlgebraElement>>,
}

impl Piece {
    fn project(&self, target: &Arc<EtaleAlgebra>) -> Self {
        Self {
            algebra: target.clone(),
            basis: self.basis.iter().map(|s| project_series(s, target)).collect(),
            t: self.t.as_ref().map(|s| project_series(s, target)),
        }
    }
}

fn project_series(s: &Series<AlgebraElement>, target: &Arc<EtaleAlgebra>) -> Series<AlgebraElement> {
    s.map_coeffs(AlgebraElement::zero(target), |c| c.project(target))
}

/// Splits pieces until the series chosen by `pick` has an invertible leading
/// coefficient on each of them.
fn split_until_unit(pieces: Vec<Piece>, pick: impl Fn(&Piece) -> Result<Series<AlgebraElement>>) -> Result<Vec<Piece>> {
    let mut todo = pieces;
    todo.reverse();
    let mut done = Vec::new();
    while let Some(piece) = todo.pop() {
        let s = pick(&piece)?;
        let lead = s.leading().ok_or_else(|| Error::PrecisionExhausted("series vanishes to its precision".into()))?;
        match lead.zero_divisor_factor()? {
            None => done.push(piece),
            Some(factor) => {
                let (a, b) = piece.algebra.split(&factor)?;
                todo.push(piece.project(&b));
                todo.push(piece.project(&a));
            }
        }
    }
    Ok(done)
}

/// Everything computed from one input on the way to a model.
#[derive(Clone, Debug)]
pub struct PipelineState {
    pub input: ProblemInput,
    /// `M` with `ordered = M · input.forms`.
    pub change: Matrix<FieldElement>,
    pub ordered: Vec<Series<FieldElement>>,
    pub pieces: Vec<Piece>,
    pub sections: Vec<Series<FieldElement>>,
    pub conic: Option<HomogeneousForm>,
    pub f_series: Option<Series<FieldElement>>,
    pub y_series: Option<Series<FieldElement>>,
    pub h_series: Option<Series<FieldElement>>,
    pub ratio: Option<(HomogeneousForm, HomogeneousForm)>,
    pub conformance: Vec<ConformanceResult>,
    pub timings: Vec<(String, f64)>,
}

impl PipelineState {
    pub fn genus(&self) -> usize {
        self.input.genus
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.input.genus as i64, self.input.precision)
    }

    pub(crate) fn record<T: Scalar>(&mut self, object: ObjectId, label: impl Into<String>, s: &Series<T>) {
        let row = expected_row(object, self.input.genus as i64, self.input.precision);
        let mut result = check_conformance(&label.into(), &s.report(), &row);
        if i64::from(s.twist()) != row.twist {
            result.violations.push(format!("twist {} differs from expected {}", s.twist(), row.twist));
        }
        self.conformance.push(result);
    }

    pub(crate) fn time(&mut self, stage: &str, since: Instant) {
        self.timings.push((stage.to_string(), since.elapsed().as_secs_f64()));
    }

    pub fn sections(&self) -> Result<&[Series<FieldElement>]> {
        if self.sections.len() == 3 {
            Ok(&self.sections)
        } else {
            Err(Error::Internal("sections not computed".into()))
        }
    }

    pub fn conic(&self) -> Result<&HomogeneousForm> {
        self.conic.as_ref().ok_or_else(|| Error::Internal("conic not computed".into()))
    }

    pub fn h(&self) -> Result<&Series<FieldElement>> {
        self.h_series.as_ref().ok_or_else(|| Error::Internal("h not computed".into()))
    }

    pub fn y(&self) -> Result<&Series<FieldElement>> {
        self.y_series.as_ref().ok_or_else(|| Error::Internal("y not computed".into()))
    }
}

/// Reorders the basis by valuation over `K`, moves the change of basis into
/// the first factor of `L ⊗ K` and forms `t = w''_{g-1} / w''_g`.
pub fn step1_ordered_basis(input: &ProblemInput) -> Result<PipelineState> {
    let start = Instant::now();
    let g = input.genus;
    let k = input.field.clone();
    let (ordered, change) = valuation_staircase(&input.forms)?;
    let alg = EtaleAlgebra::tensor_square(&k)?;
    let lifted: Vec<Series<AlgebraElement>> = input
        .forms
        .iter()
        .map(|w| w.map_coeffs(AlgebraElement::zero(&alg), |c| AlgebraElement::from_base(&alg, c.clone())))
        .collect();
    let to_first_factor = |x: &FieldElement| {
        let coords = x.coords().iter().map(|r| FieldElement::from_rational_in(&k, r)).collect();
        AlgebraElement::new(&alg, coords)
    };
    let basis = (0..g)
        .map(|i| {
            let row: Vec<AlgebraElement> = (0..g).map(|j| to_first_factor(&change[(i, j)])).collect();
            crate::series::linear_combination(&row, &lifted)
        })
        .collect::<Result<Vec<_>>>()?;
    let pieces = split_until_unit(vec![Piece { algebra: alg, basis, t: None }], |p| Ok(p.basis[g - 1].clone()))?;
    let pieces = pieces
        .into_iter()
        .map(|mut p| {
            p.t = Some(p.basis[g - 2].div(&p.basis[g - 1])?.with_twist(0));
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut state = PipelineState {
        input: input.clone(),
        change,
        ordered,
        pieces,
        sections: Vec::new(),
        conic: None,
        f_series: None,
        y_series: None,
        h_series: None,
        ratio: None,
        conformance: Vec::new(),
        timings: Vec::new(),
    };
    for (i, w) in input.forms.iter().enumerate() {
        state.record(ObjectId::Omega, format!("omega[{}]", i + 1), w);
    }
    for (i, w) in state.ordered.clone().iter().enumerate() {
        state.record(ObjectId::OmegaPrime, format!("omega_prime[{}]", i + 1), w);
    }
    for (i, p) in state.pieces.clone().iter().enumerate() {
        state.record(ObjectId::T, format!("t[factor {i}]"), p.t.as_ref().expect("set above"));
    }
    state.time("step1", start);
    Ok(state)
}

/// `Tr(s^j t^i (dt/dq)^(-1)) d/dq` for `i ≤ 2`, `j < [K:ℚ]`; keeps the first
/// three that are independent over `K`.
pub fn step2_trace_sections(state: &mut PipelineState) -> Result<()> {
    let start = Instant::now();
    let ell = state.input.field_degree();
    let t_of = |p: &Piece| p.t.clone().ok_or_else(|| Error::Internal("t not computed".into()));
    let pieces = split_until_unit(std::mem::take(&mut state.pieces), |p| t_of(p)?.derivative())?;
    let k = state.input.field.clone();
    let mut candidates: Vec<Option<Series<FieldElement>>> = vec![None; 3 * ell];
    for (n, p) in pieces.iter().enumerate() {
        let t = t_of(p)?;
        let dt = t.derivative()?;
        let inv_dt = dt.invert()?;
        state.record(ObjectId::Dt, format!("dt[factor {n}]"), &dt);
        let gen = AlgebraElement::generator(&p.algebra);
        let mut t_pow = Series::constant(gen.one_like(), inv_dt.abs_prec() - inv_dt.valuation().unwrap_or(0));
        for i in 0..3 {
            let field = t_pow.mul(&inv_dt);
            state.record(ObjectId::TIDdt, format!("t^{i} d/dt[factor {n}]"), &field);
            let mut lambda = gen.one_like();
            for j in 0..ell {
                let tr = field.mul_scalar(&lambda).trace_to_base();
                let slot = &mut candidates[i * ell + j];
                *slot = Some(match slot.take() {
                    None => tr,
                    Some(acc) => acc.add(&tr)?,
                });
                lambda = lambda.times(&gen);
            }
            t_pow = t_pow.mul(&t);
        }
    }
    state.pieces = pieces;
    let candidates: Vec<Series<FieldElement>> =
        candidates.into_iter().map(|c| c.expect("at least one piece")).collect();
    let lo = candidates.iter().map(Series::start).min().unwrap_or(0);
    let hi = candidates.iter().map(Series::abs_prec).min().unwrap_or(0);
    let zero = FieldElement::zero(&k);
    let mut kept: Vec<Series<FieldElement>> = Vec::new();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for c in &candidates {
        rows.push((lo..hi).map(|e| c.coeff(e)).collect());
        if Matrix::from_rows_with(zero.clone(), rows.clone()).rank()? == rows.len() {
            kept.push(c.clone());
            if kept.len() == 3 {
                break;
            }
        } else {
            rows.pop();
        }
    }
    if kept.len() < 3 {
        return Err(Error::RankDeficient);
    }
    for (i, s) in kept.iter().enumerate() {
        state.record(ObjectId::Partial, format!("partial[{i}]"), s);
    }
    state.sections = kept;
    state.time("step2", start);
    Ok(())
}

/// The conic through `(∂₀ : ∂₁ : ∂₂)`, primitive with positive leading
/// coefficient.
pub fn step3_find_conic(state: &mut PipelineState) -> Result<HomogeneousForm> {
    let start = Instant::now();
    let sections = state.sections()?.to_vec();
    let monos = monomial_series(&sections, 2);
    let lo = monos.iter().map(Series::start).min().unwrap_or(0);
    let hi = monos.iter().map(Series::abs_prec).min().unwrap_or(0);
    let kernel = kernel_q(&series_coordinate_matrix(&monos, lo, hi));
    if kernel.len() != 1 {
        return Err(Error::KernelDimension(kernel.len()));
    }
    let q = HomogeneousForm::from_coeff_vector(3, 2, &kernel[0]).primitive();
    if !q.is_smooth_quadric() {
        return Err(Error::SingularConic);
    }
    let residual = q.eval_series(&sections);
    if !residual.is_zero_as_section(12, state.input.field_degree())? {
        return Err(Error::Internal("conic does not vanish on the sections".into()));
    }
    record_monomials(state, &monos, 2);
    state.conic = Some(q.clone());
    state.time("step3", start);
    Ok(q)
}

fn record_monomials(state: &mut PipelineState, monos: &[Series<FieldElement>], degree: u32) {
    for (e, m) in crate::forms::monomials(3, degree).iter().zip(monos) {
        state.record(ObjectId::MPartials(degree), format!("partial^{e:?}"), m);
    }
}

/// `f = ∂₀/∂₁`, `y = df/ω₁` and `h = y²`, with `ω₁` the first input series.
pub fn step4_h_series(state: &mut PipelineState) -> Result<()> {
    let start = Instant::now();
    let sections = state.sections()?.to_vec();
    let f = sections[0].div(&sections[1])?;
    let df = f.derivative()?;
    let y = df.div(&state.input.forms[0])?;
    let h = y.mul(&y);
    state.record(ObjectId::F, "f", &f);
    state.record(ObjectId::Df, "df", &df);
    state.record(ObjectId::Y, "y", &y);
    state.record(ObjectId::H, "h", &h);
    state.f_series = Some(f);
    state.y_series = Some(y);
    state.h_series = Some(h);
    state.time("step4", start);
    Ok(())
}

/// Forms `F, G` of degree `g + 3` with `F(∂) = h·G(∂)` and `G` not a
/// multiple of the conic: the first such vector of the reduced kernel basis.
pub fn step5_express_h(state: &mut PipelineState) -> Result<(HomogeneousForm, HomogeneousForm)> {
    let start = Instant::now();
    let g = state.genus();
    let degree = (g + 3) as u32;
    let sections = state.sections()?.to_vec();
    let q = state.conic()?.clone();
    let h = state.h()?.clone();
    let monos = monomial_series(&sections, degree);
    record_monomials(state, &monos, degree);
    let hg: Vec<Series<FieldElement>> = monos.iter().map(|m| h.mul(m).neg()).collect();
    let hi = state.budget().f_hg;
    let available = hg.iter().map(Series::abs_prec).min().unwrap_or(0);
    if available < hi {
        return Err(Error::InsufficientPrecision { needed: hi, available });
    }
    let cols: Vec<Series<FieldElement>> = monos.iter().chain(&hg).cloned().collect();
    let lo = cols.iter().map(Series::start).min().unwrap_or(0).min(hi);
    let kernel = kernel_q(&series_coordinate_matrix(&cols, lo, hi));
    let n = monos.len();
    for v in &kernel {
        let num = HomogeneousForm::from_coeff_vector(3, degree, &v[..n]);
        let den = HomogeneousForm::from_coeff_vector(3, degree, &v[n..]);
        if den.divisible_by_quadric(&q)? {
            continue;
        }
        let den_series = den.eval_series(&sections);
        let hgs = h.mul(&den_series);
        let residual = num.eval_series(&sections).sub(&hgs)?;
        if !residual.is_zero_to_precision() {
            return Err(Error::Internal("F - hG does not vanish".into()));
        }
        state.record(ObjectId::HG, "hG", &hgs);
        state.record(ObjectId::FMinusHG, "F - hG", &residual);
        state.ratio = Some((num.clone(), den.clone()));
        state.time("step5", start);
        return Ok((num, den));
    }
    Err(Error::NoValidSolution)
}
