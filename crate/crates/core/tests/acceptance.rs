//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the report is printed even when output is captured.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use curve_recon::arith::linalg::rank_q;
use curve_recon::arith::{rat, Matrix, Rational};
use curve_recon::canonical::{canonical_ideal_component, monomial_count, ProblemInput};
use curve_recon::forms::{monomials, HomogeneousForm};
use curve_recon::hyper::{
    step1_ordered_basis, step2_trace_sections, step3_find_conic, step4_h_series, step5_express_h, step7_parity_split,
    verify,
};
use curve_recon::model::CurveModel;
use curve_recon::pipeline::{reconstruct, ReconstructOptions, RunReport};
use curve_recon::precision::{minimum_b, Budget};
use num_traits::Zero;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn weierstrass_f(model: &CurveModel) -> Result<Vec<Rational>, String> {
    match model {
        CurveModel::Weierstrass { model, .. } => Ok(model.f.coeffs().to_vec()),
        other => Err(format!("expected a Weierstrass model, got {}", other.branch())),
    }
}

fn run(input: &ProblemInput) -> Result<RunReport, String> {
    reconstruct(input, &ReconstructOptions::default()).map_err(|e| e.to_string())
}

fn verified(input: &ProblemInput, model: &CurveModel) -> Result<(), String> {
    let v = verify(input, model).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    ensure(failed.is_empty(), format!("verification failed: {failed:?}"))
}

/// Rank of degree-`d` `forms` together with `q · S_{d−2}`.
fn rank_with_multiples(d: u32, forms: &[HomogeneousForm], q: &HomogeneousForm) -> usize {
    let n = q.nvars();
    let cofactor_degree = d - q.degree();
    let mut rows: Vec<Vec<Rational>> = monomials(n, cofactor_degree)
        .into_iter()
        .map(|e| {
            let m = HomogeneousForm::from_terms(n, cofactor_degree, [(e, rat(1))]).expect("monomial");
            q.mul(&m).coeff_vector()
        })
        .collect();
    rows.extend(forms.iter().map(HomogeneousForm::coeff_vector));
    rank_q(&Matrix::from_rows_with(rat(0), rows))
}

/// Whether `a ≡ c·b (mod q)` for some rational `c ≠ 0`, with `a` nonzero mod `q`.
fn proportional_mod(a: &HomogeneousForm, b: &HomogeneousForm, q: &HomogeneousForm) -> bool {
    let d = b.degree();
    let ideal = rank_with_multiples(d, &[], q);
    let with_b = rank_with_multiples(d, std::slice::from_ref(b), q);
    with_b > ideal
        && rank_with_multiples(d, std::slice::from_ref(a), q) == with_b
        && rank_with_multiples(d, &[a.clone(), b.clone()], q) == with_b
}

/// Determinant of the symmetric matrix of a ternary quadric, times 8.
fn quadric_discriminant(q: &HomogeneousForm) -> Rational {
    let c = |e: [u32; 3]| q.coeff(&e);
    let sym = |i: usize, j: usize| {
        let mut e = [0u32; 3];
        e[i] += 1;
        e[j] += 1;
        if i == j {
            c(e) * rat(2)
        } else {
            c(e)
        }
    };
    let m: Vec<Vec<Rational>> = (0..3).map(|i| (0..3).map(|j| sym(i, j)).collect()).collect();
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn budget_identity() -> Outcome {
    for g in 2..=17 {
        let b = minimum_b(g);
        ensure(b == 19 * g + 48, format!("minimum B for g = {g} is {b}"))?;
        let budget = Budget::new(g, b);
        ensure(budget.step5_admissible(), format!("step 5 not admissible at g = {g}"))?;
        ensure(b - 11 * g - 23 == budget.f_hg, format!("step 5 budget is not tight at g = {g}"))?;
        ensure(!Budget::new(g, b - 1).step5_admissible(), format!("B − 1 still admissible at g = {g}"))?;
    }
    Ok("B = 19g + 48 is exactly admissible for g = 2..17".into())
}

fn quadric_dimensions() -> Outcome {
    let mut dims = Vec::new();
    for g in 3..=7usize {
        let input = input(&hyperelliptic_of_genus(g, 4 * g as i64));
        let dim = canonical_ideal_component(&input, 2).map_err(|e| e.to_string())?.basis.len();
        let expected = (g - 1) * (g - 2) / 2;
        ensure(dim == expected, format!("g = {g}: dim I2 = {dim}, expected {expected}"))?;
        dims.push(dim.to_string());
    }
    let klein = canonical_ideal_component(&input(&klein()), 2).map_err(|e| e.to_string())?.basis.len();
    ensure(klein == 0, format!("Klein quartic: dim I2 = {klein}"))?;
    Ok(format!("dim I2 = {} for g = 3..7, Klein quartic 0", dims.join(", ")))
}

fn sextic_round_trip(reports: &mut Vec<(&'static str, RunReport)>) -> Outcome {
    let input = input(&sextic());
    let start = Instant::now();
    let report = run(&input)?;
    verified(&input, &report.model)?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(report.branch() == "hyperelliptic_poly", format!("branch {}", report.branch()))?;
    let f = weierstrass_f(&report.model)?;
    ensure(matches!(f.len(), 6 | 7), format!("model degree {}", f.len() - 1))?;
    let source: Vec<Rational> = [-2, 0, 0, 0, 0, 0, 1].iter().map(|&c| rat(c)).collect();
    ensure(igusa_equivalent(&f, &source), "model is not isomorphic to y^2 = x^6 - 2")?;
    ensure(elapsed < 60.0, format!("took {elapsed:.1} s"))?;
    reports.push(("sextic", report));
    Ok(format!("separable degree-{} model, verified in {elapsed:.1} s", f.len() - 1))
}

fn quintic_invariants(reports: &mut Vec<(&'static str, RunReport)>) -> Outcome {
    let input = input(&quintic());
    let report = run(&input)?;
    verified(&input, &report.model)?;
    let f = weierstrass_f(&report.model)?;
    let source: Vec<Rational> = [3, 1, 0, 0, 0, 1].iter().map(|&c| rat(c)).collect();
    ensure(igusa_equivalent(&f, &source), "Igusa invariants differ")?;
    reports.push(("quintic", report));
    Ok("Igusa invariants of the output match y^2 = x^5 + x + 3".into())
}

fn conic_branch(reports: &mut Vec<(&'static str, RunReport)>) -> Outcome {
    let input = input(&pointless_conic());
    let start = Instant::now();
    let mut state = step1_ordered_basis(&input).map_err(|e| e.to_string())?;
    let steps = (|| {
        step2_trace_sections(&mut state)?;
        let q = step3_find_conic(&mut state)?;
        step4_h_series(&mut state)?;
        let (f, g) = step5_express_h(&mut state)?;
        let split = step7_parity_split(&mut state)?;
        Ok::<_, curve_recon::Error>((q, f, g, split))
    })();
    let (q, f, g, split) = steps.map_err(|e| e.to_string())?;
    ensure(!quadric_discriminant(&q).is_zero(), "Q is singular")?;
    let h = &split.weight;
    let j = &split.square_factor;
    ensure(h.degree() == 4 && j.degree() == 4, format!("deg H = {}, deg J = {}", h.degree(), j.degree()))?;
    // `weight` is the normalized model form r²·(αH mod Q), so the identity
    // holds up to a rational square.
    ensure(proportional_mod(&h.mul(j).mul(j), &f.mul(&g), &q), "FG is not a multiple of H J^2 mod Q")?;

    let report = run(&input)?;
    ensure(report.branch() == "hyperelliptic_conic", format!("branch {}", report.branch()))?;
    let CurveModel::Conic { model, .. } = &report.model else { return Err("no conic model".into()) };
    ensure(!quadric_discriminant(&model.conic).is_zero(), "output conic is singular")?;
    verified(&input, &report.model)?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 120.0, format!("took {elapsed:.1} s"))?;
    reports.push(("pointless conic", report));
    Ok(format!("Q smooth, FG = c H J^2 mod Q with zero remainder, verified in {elapsed:.1} s"))
}

fn klein_components(reports: &mut Vec<(&'static str, RunReport)>) -> Outcome {
    let input = input(&klein());
    let mut dims = Vec::new();
    for d in 2..=4 {
        let basis = canonical_ideal_component(&input, d).map_err(|e| e.to_string())?.basis;
        let rank = rank_q(&input.monomial_evaluation_matrix(d));
        ensure(basis.len() == monomial_count(3, d) - rank, format!("I{d}: basis size disagrees with the rank"))?;
        dims.push(basis.len());
    }
    ensure(dims == [0, 0, 1], format!("dims of I2, I3, I4 are {dims:?}"))?;
    let report = run(&input)?;
    let CurveModel::Nonhyperelliptic { generators, .. } = &report.model else { return Err("wrong branch".into()) };
    ensure(generators.len() == 1 && generators[0].degree() == 4, "expected one quartic generator")?;
    verified(&input, &report.model)?;
    reports.push(("klein", report));
    Ok("dim I2 = dim I3 = 0, I4 spanned by one quartic".into())
}

fn conformance(reports: &[(&'static str, RunReport)]) -> Outcome {
    ensure(reports.len() == corpus().len(), "some corpus runs failed earlier")?;
    let mut rows = 0;
    for (name, report) in reports {
        rows += report.precision_report.len();
        let bad = report.conformance_violations();
        ensure(bad == 0, format!("{name}: {bad} violations"))?;
    }
    Ok(format!("0 violations across {rows} rows at B = 19g + 48"))
}

fn scrambles() -> Outcome {
    let mut runs = 0;
    for (name, spec) in corpus() {
        let source = input(&spec);
        let g2_source = match &spec_model_f(&spec) {
            Some(f) if source.genus == 2 => Some(f.clone()),
            _ => None,
        };
        for (k, m) in random_invertible(source.genus, 7 + source.genus as u64, 5).iter().enumerate() {
            let scrambled = source.scrambled(m).map_err(|e| e.to_string())?;
            let report = run(&scrambled).map_err(|e| format!("{name} #{k}: {e}"))?;
            verified(&scrambled, &report.model).map_err(|e| format!("{name} #{k}: {e}"))?;
            if let Some(f) = &g2_source {
                ensure(
                    igusa_equivalent(&weierstrass_f(&report.model)?, f),
                    format!("{name} #{k}: Igusa invariants changed"),
                )?;
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} scrambled runs verified, genus-2 invariants unchanged"))
}

/// The defining polynomial of a `hyp_poly` oracle spec.
fn spec_model_f(spec: &curve_recon::oracle::OracleSpec) -> Option<Vec<Rational>> {
    let json = spec.to_json();
    let f = json.get("model")?.get("f")?.as_array()?;
    f.iter().map(|c| c.as_str()?.parse().ok()).collect()
}

fn properties() -> Outcome {
    for (name, suite) in common::properties::all() {
        suite().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} suites, {} cases each", common::properties::all().len(), common::properties::CASES))
}

fn main() -> ExitCode {
    let mut reports = Vec::new();
    let mut results: Vec<(&str, Outcome)> = vec![("minimum precision", budget_identity())];
    results.push(("hyperelliptic detection", quadric_dimensions()));
    results.push(("sextic round trip", sextic_round_trip(&mut reports)));
    results.push(("quintic invariants", quintic_invariants(&mut reports)));
    results.push(("pointless conic", conic_branch(&mut reports)));
    results.push(("Klein quartic", klein_components(&mut reports)));
    results.push(("precision conformance", conformance(&reports)));
    results.push(("basis scrambles", scrambles()));
    results.push(("property suites", properties()));

    let mut all = true;
    for (i, (name, outcome)) in results.iter().enumerate() {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                all = false;
                ("FAIL", d)
            }
        };
        println!("criterion {}: {tag} - {name}: {detail}", i + 1);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
