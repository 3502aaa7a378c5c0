//! The kernel-algebra property suites, shared by the property tests and the
//! acceptance report.

use std::sync::Arc;

use curve_recon::arith::linalg::{kernel_q, rank_q};
use curve_recon::arith::{
    rat, AlgebraElement, EtaleAlgebra, FieldElement, Matrix, NumberField, Rational, Scalar, UniPoly,
};
use curve_recon::series::Series;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;

fn sqrt2() -> Arc<NumberField> {
    NumberField::new(vec![rat(-2), rat(0), rat(1)]).unwrap()
}

fn element(k: &Arc<NumberField>, c: &(i64, i64)) -> FieldElement {
    FieldElement::new(k, vec![rat(c.0), rat(c.1)])
}

fn poly(k: &Arc<NumberField>, cs: &[(i64, i64)]) -> UniPoly<FieldElement> {
    UniPoly::from_coeffs(FieldElement::zero(k), cs.iter().map(|c| element(k, c)).collect())
}

fn pair() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, -6i64..=6)
}

/// A polynomial of exact degree `1..=max` over `ℚ(√2)`.
fn nonconstant(max: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec(pair(), 1..=max).prop_map(|mut v| {
        v.push((1, 0));
        v
    })
}

fn divides(d: &UniPoly<FieldElement>, p: &UniPoly<FieldElement>) -> bool {
    p.div_rem(d).unwrap().1.is_zero()
}

fn series(k: &Arc<NumberField>, start: i64, cs: &[(i64, i64)], prec: i64) -> Series<FieldElement> {
    Series::with_precision(FieldElement::zero(k), start, cs.iter().map(|c| element(k, c)).collect(), prec, 0)
}

/// Equal up to the smaller of the two precisions.
fn agree(a: &Series<FieldElement>, b: &Series<FieldElement>) -> bool {
    a.sub(b).unwrap().is_zero_to_precision()
}

fn coeffs_strategy() -> impl Strategy<Value = (i64, Vec<(i64, i64)>)> {
    (-3i64..=3, prop::collection::vec(pair(), 1..8))
}

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() })
}

fn check<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

pub fn gcd_divisibility() -> Result<(), String> {
    check((nonconstant(2), nonconstant(3), nonconstant(3)), |(c, p, q)| {
        let k = sqrt2();
        let (c, p, q) = (poly(&k, &c), poly(&k, &p), poly(&k, &q));
        let a = c.mul(&p);
        let b = c.mul(&q);
        let g = a.gcd(&b).unwrap();
        prop_assert!(divides(&g, &a));
        prop_assert!(divides(&g, &b));
        prop_assert!(divides(&c, &g));
        prop_assert!(g.leading().unwrap().is_one());
        Ok(())
    })
}

pub fn squarefree_reassembly() -> Result<(), String> {
    let lead = pair().prop_filter("nonzero", |c| *c != (0, 0));
    check((prop::collection::vec(nonconstant(2), 1..=3), lead), |(factors, lead)| {
        let k = sqrt2();
        let mut p = UniPoly::constant(element(&k, &lead));
        for (i, f) in factors.iter().enumerate() {
            p = p.mul(&poly(&k, f).pow(i + 1));
        }
        let parts = p.squarefree_decompose().unwrap();
        let mut product = UniPoly::constant(p.leading().unwrap().clone());
        for (f, m) in &parts {
            prop_assert!(f.is_squarefree().unwrap());
            prop_assert!(f.leading().unwrap().is_one());
            product = product.mul(&f.pow(*m));
        }
        prop_assert_eq!(product, p);
        for (i, (f, _)) in parts.iter().enumerate() {
            for (g, _) in &parts[i + 1..] {
                prop_assert_eq!(f.gcd(g).unwrap().degree(), Some(0));
            }
        }
        Ok(())
    })
}

pub fn kernel_annihilation() -> Result<(), String> {
    check((1usize..=5, 1usize..=6, prop::collection::vec(-4i64..=4, 30)), |(rows, cols, entries)| {
        let m = Matrix::from_rows_with(
            rat(0),
            (0..rows).map(|i| (0..cols).map(|j| rat(entries[i * cols + j])).collect()).collect(),
        );
        let kernel = kernel_q(&m);
        prop_assert_eq!(kernel.len(), cols - rank_q(&m));
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == rat(0)));
        }
        if !kernel.is_empty() {
            let basis = Matrix::from_rows_with(rat(0), kernel.clone());
            prop_assert_eq!(rank_q(&basis), kernel.len());
        }
        Ok(())
    })
}

pub fn series_ring_axioms() -> Result<(), String> {
    check((coeffs_strategy(), coeffs_strategy(), coeffs_strategy()), |(a, b, c)| {
        let k = sqrt2();
        let s = |(v, cs): &(i64, Vec<(i64, i64)>)| series(&k, *v, cs, v + 8);
        let (a, b, c) = (s(&a), s(&b), s(&c));
        prop_assert!(agree(&a.mul(&b), &b.mul(&a)));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(agree(&a.mul(&b.add(&c).unwrap()), &a.mul(&b).add(&a.mul(&c)).unwrap()));
        prop_assert!(agree(&a.add(&b).unwrap().add(&c).unwrap(), &a.add(&b.add(&c).unwrap()).unwrap()));
        let one = Series::constant(FieldElement::one(&k), 20);
        prop_assert!(agree(&a.mul(&one), &a));
        prop_assert!(a.add(&a.neg()).unwrap().is_zero_to_precision());
        Ok(())
    })
}

pub fn leibniz_rule() -> Result<(), String> {
    check((coeffs_strategy(), coeffs_strategy()), |(a, b)| {
        let k = sqrt2();
        let s = |(v, cs): &(i64, Vec<(i64, i64)>)| series(&k, *v, cs, v + 8);
        let (a, b) = (s(&a), s(&b));
        let lhs = a.mul(&b).derivative().unwrap();
        let rhs = a.derivative().unwrap().mul(&b).add(&a.mul(&b.derivative().unwrap())).unwrap();
        prop_assert!(agree(&lhs, &rhs));
        Ok(())
    })
}

pub fn trace_linearity() -> Result<(), String> {
    let vecs = || prop::collection::vec(pair(), 4);
    check((nonconstant(3), vecs(), vecs(), pair(), pair()), |(modulus, x, y, alpha, beta)| {
        let k = sqrt2();
        let alg = EtaleAlgebra::new(&k, modulus.iter().map(|c| element(&k, c)).collect()).unwrap();
        let n = alg.rank();
        let elem = |v: &[(i64, i64)]| AlgebraElement::new(&alg, v[..n].iter().map(|c| element(&k, c)).collect());
        let (x, y) = (elem(&x), elem(&y));
        let (alpha, beta) = (element(&k, &alpha), element(&k, &beta));
        let combo = AlgebraElement::from_base(&alg, alpha.clone())
            .times(&x)
            .plus(&AlgebraElement::from_base(&alg, beta.clone()).times(&y));
        let expected = alpha.times(&x.trace_to_base()).plus(&beta.times(&y.trace_to_base()));
        prop_assert_eq!(combo.trace_to_base(), expected);
        let one = AlgebraElement::from_base(&alg, FieldElement::one(&k));
        let rank = FieldElement::from_rational_in(&k, &Rational::from_integer((n as i64).into()));
        prop_assert_eq!(one.trace_to_base(), rank);
        Ok(())
    })
}

pub type Suite = fn() -> Result<(), String>;

/// Every suite by name.
pub fn all() -> Vec<(&'static str, Suite)> {
    vec![
        ("poly_gcd divisibility", gcd_divisibility),
        ("squarefree reassembly", squarefree_reassembly),
        ("kernel annihilation", kernel_annihilation),
        ("series ring axioms", series_ring_axioms),
        ("Leibniz rule", leibniz_rule),
        ("trace linearity", trace_linearity),
    ]
}
