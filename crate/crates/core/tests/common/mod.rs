//! Shared fixtures: the oracle corpus, random coordinate changes and an
//! invariant oracle for genus-2 curves written without the library's
//! polynomial code.

#![allow(dead_code)]

pub mod properties;

use curve_recon::arith::{rat, Matrix, Rational};
use curve_recon::canonical::ProblemInput;
use curve_recon::oracle::{generate, OracleSpec};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn term(e: [u32; 3], c: i64) -> Value {
    json!({"exponents": e, "coeff": c.to_string()})
}

pub fn spec(v: Value) -> OracleSpec {
    OracleSpec::from_json(&v).expect("valid oracle spec")
}

/// `y² = x⁶ − 2` at `(2^(1/3), 2^(1/2))`.
pub fn sextic() -> OracleSpec {
    spec(json!({
        "model": {"type": "hyp_poly", "f": ["-2", "0", "0", "0", "0", "0", "1"]},
        "x0": {"field": ["-2", "0", "0", "1"], "coords": ["0", "1", "0"]},
        "B": 86
    }))
}

/// `y² = x⁵ + x + 3` at `x = √2`.
pub fn quintic() -> OracleSpec {
    spec(json!({
        "model": {"type": "hyp_poly", "f": ["3", "1", "0", "0", "0", "1"]},
        "x0": {"field": ["-2", "0", "1"], "coords": ["0", "1"]},
        "B": 86
    }))
}

pub fn sum_of_squares() -> Value {
    json!([term([2, 0, 0], 1), term([0, 2, 0], 1), term([0, 0, 2], 1)])
}

pub fn fixed_quartic() -> Value {
    json!([term([4, 0, 0], 1), term([0, 4, 0], 2), term([0, 0, 4], 3), term([1, 1, 2], 1), term([2, 0, 2], -1)])
}

/// Genus 3 over the pointless conic `a² + b² + c² = 0`, at `a = 1`.
pub fn pointless_conic() -> OracleSpec {
    spec(json!({
        "model": {"type": "conic", "Q": sum_of_squares(), "H": fixed_quartic()},
        "x0": {"field": ["-1", "1"], "coords": ["1"]},
        "B": 105
    }))
}

/// The same quartic over `a² + b² = c²`, which has rational points.
pub fn pointed_conic() -> OracleSpec {
    spec(json!({
        "model": {"type": "conic", "Q": [term([2, 0, 0], 1), term([0, 2, 0], 1), term([0, 0, 2], -1)], "H": fixed_quartic()},
        "x0": {"field": ["-3", "0", "1"], "coords": ["0", "1"]},
        "B": 105
    }))
}

/// `x³y + y³z + z³x` at `x = 1`.
pub fn klein() -> OracleSpec {
    spec(json!({
        "model": {"type": "plane_quartic", "F": [term([3, 1, 0], 1), term([0, 3, 1], 1), term([1, 0, 3], 1)]},
        "x0": {"field": ["-1", "1"], "coords": ["1"]},
        "B": 105
    }))
}

/// `y² = x^(2g+1) + x + 3` at `x = √2`, at precision `b`.
pub fn hyperelliptic_of_genus(g: usize, b: i64) -> OracleSpec {
    let mut f = vec!["0".to_string(); 2 * g + 2];
    f[0] = "3".into();
    f[1] = "1".into();
    f[2 * g + 1] = "1".into();
    spec(json!({
        "model": {"type": "hyp_poly", "f": f},
        "x0": {"field": ["-2", "0", "1"], "coords": ["0", "1"]},
        "B": b
    }))
}

/// The round-trip corpus, each at `B = 19g + 48`.
pub fn corpus() -> Vec<(&'static str, OracleSpec)> {
    vec![("sextic", sextic()), ("quintic", quintic()), ("pointless conic", pointless_conic()), ("klein", klein())]
}

pub fn input(spec: &OracleSpec) -> ProblemInput {
    generate(spec).expect("oracle expansion")
}

/// Invertible `n × n` matrices with small integer entries.
pub fn random_invertible(n: usize, seed: u64, count: usize) -> Vec<Matrix<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect();
        let m = Matrix::from_rows_with(rat(0), rows);
        if !m.determinant().expect("square").is_zero() {
            out.push(m);
        }
    }
    out
}

/// A binary form `Σ c[k] x^k y^(n−k)`.
#[derive(Clone, Debug)]
struct Binary(Vec<Rational>);

impl Binary {
    fn order(&self) -> usize {
        self.0.len() - 1
    }

    fn dx(&self) -> Self {
        if self.order() == 0 {
            return Binary(vec![Rational::zero()]);
        }
        Binary((1..self.0.len()).map(|k| &self.0[k] * rat(k as i64)).collect())
    }

    fn dy(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Binary(vec![Rational::zero()]);
        }
        Binary((0..n).map(|k| &self.0[k] * rat((n - k) as i64)).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Binary(c)
    }

    fn add_scaled(&mut self, o: &Self, s: &Rational) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b * s;
        }
    }

    fn derive(&self, nx: usize, ny: usize) -> Self {
        let mut f = self.clone();
        for _ in 0..nx {
            f = f.dx();
        }
        for _ in 0..ny {
            f = f.dy();
        }
        f
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// The `k`-th transvectant, unnormalized.
fn transvectant(f: &Binary, g: &Binary, k: usize) -> Binary {
    let mut out = Binary(vec![Rational::zero(); f.order() + g.order() - 2 * k + 1]);
    for i in 0..=k {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let term = f.derive(k - i, i).mul(&g.derive(i, k - i));
        out.add_scaled(&term, &rat(sign * binomial(k, i)));
    }
    out
}

/// Clebsch's invariants `A, B, C, D` of the binary sextic `y⁶ f(x/y)`, of
/// degrees 2, 4, 6, 10 in the coefficients.
pub fn clebsch_invariants(f: &[Rational]) -> [Rational; 4] {
    assert!(f.len() <= 7, "at most a sextic");
    let mut c = f.to_vec();
    c.resize(7, Rational::zero());
    let f = Binary(c);
    let i = transvectant(&f, &f, 4);
    let delta = transvectant(&i, &i, 2);
    let y1 = transvectant(&f, &i, 4);
    let y2 = transvectant(&i, &y1, 2);
    let y3 = transvectant(&i, &y2, 2);
    let scalar = |b: Binary| {
        assert_eq!(b.order(), 0);
        b.0[0].clone()
    };
    [
        scalar(transvectant(&f, &f, 6)),
        scalar(transvectant(&i, &i, 4)),
        scalar(transvectant(&i, &delta, 4)),
        scalar(transvectant(&y3, &y1, 2)),
    ]
}

fn power(x: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// Whether two invariant vectors agree as points of weighted projective
/// space with weights 1, 2, 3, 5 over an algebraic closure.
pub fn same_weighted_point(a: &[Rational; 4], b: &[Rational; 4]) -> bool {
    const W: [u32; 4] = [1, 2, 3, 5];
    if a.iter().zip(b).any(|(x, y)| x.is_zero() != y.is_zero()) || a.iter().all(Zero::is_zero) {
        return false;
    }
    (0..4).all(|i| (0..4).all(|j| power(&a[i], W[j]) * power(&b[j], W[i]) == power(&b[i], W[j]) * power(&a[j], W[i])))
}

/// Whether two genus-2 polynomials define curves isomorphic over `ℚ̄`.
pub fn igusa_equivalent(f: &[Rational], g: &[Rational]) -> bool {
    same_weighted_point(&clebsch_invariants(f), &clebsch_invariants(g))
}

/// `(cx + d)⁶ f((ax + b)/(cx + d))` by direct expansion.
pub fn mobius(f: &[Rational], [a, b, c, d]: [i64; 4]) -> Vec<Rational> {
    let lin = |p: i64, q: i64| vec![rat(q), rat(p)];
    let mul = |x: &[Rational], y: &[Rational]| {
        let mut out = vec![Rational::zero(); x.len() + y.len() - 1];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                out[i + j] += u * v;
            }
        }
        out
    };
    let mut total = vec![Rational::zero(); 7];
    for (k, coeff) in f.iter().enumerate() {
        let mut term = vec![coeff.clone()];
        for _ in 0..k {
            term = mul(&term, &lin(a, b));
        }
        for _ in k..6 {
            term = mul(&term, &lin(c, d));
        }
        for (i, t) in term.into_iter().enumerate() {
            total[i] += t;
        }
    }
    total
}
