//! The precision ledger: expected valuation ranges and error exponents for
//! every intermediate series of the hyperelliptic pipeline, the precision
//! budget `B = 19g + 48`, and conformance checks of actual series against it.

use serde::Serialize;

use crate::series::PrecisionReport;

/// Intermediate objects whose precision is tracked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectId {
    Omega,
    OmegaPrime,
    T,
    Dt,
    TIDdt,
    Partial,
    /// A form of the given degree evaluated at the three sections.
    MPartials(u32),
    F,
    Df,
    Y,
    H,
    HG,
    FMinusHG,
    Step6Bilinear,
}

impl ObjectId {
    /// Row key in [`TABLE`].
    pub fn key(&self) -> &'static str {
        match self {
            ObjectId::Omega => "omega",
            ObjectId::OmegaPrime => "omega_prime",
            ObjectId::T => "t",
            ObjectId::Dt => "dt",
            ObjectId::TIDdt => "t_i_ddt",
            ObjectId::Partial => "partial_i",
            ObjectId::MPartials(_) => "M_partials",
            ObjectId::F => "f",
            ObjectId::Df => "df",
            ObjectId::Y => "y",
            ObjectId::H => "h",
            ObjectId::HG => "hG",
            ObjectId::FMinusHG => "F_minus_hG",
            ObjectId::Step6Bilinear => "step6_bilinear",
        }
    }

    pub fn name(&self) -> String {
        match self {
            ObjectId::MPartials(d) => format!("M_partials({d})"),
            other => other.key().to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "omega" => ObjectId::Omega,
            "omega_prime" => ObjectId::OmegaPrime,
            "t" => ObjectId::T,
            "dt" => ObjectId::Dt,
            "t_i_ddt" => ObjectId::TIDdt,
            "partial_i" => ObjectId::Partial,
            "f" => ObjectId::F,
            "df" => ObjectId::Df,
            "y" => ObjectId::Y,
            "h" => ObjectId::H,
            "hG" => ObjectId::HG,
            "F_minus_hG" => ObjectId::FMinusHG,
            "step6_bilinear" => ObjectId::Step6Bilinear,
            _ => {
                let d = s.strip_prefix("M_partials(")?.strip_suffix(')')?.parse().ok()?;
                ObjectId::MPartials(d)
            }
        })
    }
}

/// `(b·B + gc·g + dc·d + c) / 2`: every exponent in the table is affine in
/// `B`, `g` and the form degree `d`, with half-integer `g` coefficients in the
/// last row, so coefficients are stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub b: i64,
    pub g: i64,
    pub d: i64,
    pub c: i64,
}

const fn af(b: i64, g: i64, d: i64, c: i64) -> Affine {
    Affine { b, g, d, c }
}

/// Used for an upper valuation bound that the table leaves open.
const UNBOUNDED: Affine = af(0, 0, 0, i64::MAX);

impl Affine {
    pub fn eval(&self, big_b: i64, g: i64, d: i64) -> i64 {
        if self.c == i64::MAX {
            return i64::MAX;
        }
        (self.b * big_b + self.g * g + self.d * d + self.c).div_euclid(2)
    }
}

/// One line of the table, as doubled affine coefficients:
/// `(object, ord_min, ord_max, abs, rel, twist)`, where the twist is itself
/// an affine function of `g` and `d` (again doubled).
type RowData = (&'static str, Affine, Affine, Affine, Option<Affine>, Affine);

/// Literal transcription of the precision table.
pub const TABLE: &[RowData] = &[
    ("omega", af(0, 0, 0, 0), af(0, 4, 0, -4), af(2, 0, 0, 0), Some(af(2, -4, 0, 4)), af(0, 0, 0, 2)),
    ("omega_prime", af(0, 0, 0, 0), af(0, 4, 0, -4), af(2, 0, 0, 0), Some(af(2, -4, 0, 4)), af(0, 0, 0, 2)),
    ("t", af(0, 0, 0, -4), af(0, 0, 0, 4), af(2, -4, 0, 0), Some(af(2, -4, 0, 4)), af(0, 0, 0, 0)),
    ("dt", af(0, 0, 0, -6), af(0, 0, 0, 2), af(2, -4, 0, -2), Some(af(2, -4, 0, -4)), af(0, 0, 0, 2)),
    ("t_i_ddt", af(0, 0, 0, -2), af(0, 0, 0, 6), af(2, -4, 0, -6), Some(af(2, -4, 0, -4)), af(0, 0, 0, -2)),
    ("partial_i", af(0, 0, 0, -2), af(0, 0, 0, 6), af(2, -4, 0, -6), Some(af(2, -4, 0, -12)), af(0, 0, 0, -2)),
    ("M_partials", af(0, 0, -2, 0), af(0, 0, 6, 0), af(2, -4, -2, -4), Some(af(2, -4, -8, -4)), af(0, 0, -2, 0)),
    ("f", af(0, 0, 0, -8), af(0, 0, 0, 8), af(2, -4, 0, -20), Some(af(2, -4, 0, -12)), af(0, 0, 0, 0)),
    ("df", af(0, 0, 0, -10), af(0, 0, 0, 10), af(2, -4, 0, -22), Some(af(2, -4, 0, -32)), af(0, 0, 0, 2)),
    ("y", af(0, -4, 0, -6), af(0, 0, 0, 10), af(2, -8, 0, -38), Some(af(2, -4, 0, -32)), af(0, 0, 0, 0)),
    ("h", af(0, -8, 0, -12), af(0, 0, 0, 20), af(2, -12, 0, -44), Some(af(2, -4, 0, -32)), af(0, 0, 0, 0)),
    ("hG", af(0, -10, 0, -18), af(0, 6, 0, 38), af(2, -22, 0, -46), Some(af(2, -12, 0, -28)), af(0, -2, 0, -6)),
    ("F_minus_hG", af(0, -10, 0, -18), UNBOUNDED, af(2, -22, 0, -46), None, af(0, -2, 0, -6)),
    ("step6_bilinear", af(0, -1, 0, 0), af(0, 7, 0, -4), af(2, -9, 0, -4), Some(af(2, -8, 0, -4)), af(0, -1, 0, 2)),
];

/// Expected behaviour of one intermediate for given `g` and `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrecisionRow {
    pub object: String,
    pub ord_min: i64,
    /// `None` when the table gives no upper bound.
    pub ord_max: Option<i64>,
    pub abs_exponent: i64,
    pub rel_exponent: Option<i64>,
    pub twist: i64,
}

pub fn expected_row(object: ObjectId, g: i64, big_b: i64) -> PrecisionRow {
    let d = match object {
        ObjectId::MPartials(d) => i64::from(d),
        _ => 0,
    };
    let (_, lo, hi, abs, rel, tw) = TABLE.iter().find(|r| r.0 == object.key()).expect("every object has a row");
    let hi = hi.eval(big_b, g, d);
    PrecisionRow {
        object: object.name(),
        ord_min: lo.eval(big_b, g, d),
        ord_max: (hi != i64::MAX).then_some(hi),
        abs_exponent: abs.eval(big_b, g, d),
        rel_exponent: rel.map(|r| r.eval(big_b, g, d)),
        twist: tw.eval(big_b, g, d),
    }
}

/// The precision budget of the full pipeline.
pub fn minimum_b(g: i64) -> i64 {
    19 * g + 48
}

/// Vanishing thresholds: a series of the given kind that is zero below the
/// threshold is exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub g: i64,
    pub b: i64,
    pub f_hg: i64,
    pub step6: i64,
}

impl Budget {
    pub fn new(g: i64, b: i64) -> Self {
        Self { g, b, f_hg: 8 * g + 25, step6: 4 * g - 1 }
    }

    /// Whether the step-5 system can be solved to the certifying precision.
    pub fn step5_admissible(&self) -> bool {
        self.b - 11 * self.g - 23 >= self.f_hg
    }

    /// Whether the step-6 system can be solved to the certifying precision.
    pub fn step6_admissible(&self) -> bool {
        2 * self.b - 9 * self.g - 4 >= 2 * self.step6
    }
}

/// Outcome of comparing an actual series against its row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConformanceResult {
    pub object: String,
    pub label: String,
    pub valuation: Option<i64>,
    pub abs_prec: i64,
    pub expected: PrecisionRow,
    pub violations: Vec<String>,
}

impl ConformanceResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_conformance(label: &str, actual: &PrecisionReport, expected: &PrecisionRow) -> ConformanceResult {
    let mut violations = Vec::new();
    if let Some(v) = actual.valuation {
        let above = expected.ord_max.is_some_and(|m| v > m);
        if v < expected.ord_min || above {
            let hi = expected.ord_max.map_or("inf".to_string(), |m| m.to_string());
            violations.push(format!("valuation {v} outside [{}, {hi}]", expected.ord_min));
        }
    }
    if actual.abs_prec < expected.abs_exponent {
        violations.push(format!("absolute precision {} below {}", actual.abs_prec, expected.abs_exponent));
    }
    ConformanceResult {
        object: expected.object.clone(),
        label: label.to_string(),
        valuation: actual.valuation,
        abs_prec: actual.abs_prec,
        expected: expected.clone(),
        violations,
    }
}

/// All rows for `g` and `B`, with the form-degree rows for `d = 2` and
/// `d = g + 3`.
pub fn precision_table(g: i64, big_b: i64) -> Vec<PrecisionRow> {
    let mut ids = vec![
        ObjectId::Omega,
        ObjectId::OmegaPrime,
        ObjectId::T,
        ObjectId::Dt,
        ObjectId::TIDdt,
        ObjectId::Partial,
        ObjectId::MPartials(2),
        ObjectId::MPartials(g as u32 + 3),
        ObjectId::F,
        ObjectId::Df,
        ObjectId::Y,
        ObjectId::H,
        ObjectId::HG,
        ObjectId::FMinusHG,
    ];
    if g % 2 == 0 {
        ids.push(ObjectId::Step6Bilinear);
    }
    ids.into_iter().map(|id| expected_row(id, g, big_b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        let h = expected_row(ObjectId::H, 3, 105);
        assert_eq!((h.ord_min, h.ord_max, h.abs_exponent, h.rel_exponent), (-18, Some(10), 65, Some(83)));
        let m = expected_row(ObjectId::MPartials(2), 3, 105);
        assert_eq!((m.ord_min, m.ord_max, m.abs_exponent), (-2, Some(6), 95));
        let w = expected_row(ObjectId::Omega, 2, 86);
        assert_eq!((w.ord_min, w.ord_max, w.abs_exponent), (0, Some(2), 86));
    }

    #[test]
    fn budget_identity() {
        for g in 2..=17 {
            let b = minimum_b(g);
            assert_eq!(b - 11 * g - 23, 8 * g + 25);
            assert!(Budget::new(g, b).step5_admissible());
            assert!(!Budget::new(g, b - 1).step5_admissible());
        }
    }

    #[test]
    fn conformance_examples() {
        let row = expected_row(ObjectId::Omega, 2, 86);
        let ok = PrecisionReport { valuation: Some(0), abs_prec: 86, rel_prec: Some(86) };
        assert!(check_conformance("w1", &ok, &row).passed());
        let t = expected_row(ObjectId::T, 2, 86);
        let bad = PrecisionReport { valuation: Some(3), abs_prec: 80, rel_prec: Some(77) };
        assert_eq!(check_conformance("t", &bad, &t).violations.len(), 2);
    }

    #[test]
    fn names_round_trip() {
        for id in [ObjectId::H, ObjectId::MPartials(6), ObjectId::Step6Bilinear, ObjectId::TIDdt] {
            assert_eq!(ObjectId::parse(&id.name()), Some(id));
        }
    }
}
