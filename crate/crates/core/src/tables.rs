//! Printed classification rows, used as a comparison baseline for regenerated tables.

use std::fmt;
use std::str::FromStr;

use crate::cocycles::{
    decompose, equivalent, format_theta, is_cocycle, m_to_theta, residual, residual_symbolic, theta_to_m, Cocycle,
    ExtensionParams,
};
use crate::linalg::{rank, solve, Field, RatFunc};
use crate::polynomials::{parse_poly_in, MPoly, UPoly, Var};
use crate::scalars::Scalar;
use crate::solver::{delta_km_scan, delta_m0_scan, h1_poly_native, invm_classes, parametric_scan};

/// Parameters as printed: either a whole line α − β = offset or a single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamSpec {
    Line(i64),
    Point(&'static str, &'static str),
}

impl ParamSpec {
    pub fn point(&self) -> Option<(Scalar, Scalar)> {
        match self {
            ParamSpec::Line(_) => None,
            ParamSpec::Point(a, b) => Some((a.parse().expect("table scalar"), b.parse().expect("table scalar"))),
        }
    }

    /// Whether (α, β) lies in the printed parameter set.
    pub fn contains(&self, alpha: &Scalar, beta: &Scalar) -> bool {
        match self.point() {
            None => {
                let ParamSpec::Line(c) = self else { unreachable!() };
                (alpha - beta) == Scalar::int(*c)
            }
            Some((a, b)) => &a == alpha && &b == beta,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ParamSpec::Line(c) => format!("alpha - beta = {c}"),
            ParamSpec::Point(a, b) => format!("alpha = {a}, beta = {b}"),
        }
    }
}

/// A row in θ-coordinates: coefficients c_0, c_1, … of `k^{n−i} θ^{(i)}` (may involve `alpha`).
#[derive(Debug, Clone, Copy)]
pub struct ThetaRow {
    pub degree: u32,
    pub params: ParamSpec,
    pub coeffs: &'static [&'static str],
}

impl ThetaRow {
    pub fn theta_coeffs(&self) -> Vec<MPoly> {
        let mut out: Vec<MPoly> =
            self.coeffs.iter().map(|c| parse_poly_in(c, &[Var::Alpha]).expect("table coefficient")).collect();
        out.resize(self.degree as usize, MPoly::zero());
        out
    }

    /// M-coordinate polynomial, with `alpha` left symbolic for line rows.
    pub fn m_poly(&self) -> MPoly {
        theta_to_m(&self.theta_coeffs(), self.degree)
    }
}

/// A row in M-coordinates.
#[derive(Debug, Clone, Copy)]
pub struct MRow {
    pub degree: u32,
    pub params: ParamSpec,
    pub poly: &'static str,
}

impl MRow {
    pub fn m_poly(&self) -> MPoly {
        parse_poly_in(self.poly, &[Var::K, Var::M, Var::Alpha]).expect("table polynomial")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonPolyShape {
    /// δ_{k+m,0}·f(k)
    DeltaKM,
    /// δ_{m,0}·μ(k)
    DeltaM0,
    /// m⁻¹·μ(k,m) + p(k,m)
    InvM,
}

#[derive(Debug, Clone, Copy)]
pub struct NonPolyRow {
    pub alpha: i64,
    pub beta: i64,
    pub integral_gamma: bool,
    pub shape: NonPolyShape,
    pub main: &'static str,
    /// Polynomial summand (only for `InvM`).
    pub extra: &'static str,
}

impl NonPolyRow {
    pub fn cocycle(&self) -> Cocycle {
        let kpoly = |t: &str| parse_poly_in(t, &[Var::K]).expect("table polynomial");
        let upoly = |t: &str| kpoly(t).to_upoly(Var::K).expect("k only");
        match self.shape {
            NonPolyShape::DeltaKM => Cocycle::delta_km(upoly(self.main)),
            NonPolyShape::DeltaM0 => Cocycle::delta_m0(upoly(self.main)),
            NonPolyShape::InvM => {
                let extra = parse_poly_in(self.extra, &[Var::K, Var::M]).expect("table polynomial");
                Cocycle::inv_m(kpoly(self.main), UPoly::zero()).add(&Cocycle::poly(extra))
            }
        }
    }

    /// Parameters used for checks; rows valid for non-integral γ are checked at γ = 1/2.
    pub fn params(&self) -> ExtensionParams {
        let gamma = if self.integral_gamma { Scalar::zero() } else { Scalar::frac(1, 2) };
        ExtensionParams::new(Scalar::int(self.alpha), Scalar::int(self.beta), gamma)
    }

    pub fn label(&self) -> String {
        match self.shape {
            NonPolyShape::DeltaKM => format!("delta(k+m,0)*{}", self.main),
            NonPolyShape::DeltaM0 => format!("delta(m,0)*{}", self.main),
            NonPolyShape::InvM if self.extra == "0" => format!("m^-1*{}", self.main),
            NonPolyShape::InvM => format!("m^-1*{} + {}", self.main, self.extra),
        }
    }
}

const SEVEN_PLUS: ParamSpec = ParamSpec::Point("(7+sqrt(19))/2", "-(5+sqrt(19))/2");
const SEVEN_MINUS: ParamSpec = ParamSpec::Point("(7-sqrt(19))/2", "-(5-sqrt(19))/2");

pub const THETA_TABLE: [ThetaRow; 10] = [
    ThetaRow { degree: 1, params: ParamSpec::Line(0), coeffs: &["1"] },
    ThetaRow { degree: 2, params: ParamSpec::Point("1", "0"), coeffs: &["0", "1"] },
    ThetaRow { degree: 2, params: ParamSpec::Point("1", "0"), coeffs: &["1"] },
    ThetaRow { degree: 3, params: ParamSpec::Line(2), coeffs: &["1", "-2"] },
    ThetaRow { degree: 4, params: ParamSpec::Line(3), coeffs: &["0", "1", "-2"] },
    ThetaRow { degree: 5, params: ParamSpec::Line(4), coeffs: &["alpha - 1", "-1", "-12", "24"] },
    ThetaRow { degree: 6, params: ParamSpec::Point("1", "-4"), coeffs: &["0", "2", "10", "60", "-120"] },
    ThetaRow { degree: 6, params: ParamSpec::Point("5", "0"), coeffs: &["12", "-22", "10", "60", "-120"] },
    ThetaRow {
        degree: 7,
        params: SEVEN_PLUS,
        coeffs: &["-(22+sqrt(19))/4", "(31+7*sqrt(19))/2", "-(25+7*sqrt(19))", "30", "120", "-240"],
    },
    ThetaRow {
        degree: 7,
        params: SEVEN_MINUS,
        coeffs: &["-(22-sqrt(19))/4", "(31-7*sqrt(19))/2", "-(25-7*sqrt(19))", "30", "120", "-240"],
    },
];

pub const M_TABLE: [MRow; 10] = [
    MRow { degree: 1, params: ParamSpec::Line(0), poly: "k" },
    MRow { degree: 2, params: ParamSpec::Point("1", "0"), poly: "k*m" },
    MRow { degree: 2, params: ParamSpec::Point("1", "0"), poly: "k^2" },
    MRow { degree: 3, params: ParamSpec::Line(2), poly: "k^3 + 2*k^2*m" },
    MRow { degree: 4, params: ParamSpec::Line(3), poly: "k^3*m + k^2*m^2" },
    MRow { degree: 5, params: ParamSpec::Line(4), poly: "(alpha - 4)*k^5 + k^4*m - 6*k^3*m^2 - 4*k^2*m^3" },
    MRow {
        degree: 6,
        params: ParamSpec::Point("1", "-4"),
        poly: "12*k^6 + 22*k^5*m + 5*k^4*m^2 - 10*k^3*m^3 - 5*k^2*m^4",
    },
    MRow { degree: 6, params: ParamSpec::Point("5", "0"), poly: "2*k^5*m - 5*k^4*m^2 + 10*k^3*m^3 + 5*k^2*m^4" },
    MRow {
        degree: 7,
        params: SEVEN_PLUS,
        poly: "-(22+sqrt(19))/4*k^7 - (31+7*sqrt(19))/2*k^6*m - (25+7*sqrt(19))/2*k^5*m^2 - 5*k^4*m^3 + 5*k^3*m^4 + 2*k^2*m^5",
    },
    MRow {
        degree: 7,
        params: SEVEN_MINUS,
        poly: "-(22-sqrt(19))/4*k^7 - (31-7*sqrt(19))/2*k^6*m - (25-7*sqrt(19))/2*k^5*m^2 - 5*k^4*m^3 + 5*k^3*m^4 + 2*k^2*m^5",
    },
];

/// The degree-6 classes as assigned in the running text, which pairs them with the
/// opposite α compared to `THETA_TABLE`.
pub const TEXT_DEGREE6: [ThetaRow; 2] = [
    ThetaRow { degree: 6, params: ParamSpec::Point("5", "0"), coeffs: &["0", "1", "5", "30", "-60"] },
    ThetaRow { degree: 6, params: ParamSpec::Point("1", "-4"), coeffs: &["6", "-11", "5", "30", "-60"] },
];

const fn np(alpha: i64, beta: i64, integral_gamma: bool, shape: NonPolyShape, main: &'static str, extra: &'static str) -> NonPolyRow {
    NonPolyRow { alpha, beta, integral_gamma, shape, main, extra }
}

pub const NONPOLY_TABLE: [NonPolyRow; 10] = [
    np(0, -1, true, NonPolyShape::DeltaKM, "k^3", "0"),
    np(0, 0, true, NonPolyShape::DeltaKM, "k^2", "0"),
    np(0, 1, false, NonPolyShape::InvM, "k", "0"),
    np(0, 1, true, NonPolyShape::DeltaKM, "1", "0"),
    np(0, 1, true, NonPolyShape::DeltaKM, "k", "0"),
    np(0, 1, true, NonPolyShape::DeltaM0, "k", "0"),
    np(1, 1, false, NonPolyShape::InvM, "k^2", "0"),
    np(1, 1, true, NonPolyShape::DeltaM0, "k^2", "0"),
    np(2, 1, false, NonPolyShape::InvM, "k^3", "k^2"),
    np(2, 1, true, NonPolyShape::DeltaM0, "k^3", "0"),
];

/// Printed θ-rows at (n, α, β), specialized to M-coordinates.
pub fn printed_theta_rows_at(n: u32, alpha: &Scalar, beta: &Scalar) -> Vec<MPoly> {
    THETA_TABLE
        .iter()
        .filter(|r| r.degree == n && r.params.contains(alpha, beta))
        .map(|r| r.m_poly().specialize(&[(Var::Alpha, alpha.clone())]))
        .collect()
}

/// Printed M-rows at (n, α, β).
pub fn printed_m_rows_at(n: u32, alpha: &Scalar, beta: &Scalar) -> Vec<MPoly> {
    M_TABLE
        .iter()
        .filter(|r| r.degree == n && r.params.contains(alpha, beta))
        .map(|r| r.m_poly().specialize(&[(Var::Alpha, alpha.clone())]))
        .collect()
}

/// Highest degree covered by the polynomial tables.
pub const MAX_TABLE_DEGREE: u32 = 7;
/// Degree bound for the δ scans behind the non-polynomial table.
pub const MAX_DELTA_DEGREE: u32 = 12;

const LINE_SAMPLES: [(i64, i64); 3] = [(-3, 2), (1, 3), (11, 5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    PolyTheta,
    PolyM,
    NonPoly,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::PolyTheta => "poly-theta",
            TableKind::PolyM => "poly-M",
            TableKind::NonPoly => "nonpoly",
        }
    }
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "poly-theta" => Ok(TableKind::PolyTheta),
            "poly-M" | "poly-m" => Ok(TableKind::PolyM),
            "nonpoly" => Ok(TableKind::NonPoly),
            other => Err(format!("unknown table '{other}' (expected poly-theta, poly-M or nonpoly)")),
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of a regenerated row: a whole line α − β = c or a single point.
#[derive(Debug, Clone, PartialEq)]
pub enum RowParams {
    Line(i64),
    Point(Scalar, Scalar),
}

impl RowParams {
    pub fn alpha_label(&self) -> String {
        match self {
            RowParams::Line(_) => "any".into(),
            RowParams::Point(a, _) => a.to_string(),
        }
    }

    pub fn beta_label(&self) -> String {
        match self {
            RowParams::Line(0) => "alpha".into(),
            RowParams::Line(c) if *c > 0 => format!("alpha - {c}"),
            RowParams::Line(c) => format!("alpha + {}", -c),
            RowParams::Point(_, b) => b.to_string(),
        }
    }

    fn matches(&self, spec: &ParamSpec) -> bool {
        match (self, spec) {
            (RowParams::Line(a), ParamSpec::Line(b)) => a == b,
            (RowParams::Point(a, b), ParamSpec::Point(..)) => spec.point() == Some((a.clone(), b.clone())),
            _ => false,
        }
    }

    fn same_alpha(&self, spec: &ParamSpec) -> bool {
        match (self, spec.point()) {
            (RowParams::Point(a, _), Some((pa, _))) => *a == pa,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaClass {
    Any,
    Integral,
    NonIntegral,
}

impl GammaClass {
    pub fn label(self) -> &'static str {
        match self {
            GammaClass::Any => "any",
            GammaClass::Integral => "integer",
            GammaClass::NonIntegral => "non-integer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    /// Equivalent to the printed row at the same parameters.
    Matches,
    /// A printed row exists here but is not equivalent.
    Differs,
    /// No printed row at these parameters.
    Unprinted,
}

impl RowStatus {
    pub fn label(self) -> &'static str {
        match self {
            RowStatus::Matches => "matches",
            RowStatus::Differs => "differs",
            RowStatus::Unprinted => "not printed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegeneratedRow {
    pub degree: u32,
    pub params: RowParams,
    pub gamma: GammaClass,
    /// Class representative; on a line the coefficients may involve `alpha`.
    pub class: Cocycle,
    pub status: RowStatus,
    /// The printed row this one was compared with.
    pub printed: Option<String>,
    pub notes: Vec<String>,
}

impl RegeneratedRow {
    /// Concrete instances: the point itself, or three sample points on a line.
    pub fn instances(&self) -> Vec<(Cocycle, ExtensionParams)> {
        let gamma = match self.gamma {
            GammaClass::NonIntegral => Scalar::frac(1, 2),
            _ => Scalar::zero(),
        };
        match &self.params {
            RowParams::Point(a, b) => {
                vec![(self.class.clone(), ExtensionParams::new(a.clone(), b.clone(), gamma))]
            }
            RowParams::Line(c) => LINE_SAMPLES
                .iter()
                .map(|&(p, q)| {
                    let a = Scalar::frac(p, q);
                    let params = ExtensionParams::new(a.clone(), &a - &Scalar::int(*c), gamma.clone());
                    (specialize_alpha(&self.class, &a), params)
                })
                .collect(),
        }
    }

    pub fn class_text(&self, kind: TableKind) -> String {
        class_text(&self.class, self.degree, kind)
    }
}

/// A printed row that failed to match, with what the solver found instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub degree: u32,
    pub params: String,
    pub printed: String,
    pub finding: String,
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub kind: TableKind,
    pub rows: Vec<RegeneratedRow>,
    pub discrepancies: Vec<Discrepancy>,
}

impl TableReport {
    pub fn has_discrepancies(&self) -> bool {
        !self.discrepancies.is_empty()
    }
}

fn specialize_alpha(c: &Cocycle, a: &Scalar) -> Cocycle {
    Cocycle { poly: c.poly.specialize(&[(Var::Alpha, a.clone())]), ..c.clone() }
}

fn class_text(c: &Cocycle, n: u32, kind: TableKind) -> String {
    match kind {
        TableKind::PolyTheta => match m_to_theta(&c.poly, n) {
            Some(t) => format_theta(&t, n),
            None => format_km(&c.poly),
        },
        TableKind::PolyM => format_km(&c.poly),
        TableKind::NonPoly => c.to_string(),
    }
}

/// Renders a polynomial grouped by monomials k^a m^b (descending in k), with coefficients in α.
pub fn format_km(p: &MPoly) -> String {
    let groups = p.coefficients_in(&[Var::K, Var::M]);
    let (ki, mi) = (Var::K as usize, Var::M as usize);
    let mut keys: Vec<_> = groups.keys().copied().collect();
    keys.sort_by(|x, y| (y[ki], y[mi]).cmp(&(x[ki], x[mi])));
    let mut parts = Vec::new();
    for e in keys {
        let pow = |name: &str, d: u32| match d {
            0 => None,
            1 => Some(name.to_string()),
            _ => Some(format!("{name}^{d}")),
        };
        let mono: Vec<String> = [pow("k", e[ki]), pow("m", e[mi])].into_iter().flatten().collect();
        let mono = mono.join("*");
        let c = &groups[&e];
        let text = match (c.constant_value(), mono.is_empty()) {
            (Some(v), true) => v.to_string(),
            (Some(v), false) if v.is_one() => mono,
            (Some(v), false) if (-&v).is_one() => format!("-{mono}"),
            (Some(v), false) if v.is_rational() => format!("{v}*{mono}"),
            (_, true) => format!("({c})"),
            _ => format!("({c})*{mono}"),
        };
        parts.push(text);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {p}")),
        }
    }
    out
}

struct Printed {
    degree: u32,
    params: ParamSpec,
    /// M-coordinates, `alpha` symbolic on lines.
    poly: MPoly,
    text: String,
    /// Assignment made in the running text rather than in a table.
    from_text: bool,
}

fn printed_poly(kind: TableKind) -> Vec<Printed> {
    match kind {
        TableKind::PolyTheta => THETA_TABLE
            .iter()
            .map(|r| (r, false))
            .chain(TEXT_DEGREE6.iter().map(|r| (r, true)))
            .map(|(r, from_text)| Printed {
                degree: r.degree,
                params: r.params,
                poly: r.m_poly(),
                text: format_theta(&r.theta_coeffs(), r.degree),
                from_text,
            })
            .collect(),
        TableKind::PolyM => M_TABLE
            .iter()
            .map(|r| Printed {
                degree: r.degree,
                params: r.params,
                poly: r.m_poly(),
                text: format_km(&r.m_poly()),
                from_text: false,
            })
            .collect(),
        TableKind::NonPoly => Vec::new(),
    }
}

/// Parameters carrying classes, with the solver's own representatives.
struct Slot {
    degree: u32,
    params: RowParams,
    native: Vec<Cocycle>,
    notes: Vec<String>,
}

fn poly_slots(seed: u64, discrepancies: &mut Vec<Discrepancy>) -> Vec<Slot> {
    let mut slots = Vec::new();
    for n in 1..=MAX_TABLE_DEGREE {
        let scan = parametric_scan(n, seed);
        for line in &scan.lines {
            let line_label = format!("alpha - beta = {}", line.offset);
            for u in &line.unresolved {
                discrepancies.push(Discrepancy {
                    degree: n,
                    params: line_label.clone(),
                    printed: String::new(),
                    finding: format!("unresolved rank-drop factor {}", u.display_in("alpha")),
                });
            }
            if line.generic_h1 > 0 {
                let mut notes: Vec<String> = line
                    .special
                    .iter()
                    .map(|sp| format!("h1 = {} at alpha = {}", sp.report.h1_dim, sp.params.alpha))
                    .collect();
                for a in &line.rep_trivial_at {
                    notes.push(format!("representative is a coboundary at alpha = {a}"));
                }
                slots.push(Slot {
                    degree: n,
                    params: RowParams::Line(line.offset),
                    native: line.generic_reps.iter().cloned().map(Cocycle::poly).collect(),
                    notes,
                });
                continue;
            }
            for sp in &line.special {
                if sp.report.h1_dim == 0 {
                    continue;
                }
                slots.push(Slot {
                    degree: n,
                    params: RowParams::Point(sp.params.alpha.clone(), sp.params.beta.clone()),
                    native: h1_poly_native(n, &sp.params).representatives,
                    notes: Vec::new(),
                });
            }
        }
    }
    slots
}

fn is_nonzero_vec(v: &[Scalar]) -> bool {
    v.iter().any(|x| !x.is_zero())
}

/// Coordinates of a printed row over the solver's representatives (modulo coboundaries), or a
/// description of why it is not a class there.
fn printed_coordinates(p: &Printed, slot: &Slot) -> Result<Vec<Scalar>, String> {
    let n = slot.degree;
    let cap = n as usize;
    let class_at = |params: &ExtensionParams, alpha: &Scalar| -> Result<Vec<Scalar>, String> {
        let tau = Cocycle::poly(p.poly.specialize(&[(Var::Alpha, alpha.clone())]));
        let basis: Vec<Cocycle> = slot.native.iter().map(|c| specialize_alpha(c, alpha)).collect();
        if !is_cocycle(&tau, params) {
            return Err(format!("not a cocycle at {params}"));
        }
        if basis.len() == 1 {
            return match equivalent(&tau, &basis[0], params, cap) {
                Ok(Some((c, _))) => Ok(vec![c]),
                Ok(None) if decompose(&tau, &[], params, cap).ok().flatten().is_some() => {
                    Err(format!("a coboundary at {params}"))
                }
                Ok(None) => Err(format!("not equivalent to the solver class at {params}")),
                Err(e) => Err(e.to_string()),
            };
        }
        match decompose(&tau, &basis, params, cap) {
            Ok(Some((x, _))) if is_nonzero_vec(&x) => Ok(x),
            Ok(Some(_)) => Err(format!("a coboundary at {params}")),
            Ok(None) => Err(format!("outside the solver's class space at {params}")),
            Err(e) => Err(e.to_string()),
        }
    };
    match &slot.params {
        RowParams::Point(a, b) => class_at(&ExtensionParams::integral(a.clone(), b.clone()), a),
        RowParams::Line(c) => {
            let alpha = MPoly::var(Var::Alpha);
            let beta = &alpha - &MPoly::int(*c);
            if !residual_symbolic(&p.poly, &alpha, &beta).is_zero() {
                return Err(format!("not a cocycle on alpha - beta = {c} (symbolic residual is nonzero)"));
            }
            let mut first = None;
            for &(num, den) in &LINE_SAMPLES {
                let a = Scalar::frac(num, den);
                let params = ExtensionParams::integral(a.clone(), &a - &Scalar::int(*c));
                let x = class_at(&params, &a)?;
                first.get_or_insert(x);
            }
            Ok(first.expect("samples"))
        }
    }
}

fn slot_label(slot: &Slot) -> String {
    match &slot.params {
        RowParams::Line(c) => format!("alpha - beta = {c}"),
        RowParams::Point(a, b) => format!("alpha = {a}, beta = {b}"),
    }
}

fn km_exps(a: u32, b: u32) -> crate::polynomials::Exps {
    let mut e = [0; 6];
    e[Var::K as usize] = a;
    e[Var::M as usize] = b;
    e
}

/// Coordinates in the table's system (θ or M), ordered by increasing power of k, as
/// polynomials in α.
fn table_coords(p: &MPoly, n: u32, kind: TableKind) -> Option<Vec<UPoly>> {
    let coeffs: Vec<MPoly> = match kind {
        TableKind::PolyTheta => m_to_theta(p, n)?.into_iter().rev().collect(),
        _ => {
            let groups = p.coefficients_in(&[Var::K, Var::M]);
            (1..=n).map(|a| groups.get(&km_exps(a, n - a)).cloned().unwrap_or_default()).collect()
        }
    };
    coeffs.iter().map(|c| c.to_upoly(Var::Alpha)).collect()
}

fn from_table_coords(v: &[UPoly], n: u32, kind: TableKind) -> MPoly {
    let coeffs: Vec<MPoly> = v.iter().map(|c| c.to_mpoly(Var::Alpha)).collect();
    match kind {
        TableKind::PolyTheta => theta_to_m(&coeffs.into_iter().rev().collect::<Vec<_>>(), n),
        _ => {
            let mut out = MPoly::zero();
            for (i, c) in coeffs.iter().enumerate() {
                let a = i as u32 + 1;
                out = out + c.mul_monomial(&km_exps(a, n - a));
            }
            out
        }
    }
}

/// Coboundary of g = x^{n−1} at the slot's parameters (α symbolic on a line).
fn slot_coboundary(slot: &Slot) -> MPoly {
    let (alpha, beta) = match &slot.params {
        RowParams::Line(c) => (MPoly::var(Var::Alpha), &MPoly::var(Var::Alpha) - &MPoly::int(*c)),
        RowParams::Point(a, b) => (MPoly::constant(a.clone()), MPoly::constant(b.clone())),
    };
    let (k, m) = (MPoly::var(Var::K), MPoly::var(Var::M));
    let d = slot.degree - 1;
    &(&(&m + &(&alpha * &k)) * &m.pow(d)) - &(&(&m + &(&beta * &k)) * &(&m + &k).pow(d))
}

/// The element of span(rep, coboundary) agreeing with the printed row on its lowest-k nonzero
/// coordinates, when that element has polynomial coefficients.
fn printed_gauge(rep: &MPoly, printed: &MPoly, slot: &Slot, kind: TableKind) -> Option<MPoly> {
    let n = slot.degree;
    let b = slot_coboundary(slot);
    let cols: Vec<Vec<UPoly>> =
        [rep, &b].into_iter().filter(|p| !p.is_zero()).map(|p| table_coords(p, n, kind)).collect::<Option<_>>()?;
    let target = table_coords(printed, n, kind)?;
    let picks: Vec<usize> = (0..n as usize).filter(|&i| !target[i].is_zero()).take(cols.len()).collect();
    if picks.len() < cols.len() {
        return None;
    }
    let a: Vec<Vec<RatFunc>> =
        picks.iter().map(|&i| cols.iter().map(|c| RatFunc::poly(c[i].clone())).collect()).collect();
    let rhs: Vec<RatFunc> = picks.iter().map(|&i| RatFunc::poly(target[i].clone())).collect();
    let x = solve(&a, &rhs, cols.len())?;
    if x[0].is_zero() {
        return None;
    }
    let mut combo = Vec::new();
    for i in 0..n as usize {
        let mut acc = <RatFunc as Field>::zero();
        for (xj, c) in x.iter().zip(&cols) {
            acc = acc.fadd(&xj.fmul(&RatFunc::poly(c[i].clone())));
        }
        if acc.den().degree() != Some(0) {
            return None;
        }
        combo.push(acc.num().scale(&acc.den().lead().inv().ok()?));
    }
    Some(from_table_coords(&combo, n, kind))
}

fn compare_slot(kind: TableKind, slot: &Slot, printed: &[&Printed], discrepancies: &mut Vec<Discrepancy>) -> Vec<RegeneratedRow> {
    let n = slot.degree;
    let mut pending: Vec<Discrepancy> = Vec::new();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    let mut rows = Vec::new();
    let mut failed: Vec<&Printed> = Vec::new();
    let row = |class: Cocycle, status, printed: Option<String>| RegeneratedRow {
        degree: n,
        params: slot.params.clone(),
        gamma: GammaClass::Any,
        class,
        status,
        printed,
        notes: slot.notes.clone(),
    };
    for p in printed {
        let exact = slot.params.matches(&p.params);
        let mut finding = match printed_coordinates(p, slot) {
            Ok(x) => {
                let mut trial = chosen.clone();
                trial.push(x.clone());
                if p.from_text {
                    None
                } else if rank(&trial) > rank(&chosen) {
                    chosen = trial;
                    if exact {
                        rows.push(row(Cocycle::poly(p.poly.clone()), RowStatus::Matches, Some(p.text.clone())));
                        continue;
                    }
                    Some("equivalent to the solver class, but printed at different parameters".to_string())
                } else {
                    Some("duplicates the class of another printed row".to_string())
                }
            }
            Err(e) => Some(format!("printed row is {e}")),
        };
        if !exact {
            let (pa, pb) = p.params.point().expect("fallback only for points");
            let h = h1_poly_native(n, &ExtensionParams::integral(pa, pb)).h1_dim;
            let moved = format!("no class at the printed parameters (h1 = {h}); solver finds one at {}", slot_label(slot));
            finding = Some(match finding {
                Some(f) => format!("{moved}; there the {f}"),
                None => moved,
            });
        }
        if let Some(f) = finding {
            let source = if p.from_text { "text assignment" } else { "table row" };
            pending.push(Discrepancy {
                degree: n,
                params: p.params.label(),
                printed: format!("{} ({source})", p.text),
                finding: f,
            });
            if !p.from_text {
                failed.push(p);
            }
        }
    }
    let mut failed = failed.into_iter();
    for (i, c) in slot.native.iter().enumerate() {
        let mut unit = vec![Scalar::zero(); slot.native.len()];
        unit[i] = Scalar::one();
        let mut trial = chosen.clone();
        trial.push(unit);
        if rank(&trial) > rank(&chosen) {
            chosen = trial;
            rows.push(match failed.next() {
                Some(p) => {
                    let mut r = row(c.clone(), RowStatus::Differs, Some(p.text.clone()));
                    let gauged = (slot.native.len() == 1).then(|| printed_gauge(&c.poly, &p.poly, slot, kind)).flatten();
                    if let Some(g) = gauged {
                        r.class = Cocycle::poly(g);
                        r.notes.push("shown in the printed row's normalization".into());
                    }
                    r
                }
                None => row(c.clone(), RowStatus::Unprinted, None),
            });
        }
    }
    let solver_text = rows.iter().map(|r| r.class_text(kind)).collect::<Vec<_>>().join("; ");
    for mut d in pending {
        d.finding = format!("{}; solver class: {solver_text}", d.finding);
        discrepancies.push(d);
    }
    rows
}

fn regenerate_poly(kind: TableKind, seed: u64) -> TableReport {
    let mut discrepancies = Vec::new();
    let slots = poly_slots(seed, &mut discrepancies);
    let printed = printed_poly(kind);
    let mut assigned: Vec<Vec<&Printed>> = slots.iter().map(|_| Vec::new()).collect();
    for p in &printed {
        let exact = slots.iter().position(|s| s.degree == p.degree && s.params.matches(&p.params));
        let place = exact.or_else(|| slots.iter().position(|s| s.degree == p.degree && s.params.same_alpha(&p.params)));
        match place {
            Some(i) => assigned[i].push(p),
            None => {
                let finding = match p.params.point() {
                    Some((a, b)) => {
                        let h = h1_poly_native(p.degree, &ExtensionParams::integral(a, b)).h1_dim;
                        format!("no class found by the solver at these parameters (h1 = {h})")
                    }
                    None => "no class found by the solver on this line".to_string(),
                };
                discrepancies.push(Discrepancy {
                    degree: p.degree,
                    params: p.params.label(),
                    printed: p.text.clone(),
                    finding,
                });
            }
        }
    }
    let mut rows = Vec::new();
    for (slot, ps) in slots.iter().zip(&assigned) {
        rows.extend(compare_slot(kind, slot, ps, &mut discrepancies));
    }
    TableReport { kind, rows, discrepancies }
}

fn shape_rank(c: &Cocycle) -> u8 {
    if !c.inv_m.is_zero() || !c.inv_mk.is_zero() {
        0
    } else if !c.delta_km.is_zero() {
        1
    } else {
        2
    }
}

fn regenerate_nonpoly() -> TableReport {
    let mut rows: Vec<RegeneratedRow> = Vec::new();
    let new_row = |params: &ExtensionParams, class: Cocycle| RegeneratedRow {
        degree: class.degree(),
        params: RowParams::Point(params.alpha.clone(), params.beta.clone()),
        gamma: if params.gamma_integral() { GammaClass::Integral } else { GammaClass::NonIntegral },
        class,
        status: RowStatus::Unprinted,
        printed: None,
        notes: Vec::new(),
    };
    let params_of = |r: &RegeneratedRow| r.instances().remove(0).1;
    for c in delta_km_scan(MAX_DELTA_DEGREE) {
        rows.push(new_row(&c.params, c.cocycle));
    }
    for c in delta_m0_scan(MAX_DELTA_DEGREE) {
        let cap = c.degree as usize + 1;
        let merged = rows.iter_mut().find(|r| {
            params_of(r) == c.params && matches!(equivalent(&c.cocycle, &r.class, &c.params, cap), Ok(Some(_)))
        });
        match merged {
            Some(r) => r.notes.push(format!("equivalent to {}", c.cocycle)),
            None => rows.push(new_row(&c.params, c.cocycle)),
        }
    }
    for c in invm_classes() {
        rows.push(new_row(&c.params, c.cocycle));
    }

    let mut discrepancies = Vec::new();
    for p in &NONPOLY_TABLE {
        let params = p.params();
        let tau = p.cocycle();
        let cap = tau.degree() as usize + 2;
        let hit = rows.iter_mut().find(|r| {
            r.status == RowStatus::Unprinted
                && params_of(r) == params
                && matches!(equivalent(&tau, &r.class, &params, cap), Ok(Some(_)))
        });
        match hit {
            Some(r) => {
                r.class = tau;
                r.status = RowStatus::Matches;
                r.printed = Some(p.label());
            }
            None => {
                let finding = if is_cocycle(&tau, &params) {
                    "not equivalent to any regenerated class at these parameters".to_string()
                } else {
                    format!("not a cocycle at {params}")
                };
                discrepancies.push(Discrepancy {
                    degree: tau.degree(),
                    params: format!("alpha = {}, beta = {}, gamma {}", p.alpha, p.beta, if p.integral_gamma { "integer" } else { "non-integer" }),
                    printed: p.label(),
                    finding,
                });
            }
        }
    }
    rows.sort_by(|x, y| {
        let key = |r: &RegeneratedRow| match &r.params {
            RowParams::Point(a, b) => (a.to_f64(), b.to_f64()),
            RowParams::Line(_) => (None, None),
        };
        let (ka, kb) = (key(x), key(y));
        ka.partial_cmp(&kb)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(shape_rank(&x.class).cmp(&shape_rank(&y.class)))
            .then(x.degree.cmp(&y.degree))
    });
    TableReport { kind: TableKind::NonPoly, rows, discrepancies }
}

/// Regenerates a table from the solvers and compares it with the printed rows.
pub fn regenerate(kind: TableKind, seed: u64) -> TableReport {
    match kind {
        TableKind::NonPoly => regenerate_nonpoly(),
        _ => regenerate_poly(kind, seed),
    }
}

/// Symbolic residual of a row on its line, or at its point.
pub fn row_residual(row: &RegeneratedRow) -> Option<MPoly> {
    match &row.params {
        RowParams::Line(c) => {
            let alpha = MPoly::var(Var::Alpha);
            Some(residual_symbolic(&row.class.poly, &alpha, &(&alpha - &MPoly::int(*c))))
        }
        RowParams::Point(..) => {
            let (tau, params) = row.instances().remove(0);
            residual(&tau, &params).ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_rows_parse() {
        for r in THETA_TABLE.iter().chain(TEXT_DEGREE6.iter()) {
            assert_eq!(r.theta_coeffs().len(), r.degree as usize);
            let _ = r.params.point();
        }
        for r in &M_TABLE {
            assert_eq!(r.m_poly().total_degree(&[Var::K, Var::M]), r.degree);
        }
        for r in &NONPOLY_TABLE {
            assert!(!r.cocycle().is_zero());
        }
        assert_eq!(NONPOLY_TABLE[8].label(), "m^-1*k^3 + k^2");
    }

    #[test]
    fn line_membership() {
        let spec = ParamSpec::Line(4);
        assert!(spec.contains(&Scalar::int(7), &Scalar::int(3)));
        assert!(!spec.contains(&Scalar::int(7), &Scalar::int(4)));
        assert_eq!(printed_theta_rows_at(2, &Scalar::one(), &Scalar::zero()).len(), 2);
    }
}
