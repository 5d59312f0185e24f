//! Sparse multivariate polynomials over [`Scalar`] in the fixed variables k, s, m, α, β, x,
//! plus dense univariate polynomials and their root utilities.

mod roots;
mod upoly;

pub use roots::{solve_upoly, RootError, Roots};
pub use upoly::{upoly_gcd, UPoly};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;

use crate::expr::{self, ExprValue};
use crate::scalars::{Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    K = 0,
    S = 1,
    M = 2,
    Alpha = 3,
    Beta = 4,
    X = 5,
}

pub const NVARS: usize = 6;

impl Var {
    pub const ALL: [Var; NVARS] = [Var::K, Var::S, Var::M, Var::Alpha, Var::Beta, Var::X];

    pub fn name(self) -> &'static str {
        match self {
            Var::K => "k",
            Var::S => "s",
            Var::M => "m",
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::X => "x",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

pub type Exps = [u32; NVARS];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, [0; NVARS])
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Scalar::int(n))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v as usize] = 1;
        Self::monomial(Scalar::one(), e)
    }

    pub fn monomial(c: Scalar, exps: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { terms }
    }

    /// `c · k^a · m^b`, the common shape of cocycle monomials.
    pub fn km(c: Scalar, a: u32, b: u32) -> Self {
        Self::monomial(c, [a, 0, b, 0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &Exps) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exps: Exps, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v as usize]).max().unwrap_or(0)
    }

    pub fn total_degree(&self, vars: &[Var]) -> u32 {
        self.terms
            .keys()
            .map(|e| vars.iter().map(|v| e[*v as usize]).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v as usize] > 0)
    }

    /// Sum of the terms whose exponents in `vars` add up to `degree`.
    pub fn homogeneous_component(&self, vars: &[Var], degree: u32) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| vars.iter().map(|v| e[*v as usize]).sum::<u32>() == degree)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        MPoly { terms }
    }

    /// Simultaneous substitution of the bound variables.
    pub fn substitute(&self, bindings: &[(Var, MPoly)]) -> MPoly {
        let mut bound: [Option<&MPoly>; NVARS] = [None; NVARS];
        for (v, p) in bindings {
            bound[*v as usize] = Some(p);
        }
        let mut cache: Vec<Vec<MPoly>> = vec![Vec::new(); NVARS];
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut kept = [0; NVARS];
            let mut prod = MPoly::constant(c.clone());
            for i in 0..NVARS {
                match bound[i] {
                    None => kept[i] = e[i],
                    Some(p) => {
                        let powers = &mut cache[i];
                        while powers.len() <= e[i] as usize {
                            let next = match powers.last() {
                                None => MPoly::int(1),
                                Some(last) => last * p,
                            };
                            powers.push(next);
                        }
                        prod = &prod * &powers[e[i] as usize];
                    }
                }
            }
            out = out + prod.mul_monomial(&kept);
        }
        out
    }

    /// Substitutes scalar values for the given variables.
    pub fn specialize(&self, values: &[(Var, Scalar)]) -> MPoly {
        let bindings: Vec<(Var, MPoly)> =
            values.iter().map(|(v, c)| (*v, MPoly::constant(c.clone()))).collect();
        self.substitute(&bindings)
    }

    /// Value at a full point; variables not mentioned are taken as zero.
    pub fn eval(&self, values: &[(Var, Scalar)]) -> Scalar {
        let mut point: [Scalar; NVARS] = Default::default();
        for (v, c) in values {
            point[*v as usize] = c.clone();
        }
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                if e[i] > 0 {
                    t = t * point[i].pow(e[i]);
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn mul_monomial(&self, exps: &Exps) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = *e;
                for i in 0..NVARS {
                    f[i] += exps[i];
                }
                (f, c.clone())
            })
            .collect();
        MPoly { terms }
    }

    /// Groups terms by their exponents in `vars`; the values are polynomials in the rest.
    pub fn coefficients_in(&self, vars: &[Var]) -> BTreeMap<Exps, MPoly> {
        let mut out: BTreeMap<Exps, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut key = [0; NVARS];
            let mut rest = *e;
            for v in vars {
                key[*v as usize] = e[*v as usize];
                rest[*v as usize] = 0;
            }
            out.entry(key).or_default().add_term(rest, c);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Univariate view when only `v` occurs.
    pub fn to_upoly(&self, v: Var) -> Option<UPoly> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if (0..NVARS).any(|i| i != v as usize && e[i] > 0) {
                return None;
            }
            let d = e[v as usize] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Scalar::zero());
            }
            coeffs[d] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.terms.keys().all(|e| e.iter().all(|x| *x == 0)) {
            Some(self.coeff(&[0; NVARS]))
        } else {
            None
        }
    }

    /// Scalar `c` with `self = c·other`, if one exists.
    pub fn ratio_to(&self, other: &MPoly) -> Option<Scalar> {
        let (e, c) = other.terms.iter().next()?;
        let r = self.coeff(e).try_div(c).ok()?;
        (other.scale(&r) == *self).then_some(r)
    }

    pub fn try_scale(&self, c: &Scalar) -> Result<MPoly, ScalarError> {
        let mut out = MPoly::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, &v.try_mul(c)?);
        }
        Ok(out)
    }
}

impl From<Scalar> for MPoly {
    fn from(c: Scalar) -> Self {
        MPoly::constant(c)
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
        self
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        self + (-rhs)
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let mut e = *e1;
                for i in 0..NVARS {
                    e[i] += e2[i];
                }
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

fn fmt_monomial(e: &Exps) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match e[v as usize] {
            0 => {}
            1 => parts.push(v.name().to_string()),
            p => parts.push(format!("{}^{p}", v.name())),
        }
    }
    parts.join("*")
}

/// Writes `Σ c·mono` with the sign of rational coefficients pulled into the joiner.
pub(crate) fn fmt_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a Scalar, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let negative = c.real_sign() == Some(std::cmp::Ordering::Less) && c.is_rational();
        let mag = if negative { -c } else { c.clone() };
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        match (mono.is_empty(), mag.is_one()) {
            (true, _) => write!(f, "{mag}")?,
            (false, true) => write!(f, "{mono}")?,
            (false, false) => write!(f, "{mag}*{mono}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev().map(|(e, c)| (c, fmt_monomial(e))))
    }
}

impl ExprValue for MPoly {
    fn from_int(n: BigInt) -> Self {
        MPoly::constant(Scalar::from_bigint(n))
    }
    fn sqrt_of(d: BigInt) -> Result<Self, ScalarError> {
        Ok(MPoly::constant(Scalar::sqrt_of(d)?))
    }
    fn variable(name: &str) -> Option<Self> {
        Var::from_name(name).map(MPoly::var)
    }
    fn plus(self, rhs: Self) -> Result<Self, ScalarError> {
        let mut out = self;
        for (e, c) in &rhs.terms {
            let cur = out.coeff(e);
            let sum = cur.try_add(c)?;
            out.terms.remove(e);
            out.add_term(*e, &sum);
        }
        Ok(out)
    }
    fn minus(self, rhs: Self) -> Result<Self, ScalarError> {
        ExprValue::plus(self, -rhs)
    }
    fn times(self, rhs: Self) -> Result<Self, ScalarError> {
        let mut out = MPoly::zero();
        for (e, c) in &rhs.terms {
            let part = self.try_scale(c)?.mul_monomial(e);
            out = ExprValue::plus(out, part)?;
        }
        Ok(out)
    }
    fn over(self, rhs: Self) -> Result<Self, ScalarError> {
        match rhs.constant_value() {
            Some(c) => self.try_scale(&c.inv()?),
            None => Err(ScalarError::Parse {
                offset: 0,
                message: "division by a non-constant polynomial".into(),
            }),
        }
    }
    fn negate(self) -> Self {
        -self
    }
    fn power(self, e: u32) -> Result<Self, ScalarError> {
        let mut acc = MPoly::int(1);
        for _ in 0..e {
            acc = ExprValue::times(acc, self.clone())?;
        }
        Ok(acc)
    }
}

impl FromStr for MPoly {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        expr::parse(s)
    }
}

/// Parses a polynomial and checks that it only uses the allowed variables.
pub fn parse_poly_in(text: &str, allowed: &[Var]) -> Result<MPoly, ScalarError> {
    let p: MPoly = text.parse()?;
    for v in Var::ALL {
        if !allowed.contains(&v) && p.uses(v) {
            return Err(ScalarError::Parse {
                offset: text.find(v.name()).unwrap_or(0),
                message: format!("variable '{}' not allowed here", v.name()),
            });
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &str) -> MPoly {
        t.parse().unwrap()
    }

    #[test]
    fn product_and_substitution() {
        assert_eq!(p("(k+m)*(k-m)"), p("k^2 - m^2"));
        assert_eq!(p("k*alpha + m").specialize(&[(Var::Alpha, Scalar::int(2))]), p("2*k + m"));
        let dual = p("k^3 + 2*k^2*m").substitute(&[(Var::M, p("-m-k"))]);
        assert_eq!(dual, p("-k^3 - 2*k^2*m"));
    }

    #[test]
    fn components() {
        let q = p("k^3 + 2*k^2*m + k");
        assert_eq!(q.homogeneous_component(&[Var::K, Var::M], 3), p("k^3 + 2*k^2*m"));
        assert_eq!(q.homogeneous_component(&[Var::K, Var::M], 1), p("k"));
        assert!(MPoly::zero().homogeneous_component(&[Var::K, Var::M], 2).is_zero());
    }

    #[test]
    fn display_round_trip() {
        for t in [
            "12*k^6 - 22*k^5*m",
            "k^3 + 2*k^2*m",
            "-5/6*k*m + 1",
            "(-22-5*sqrt(19))/4*k^7 + (31-7*sqrt(19))/2*k^6*m",
            "k^5*alpha - 4*k^5",
            "0",
        ] {
            let q = p(t);
            assert_eq!(q.to_string(), t);
            assert_eq!(p(&q.to_string()), q);
        }
    }

    #[test]
    fn parse_rejects_foreign_variables() {
        assert!(parse_poly_in("k + s", &[Var::K, Var::M]).is_err());
        assert!("k / m".parse::<MPoly>().is_err());
        assert!("k + y".parse::<MPoly>().is_err());
    }

    #[test]
    fn coefficient_grouping() {
        let q = p("alpha*k*s + 2*k*s - m");
        let g = q.coefficients_in(&[Var::K, Var::S, Var::M]);
        assert_eq!(g[&[1, 1, 0, 0, 0, 0]], p("alpha + 2"));
        assert_eq!(g[&[0, 0, 1, 0, 0, 0]], p("-1"));
    }
}
