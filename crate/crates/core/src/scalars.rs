//! Exact scalars: arbitrary-precision rationals and elements of quadratic fields ℚ(√d).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::expr::{self, ExprValue};

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("arithmetic between Q(sqrt({0})) and Q(sqrt({1}))")]
    IncompatibleField(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("{0} is not a squarefree integer with |d| >= 2")]
    NotSquarefree(BigInt),
}

/// `a + b·√d` with `b ≠ 0` and `d` squarefree, `|d| ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    a: Rat,
    b: Rat,
    d: i64,
}

impl QuadRat {
    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rat),
    Quad(QuadRat),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Splits `n ≠ 0` as `s²·f` with `f` squarefree and `s > 0`. Trial division up to 10⁶;
/// a remaining cofactor is treated as squarefree unless it is a perfect square.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= &p;
        }
        p += 1u32;
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= r;
        } else {
            f *= rest;
        }
    }
    (s, sign * f)
}

fn check_d(d: &BigInt) -> Result<i64, ScalarError> {
    let bad = || ScalarError::NotSquarefree(d.clone());
    if d.abs() < BigInt::from(2) {
        return Err(bad());
    }
    let (s, _) = squarefree_split(d);
    if !s.is_one() {
        return Err(bad());
    }
    d.to_i64().ok_or_else(bad)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rat::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(Rat::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rat(rat(n, d))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rat(Rat::from_integer(n))
    }

    /// `a + b√d`; collapses to a rational when `b = 0`.
    pub fn quad(a: Rat, b: Rat, d: i64) -> Result<Self, ScalarError> {
        let d = check_d(&BigInt::from(d))?;
        Ok(Self::quad_unchecked(a, b, d))
    }

    fn quad_unchecked(a: Rat, b: Rat, d: i64) -> Self {
        if b.is_zero() {
            Scalar::Rat(a)
        } else {
            Scalar::Quad(QuadRat { a, b, d })
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_integer())
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rat(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    /// Radicand of the field this value lives in, `None` for rationals.
    pub fn field(&self) -> Option<i64> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Quad(q) => Some(q.d),
        }
    }

    fn parts(&self) -> (Rat, Rat) {
        match self {
            Scalar::Rat(r) => (r.clone(), Rat::zero()),
            Scalar::Quad(q) => (q.a.clone(), q.b.clone()),
        }
    }

    fn common_field(&self, other: &Scalar) -> Result<Option<i64>, ScalarError> {
        match (self.field(), other.field()) {
            (Some(x), Some(y)) if x != y => Err(ScalarError::IncompatibleField(x, y)),
            (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
            _ => Ok(None),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rat(x), Scalar::Rat(y)) = (self, other) {
            return Ok(Scalar::Rat(x + y));
        }
        let d = self.common_field(other)?.expect("one operand is quadratic");
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        Ok(Self::quad_unchecked(a1 + a2, b1 + b2, d))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rat(x), Scalar::Rat(y)) = (self, other) {
            return Ok(Scalar::Rat(x * y));
        }
        let d = self.common_field(other)?.expect("one operand is quadratic");
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        let dd = Rat::from_integer(d.into());
        let a = &a1 * &a2 + &b1 * &b2 * dd;
        let b = a1 * b2 + a2 * b1;
        Ok(Self::quad_unchecked(a, b, d))
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rat(r) if r.is_zero() => Err(ScalarError::DivisionByZero),
            Scalar::Rat(r) => Ok(Scalar::Rat(r.recip())),
            Scalar::Quad(q) => {
                let norm = &q.a * &q.a - &q.b * &q.b * Rat::from_integer(q.d.into());
                Ok(Self::quad_unchecked(&q.a / &norm, -&q.b / &norm, q.d))
            }
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Quad(q) => Self::quad_unchecked(q.a.clone(), -q.b.clone(), q.d),
        }
    }

    /// Sign of a real value; `None` for non-real elements of imaginary quadratic fields.
    pub fn real_sign(&self) -> Option<Ordering> {
        let sign = |r: &Rat| r.cmp(&Rat::zero());
        match self {
            Scalar::Rat(r) => Some(sign(r)),
            Scalar::Quad(q) if q.d < 0 => None,
            Scalar::Quad(q) => {
                let (sa, sb) = (sign(&q.a), sign(&q.b));
                if sa == Ordering::Equal || sa == sb {
                    return Some(sb);
                }
                let a2 = &q.a * &q.a;
                let b2d = &q.b * &q.b * Rat::from_integer(q.d.into());
                Some(if a2 > b2d { sa } else { sb })
            }
        }
    }

    /// Order of two real scalars; `None` when either is non-real or the fields differ.
    pub fn cmp_real(&self, other: &Scalar) -> Option<Ordering> {
        self.try_sub(other).ok()?.real_sign()
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rat(r) => r.to_f64(),
            Scalar::Quad(q) if q.d > 0 => Some(q.a.to_f64()? + q.b.to_f64()? * (q.d as f64).sqrt()),
            Scalar::Quad(_) => None,
        }
    }

    /// Largest integer `≤ self` for real values; the real part is used for imaginary fields.
    pub fn floor(&self) -> BigInt {
        let x = match self {
            Scalar::Quad(q) if q.d < 0 => Scalar::Rat(q.a.clone()),
            other => other.clone(),
        };
        if let Scalar::Rat(r) = &x {
            return r.floor().to_integer();
        }
        let approx = x.to_f64().expect("real quadratic").floor();
        let mut n = BigInt::from(approx as i64);
        while Scalar::from_bigint(n.clone()).cmp_real(&x) == Some(Ordering::Greater) {
            n -= 1;
        }
        while Scalar::from_bigint(&n + 1).cmp_real(&x) != Some(Ordering::Greater) {
            n += 1;
        }
        n
    }

    /// Representative of `self + ℤ` with real part in `[0, 1)`.
    pub fn mod_one(&self) -> Scalar {
        self - &Scalar::from_bigint(self.floor())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Rat(r)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => Scalar::Quad(QuadRat { a: -&q.a, b: -&q.b, d: q.d }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($method)),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Quad(q) => {
                let c = q.a.denom().lcm(q.b.denom());
                let a = (&q.a * Rat::from_integer(c.clone())).to_integer();
                let b = (&q.b * Rat::from_integer(c.clone())).to_integer();
                let sign = if b.is_negative() { '-' } else { '+' };
                let mag = b.abs();
                let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
                write!(f, "({a}{sign}{coef}sqrt({}))", q.d)?;
                if !c.is_one() {
                    write!(f, "/{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl ExprValue for Scalar {
    fn from_int(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
    fn sqrt_of(d: BigInt) -> Result<Self, ScalarError> {
        let d = check_d(&d)?;
        Ok(Scalar::quad_unchecked(Rat::zero(), Rat::one(), d))
    }
    fn variable(_: &str) -> Option<Self> {
        None
    }
    fn plus(self, rhs: Self) -> Result<Self, ScalarError> {
        self.try_add(&rhs)
    }
    fn minus(self, rhs: Self) -> Result<Self, ScalarError> {
        self.try_sub(&rhs)
    }
    fn times(self, rhs: Self) -> Result<Self, ScalarError> {
        self.try_mul(&rhs)
    }
    fn over(self, rhs: Self) -> Result<Self, ScalarError> {
        self.try_div(&rhs)
    }
    fn negate(self) -> Self {
        -self
    }
    fn power(self, e: u32) -> Result<Self, ScalarError> {
        Ok(Scalar::pow(&self, e))
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        expr::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&Scalar::frac(1, 2) + &Scalar::frac(1, 3), Scalar::frac(5, 6));
    }

    #[test]
    fn conjugate_product() {
        assert_eq!(s("(7+sqrt(19))/2") * s("(7-sqrt(19))/2"), Scalar::frac(15, 2));
    }

    #[test]
    fn quadratic_inverse() {
        assert_eq!(s("3+sqrt(2)").inv().unwrap(), s("(3-sqrt(2))/7"));
    }

    #[test]
    fn parse_examples() {
        let q = s("(7+sqrt(19))/2");
        match &q {
            Scalar::Quad(q) => {
                assert_eq!(q.a(), &rat(7, 2));
                assert_eq!(q.b(), &rat(1, 2));
                assert_eq!(q.d(), 19);
            }
            _ => panic!("expected quadratic"),
        }
        assert_eq!(s("-4"), Scalar::int(-4));
        assert_eq!(s("(0+0*sqrt(5))/3"), Scalar::zero());
        assert_eq!(s(" -(5 - sqrt(19)) / 2 "), s("(-5+sqrt(19))/2"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("sqrt(4)".parse::<Scalar>(), Err(ScalarError::NotSquarefree(_))));
        assert!(matches!("sqrt(12)".parse::<Scalar>(), Err(ScalarError::NotSquarefree(_))));
        assert!(matches!("1/".parse::<Scalar>(), Err(ScalarError::Parse { offset: 2, .. })));
        assert!(matches!("1 2".parse::<Scalar>(), Err(ScalarError::Parse { offset: 2, .. })));
        assert!(matches!("1/0".parse::<Scalar>(), Err(ScalarError::DivisionByZero)));
        assert!(matches!(
            "sqrt(2)+sqrt(3)".parse::<Scalar>(),
            Err(ScalarError::IncompatibleField(2, 3))
        ));
    }

    #[test]
    fn mixed_fields_rejected() {
        assert_eq!(s("sqrt(2)").try_mul(&s("sqrt(3)")), Err(ScalarError::IncompatibleField(2, 3)));
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn display_round_trip() {
        for t in ["5/6", "-4", "(7+sqrt(19))/2", "(3-2*sqrt(2))", "(-1+3*sqrt(-3))/4"] {
            let v = s(t);
            assert_eq!(v.to_string(), t);
            assert_eq!(s(&v.to_string()), v);
        }
    }

    #[test]
    fn ordering_and_floor() {
        assert_eq!(s("(7+sqrt(19))/2").floor(), BigInt::from(5));
        assert_eq!(s("(7-sqrt(19))/2").floor(), BigInt::from(1));
        assert_eq!(s("-(5+sqrt(19))/2").floor(), BigInt::from(-5));
        assert_eq!(Scalar::frac(-1, 3).mod_one(), Scalar::frac(2, 3));
        assert_eq!(s("sqrt(2)").cmp_real(&Scalar::frac(3, 2)), Some(Ordering::Less));
        assert_eq!(s("sqrt(-2)").real_sign(), None);
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_split(&BigInt::from(-72)), (BigInt::from(6), BigInt::from(-2)));
        assert_eq!(squarefree_split(&BigInt::from(19)), (BigInt::from(1), BigInt::from(19)));
    }
}
