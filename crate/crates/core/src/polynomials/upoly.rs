use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_terms, MPoly, Var};
use crate::scalars::{Rat, Scalar};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        UPoly::new(vec![c])
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        UPoly::new(cs.iter().map(|c| Scalar::int(*c)).collect())
    }

    /// `c·x^d`
    pub fn monomial(c: Scalar, d: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); d + 1];
        coeffs[d] = c;
        UPoly::new(coeffs)
    }

    /// `x − r`
    pub fn linear_root(r: &Scalar) -> Self {
        UPoly::new(vec![-r, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().expect("nonzero lead"))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Scalar::int(i as i64)).collect(),
        )
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    /// Quotient and remainder over the coefficient field.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = d.lead().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); n - dd];
        for i in (dd..n).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &inv_lead;
            for (j, c) in d.coeffs.iter().enumerate() {
                let t = &rem[i - dd + j] - &(&q * c);
                rem[i - dd + j] = t;
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// `self ∘ q`
    pub fn compose(&self, q: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UPoly::constant(c.clone());
        }
        acc
    }

    pub fn to_mpoly(&self, v: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut e = [0; super::NVARS];
            e[v as usize] = i as u32;
            out.add_term(e, c);
        }
        out
    }

    /// Integer coefficient vector proportional to a rational polynomial, with content 1
    /// and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let rats: Vec<&Rat> =
            self.coeffs.iter().map(|c| c.as_rat().expect("rational polynomial")).collect();
        let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = rats.iter().map(|r| (*r * Rat::from_integer(den.clone())).to_integer()).collect();
        primitive(ints)
    }

    pub fn from_bigints(cs: &[BigInt]) -> UPoly {
        UPoly::new(cs.iter().map(|c| Scalar::from_bigint(c.clone())).collect())
    }

    pub fn display_in(&self, var: &str) -> String {
        struct D<'a>(&'a UPoly, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let var = self.1;
                let terms = self.0.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero());
                fmt_terms(
                    f,
                    terms.map(|(i, c)| {
                        let mono = match i {
                            0 => String::new(),
                            1 => var.to_string(),
                            _ => format!("{var}^{i}"),
                        };
                        (c, mono)
                    }),
                )
            }
        }
        D(self, var).to_string()
    }
}

fn primitive(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    let flip = ints.last().is_some_and(|c| c.is_negative());
    for c in &mut ints {
        *c /= &g;
        if flip {
            *c = -&*c;
        }
    }
    ints
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Pseudo-remainder of integer polynomials: `lead(b)^(deg a − deg b + 1)·a mod b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, c) in b.iter().enumerate() {
            r[shift + j] -= &lr * c;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd. Rational inputs use a primitive pseudo-remainder sequence over ℤ;
/// quadratic-field inputs fall back to Euclid over the field.
pub fn upoly_gcd(p: &UPoly, q: &UPoly) -> UPoly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_rational() && q.is_rational() {
        let mut a = p.primitive_integer();
        let mut b = q.primitive_integer();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive(pseudo_rem(&a, &b));
            a = b;
            b = r;
        }
        return UPoly::from_bigints(&a).monic();
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let r = a.div_rem(&b).1;
        a = b;
        b = r;
    }
    a.monic()
}

impl Add<&UPoly> for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&UPoly> for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul<&UPoly> for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(out)
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(self, rhs: UPoly) -> UPoly {
        &self + &rhs
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(self, rhs: UPoly) -> UPoly {
        &self - &rhs
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, rhs: UPoly) -> UPoly {
        &self * &rhs
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        let p = UPoly::from_ints(&[-1, 0, 1]);
        let q = UPoly::from_ints(&[-1, 1]);
        assert_eq!(upoly_gcd(&p, &q), q);
        let r = UPoly::from_ints(&[6, -4, 2]);
        assert_eq!(upoly_gcd(&r, &r), r.monic());
        assert_eq!(upoly_gcd(&r, &UPoly::zero()), r.monic());
    }

    #[test]
    fn division() {
        let p = UPoly::from_ints(&[5, -6, 1]);
        let (q, r) = p.div_rem(&UPoly::from_ints(&[-1, 1]));
        assert_eq!(q, UPoly::from_ints(&[-5, 1]));
        assert!(r.is_zero());
        assert!(p.div_exact(&UPoly::from_ints(&[1, 1])).is_none());
    }

    #[test]
    fn quadratic_field_gcd() {
        let r: Scalar = "(7+sqrt(19))/2".parse().unwrap();
        let a = &UPoly::linear_root(&r) * &UPoly::from_ints(&[1, 1]);
        let b = &UPoly::linear_root(&r) * &UPoly::from_ints(&[2, 1]);
        assert_eq!(upoly_gcd(&a, &b), UPoly::linear_root(&r));
    }

    #[test]
    fn display() {
        assert_eq!(UPoly::from_ints(&[0, 0, 0, 1]).display_in("k"), "k^3");
        assert_eq!(UPoly::from_ints(&[1, -2]).display_in("k"), "-2*k + 1");
        assert_eq!(UPoly::zero().display_in("k"), "0");
    }
}
