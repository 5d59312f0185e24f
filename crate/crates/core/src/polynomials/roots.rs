//! Exact roots of rational univariate polynomials: rational roots and roots of quadratic
//! factors. Anything left over of degree ≥ 3 is reported, never dropped.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::upoly::{upoly_gcd, UPoly};
use crate::scalars::{squarefree_split, Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("cannot solve the zero polynomial")]
    DegenerateInput,
    #[error("root finding needs rational coefficients")]
    NonRational,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Roots {
    /// Distinct exact roots.
    pub roots: Vec<Scalar>,
    /// Monic factors (degree ≥ 3, or quadratics with non-representable roots) left unsplit.
    pub unresolved: Vec<UPoly>,
}

pub fn solve_upoly(p: &UPoly) -> Result<Roots, RootError> {
    if p.is_zero() {
        return Err(RootError::DegenerateInput);
    }
    if !p.is_rational() {
        return Err(RootError::NonRational);
    }
    let mut out = Roots::default();
    if p.degree() == Some(0) {
        return Ok(out);
    }
    let squarefree = p.div_exact(&upoly_gcd(p, &p.derivative())).expect("gcd divides");
    let mut f = squarefree.monic();

    if f.coeff(0).is_zero() {
        out.roots.push(Scalar::zero());
        f = f.div_exact(&UPoly::from_ints(&[0, 1])).expect("x divides");
    }
    for r in rational_roots(&f) {
        f = f.div_exact(&UPoly::linear_root(&r)).expect("root divides");
        out.roots.push(r);
    }

    let mut pending = vec![f];
    while let Some(g) = pending.pop() {
        match g.degree() {
            Some(0) | None => {}
            Some(1) => out.roots.push(-g.monic().coeff(0)),
            Some(2) => match quadratic_roots(&g) {
                Some(rs) => out.roots.extend(rs),
                None => out.unresolved.push(g.monic()),
            },
            Some(_) => match find_quadratic_factor(&g) {
                Some(q) => {
                    pending.push(g.div_exact(&q).expect("factor divides"));
                    pending.push(q);
                }
                None => out.unresolved.push(g.monic()),
            },
        }
    }
    Ok(out)
}

fn int_coeffs(p: &UPoly) -> Vec<BigInt> {
    p.primitive_integer()
}

/// Divisors of |n| when n can be fully factored by trial division up to 10⁶.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut rest = n.abs();
    if rest.is_zero() {
        return None;
    }
    let limit = BigInt::from(1_000_000u64);
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        if p > limit {
            return None;
        }
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += 1u32;
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (q, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pw);
                pw *= &q;
            }
        }
        divs = next;
    }
    (divs.len() <= 4096).then_some(divs)
}

fn rational_roots(f: &UPoly) -> Vec<Scalar> {
    let mut found: Vec<Scalar> = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return found;
    }
    let ints = int_coeffs(f);
    let try_root = |r: Rat, found: &mut Vec<Scalar>| {
        let s = Scalar::Rat(r);
        if !found.contains(&s) && f.eval(&s).is_zero() {
            found.push(s);
        }
    };
    let a0 = &ints[0];
    let an = ints.last().expect("nonzero");
    if let (Some(ps), Some(qs)) = (small_divisors(a0), small_divisors(an)) {
        if ps.len() * qs.len() <= 200_000 {
            for p in &ps {
                for q in &qs {
                    for sp in [p.clone(), -p] {
                        try_root(Rat::new(sp, q.clone()), &mut found);
                    }
                }
            }
            return found;
        }
    }
    for z in numeric_roots(f) {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            continue;
        }
        for r in convergents(z.re) {
            try_root(r, &mut found);
        }
    }
    found
}

fn quadratic_roots(g: &UPoly) -> Option<Vec<Scalar>> {
    let ints = int_coeffs(g);
    let (c, b, a) = (&ints[0], &ints[1], &ints[2]);
    let disc = b * b - BigInt::from(4) * a * c;
    let (s, d) = squarefree_split(&disc);
    let two_a = Rat::from_integer(BigInt::from(2) * a);
    let base = Rat::from_integer(-b) / &two_a;
    let off = Rat::from_integer(s) / &two_a;
    if d.is_one() {
        return Some(vec![Scalar::Rat(&base + &off), Scalar::Rat(&base - &off)]);
    }
    let d = d.to_i64()?;
    if d == -1 {
        return None;
    }
    let plus = Scalar::quad(base.clone(), off.clone(), d).ok()?;
    let minus = Scalar::quad(base, -off, d).ok()?;
    Some(vec![plus, minus])
}

/// Searches for a monic rational quadratic factor guided by numerical roots.
fn find_quadratic_factor(g: &UPoly) -> Option<UPoly> {
    let zs = numeric_roots(g);
    for i in 0..zs.len() {
        for j in (i + 1)..zs.len() {
            let sum = zs[i] + zs[j];
            let prod = zs[i] * zs[j];
            let tol = 1e-6;
            if sum.im.abs() > tol * (1.0 + sum.re.abs()) || prod.im.abs() > tol * (1.0 + prod.re.abs()) {
                continue;
            }
            for s in convergents(sum.re) {
                for p in convergents(prod.re) {
                    let q = UPoly::new(vec![Scalar::Rat(p.clone()), Scalar::Rat(-s.clone()), Scalar::one()]);
                    if g.div_exact(&q).is_some() {
                        return Some(q);
                    }
                }
            }
        }
    }
    None
}

/// Best rational approximations of `x` with denominators up to 10⁶, last few only.
fn convergents(x: f64) -> Vec<Rat> {
    if !x.is_finite() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = match BigInt::from_f64(a) {
            Some(v) => v,
            None => break,
        };
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(1_000_000u64) {
            break;
        }
        out.push(Rat::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    let keep = out.len().saturating_sub(4);
    out.split_off(keep)
}

/// Durand–Kerner iteration on the monic normalization of `f`.
fn numeric_roots(f: &UPoly) -> Vec<Complex64> {
    let Some(n) = f.degree() else { return Vec::new() };
    let monic = f.monic();
    let cs: Option<Vec<f64>> =
        monic.coeffs().iter().map(|c| c.as_rat().and_then(BigRational::to_f64)).collect();
    let Some(cs) = cs else { return Vec::new() };
    if cs.iter().any(|c| !c.is_finite()) {
        return Vec::new();
    }
    let radius = 1.0 + cs.iter().take(n).fold(0.0f64, |m, c| m.max(c.abs()));
    let eval = |z: Complex64| cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut zs: Vec<Complex64> =
        (0..n).map(|i| seed.powu(i as u32) * radius.min(1e6).max(1.0) / 2.0).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= zs[i] - zs[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(zs[i]) / denom;
            zs[i] -= step;
            delta = delta.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if delta < 1e-14 {
            break;
        }
    }
    zs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_of(p: &UPoly) -> Vec<Scalar> {
        solve_upoly(p).unwrap().roots
    }

    #[test]
    fn degree7_quadratic() {
        let p = UPoly::new(vec![Scalar::frac(15, 2), Scalar::int(-7), Scalar::one()]);
        let rs = roots_of(&p);
        assert_eq!(rs.len(), 2);
        for t in ["(7+sqrt(19))/2", "(7-sqrt(19))/2"] {
            assert!(rs.contains(&t.parse().unwrap()));
        }
    }

    #[test]
    fn rational_and_unresolved() {
        let mut rs = roots_of(&UPoly::from_ints(&[5, -6, 1]));
        rs.sort_by(|a, b| a.cmp_real(b).unwrap());
        assert_eq!(rs, vec![Scalar::int(1), Scalar::int(5)]);
        let cubic = solve_upoly(&UPoly::from_ints(&[-2, 0, 0, 1])).unwrap();
        assert!(cubic.roots.is_empty());
        assert_eq!(cubic.unresolved, vec![UPoly::from_ints(&[-2, 0, 0, 1])]);
        assert_eq!(solve_upoly(&UPoly::zero()), Err(RootError::DegenerateInput));
    }

    #[test]
    fn quadratic_factor_inside_higher_degree() {
        // (x² − 7x + 15/2)(x³ − 2)(3x + 1)
        let q = UPoly::new(vec![Scalar::frac(15, 2), Scalar::int(-7), Scalar::one()]);
        let p = &(&q * &UPoly::from_ints(&[-2, 0, 0, 1])) * &UPoly::from_ints(&[1, 3]);
        let r = solve_upoly(&p).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert_eq!(r.unresolved.len(), 1);
        for x in &r.roots {
            assert!(p.eval(x).is_zero());
        }
    }

    #[test]
    fn repeated_roots_reported_once() {
        let p = &UPoly::from_ints(&[-1, 1]) * &UPoly::from_ints(&[-1, 1]);
        assert_eq!(roots_of(&p), vec![Scalar::one()]);
    }

    #[test]
    fn large_coefficients_use_numeric_guidance() {
        let big: BigInt = "1000000000000000000000000000057".parse().unwrap();
        let r = Rat::new(BigInt::from(3), BigInt::from(7));
        let p = &UPoly::linear_root(&Scalar::Rat(r.clone())) * &UPoly::new(vec![Scalar::from_bigint(big), Scalar::one()]);
        let rs = roots_of(&p);
        assert!(rs.contains(&Scalar::Rat(r)));
    }
}
