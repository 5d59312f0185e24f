//! Exact linear algebra over fields (Gauss–Jordan) and over ℚ[α] (fraction-free elimination).

use std::fmt;

use crate::polynomials::{upoly_gcd, UPoly};
use crate::scalars::Scalar;

/// Minimal field interface for the elimination routines.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fdiv(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fdiv(&self, o: &Self) -> Self {
        self / o
    }
    fn fneg(&self) -> Self {
        -self
    }
}

/// Element of ℚ(α) (or ℚ(√d)(α)) kept as reduced `num/den` with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: UPoly::constant(Scalar::one()) };
        }
        let g = upoly_gcd(&num, &den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lead = den.lead().inv().expect("nonzero");
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn poly(p: UPoly) -> Self {
        RatFunc { num: p, den: UPoly::constant(Scalar::one()) }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::poly(UPoly::zero())
    }
    fn one() -> Self {
        RatFunc::poly(UPoly::constant(Scalar::one()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn fadd(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
    fn fsub(&self, o: &Self) -> Self {
        self.fadd(&o.fneg())
    }
    fn fmul(&self, o: &Self) -> Self {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
    fn fdiv(&self, o: &Self) -> Self {
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
    fn fneg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = F::one().fdiv(&m[r][c]);
        for j in c..cols {
            m[r][j] = m[r][j].fmul(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                let t = m[r][j].fmul(&f);
                m[i][j] = m[i][j].fsub(&t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : m·x = 0}`; one vector per free column, with a 1 in that column.
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = work[r][free].fneg();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `a·x = b`, or `None` if inconsistent.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], cols: usize) -> Option<Vec<F>> {
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Result of fraction-free elimination over ℚ[α].
#[derive(Debug, Clone)]
pub struct Bareiss {
    pub echelon: Vec<Vec<UPoly>>,
    pub pivot_cols: Vec<usize>,
    /// Diagonal entries `echelon[r][pivot_cols[r]]`; each is a minor of the input.
    pub pivots: Vec<UPoly>,
    pub swaps: usize,
}

impl Bareiss {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn last_pivot(&self) -> UPoly {
        self.pivots.last().cloned().unwrap_or_else(|| UPoly::constant(Scalar::one()))
    }
}

/// Fraction-free (Bareiss) row echelon form. All divisions are exact.
pub fn bareiss(m: &[Vec<UPoly>]) -> Bareiss {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = UPoly::constant(Scalar::one());
    let mut pivot_cols = Vec::new();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let candidate = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (a[i][c].degree(), i));
        let Some(p) = candidate else { continue };
        if p != r {
            a.swap(r, p);
            swaps += 1;
        }
        let piv = a[r][c].clone();
        for i in (r + 1)..rows {
            let lead = a[i][c].clone();
            for j in (c + 1)..cols {
                let t = &(&piv * &a[i][j]) - &(&lead * &a[r][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = UPoly::zero();
        }
        prev = piv.clone();
        pivot_cols.push(c);
        pivots.push(piv);
        r += 1;
    }
    Bareiss { echelon: a, pivot_cols, pivots, swaps }
}

/// Determinant of a square polynomial matrix.
pub fn det_poly(m: &[Vec<UPoly>]) -> UPoly {
    let n = m.len();
    let b = bareiss(m);
    if b.rank() < n {
        return UPoly::zero();
    }
    let d = b.last_pivot();
    if b.swaps % 2 == 1 {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = m[0].iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = vec![vec![s(1), s(1)], vec![s(1), s(-1)]];
        assert_eq!(solve(&a, &[s(3), s(1)], 2), Some(vec![s(2), s(1)]));
        let b = vec![vec![s(1), s(1)], vec![s(2), s(2)]];
        assert_eq!(solve(&b, &[s(1), s(3)], 2), None);
    }

    #[test]
    fn bareiss_determinant() {
        // [[α, 1], [1, α]] has determinant α² − 1.
        let a = UPoly::from_ints(&[0, 1]);
        let one = UPoly::from_ints(&[1]);
        let m = vec![vec![a.clone(), one.clone()], vec![one, a]];
        assert_eq!(det_poly(&m), UPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn bareiss_rank_with_skipped_column() {
        let z = UPoly::zero();
        let a = UPoly::from_ints(&[0, 1]);
        let m = vec![vec![z.clone(), a.clone(), a.clone()], vec![z.clone(), a.clone(), UPoly::from_ints(&[1, 1])]];
        let b = bareiss(&m);
        assert_eq!(b.pivot_cols, vec![1, 2]);
        assert_eq!(b.last_pivot(), a);
    }

    #[test]
    fn rational_function_field() {
        let x = RatFunc::poly(UPoly::from_ints(&[0, 1]));
        let xm1 = RatFunc::poly(UPoly::from_ints(&[-1, 1]));
        let q = x.fdiv(&xm1).fmul(&xm1);
        assert_eq!(q, x);
        let m = vec![vec![x.clone(), xm1.clone()], vec![x.fmul(&x), x.fmul(&xm1)]];
        assert_eq!(rank(&m), 1);
    }
}
