//! Brute-force models: the extension module on a finite weight window, and the semidirect
//! products of the Virasoro algebra with a δ-type module.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cocycles::{Cocycle, ExtensionParams};
use crate::polynomials::UPoly;
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("window too small: need 2K <= W, got W={w}, K={k}")]
    WindowTooSmall { w: i64, k: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    V,
    W,
}

/// Sparse vector keyed by (basis family, m − γ).
type Vector = BTreeMap<(Basis, i64), Scalar>;

fn add_to(v: &mut Vector, key: (Basis, i64), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(key).or_insert_with(Scalar::zero);
    *e = &*e + &c;
    if e.is_zero() {
        v.remove(&key);
    }
}

/// The module M spanned by v_m, w_m, m ∈ γ + [−W, W].
#[derive(Debug, Clone)]
pub struct ModuleWindow {
    pub params: ExtensionParams,
    pub w: i64,
    tau: HashMap<(i64, i64), Scalar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketViolation {
    pub k: i64,
    pub s: i64,
    pub m: Scalar,
    pub basis: Basis,
    /// Nonzero coefficients of `[e_k,e_s]x − e_k e_s x + e_s e_k x`.
    pub defect: Vec<(Basis, Scalar, Scalar)>,
}

impl ModuleWindow {
    pub fn new(params: &ExtensionParams, tau: &Cocycle, w: i64) -> Self {
        let mut table = HashMap::new();
        for k in -w..=w {
            for i in -w..=w {
                let v = tau.eval(k, &(&params.gamma + &Scalar::int(i)));
                if !v.is_zero() {
                    table.insert((k, i), v);
                }
            }
        }
        ModuleWindow { params: params.clone(), w, tau: table }
    }

    pub fn m_at(&self, i: i64) -> Scalar {
        &self.params.gamma + &Scalar::int(i)
    }

    /// τ(k, γ+i) as stored.
    pub fn tau(&self, k: i64, i: i64) -> Scalar {
        self.tau.get(&(k, i)).cloned().unwrap_or_default()
    }

    fn in_window(&self, i: i64) -> bool {
        i.abs() <= self.w
    }

    /// e_k applied to a vector; `None` when the result leaves the window.
    fn act(&self, k: i64, x: &Vector) -> Option<Vector> {
        if k.abs() > self.w {
            return None;
        }
        let ks = Scalar::int(k);
        let mut out = Vector::new();
        for (&(b, i), c) in x {
            let j = i + k;
            if !self.in_window(j) {
                return None;
            }
            let m = self.m_at(i);
            match b {
                Basis::V => add_to(&mut out, (Basis::V, j), c * &(&m + &(&self.params.alpha * &ks))),
                Basis::W => {
                    add_to(&mut out, (Basis::W, j), c * &(&m + &(&self.params.beta * &ks)));
                    add_to(&mut out, (Basis::V, j), c * &self.tau(k, i));
                }
            }
        }
        Some(out)
    }

    /// Checks `[e_k,e_s]x = e_k(e_s x) − e_s(e_k x)` for k, s ∈ [−K, K] and every basis vector
    /// whose images stay in the window.
    pub fn bracket_check(&self, kmax: i64) -> Result<Vec<BracketViolation>, ExtensionError> {
        if 2 * kmax > self.w {
            return Err(ExtensionError::WindowTooSmall { w: self.w, k: kmax });
        }
        let mut out = Vec::new();
        for k in -kmax..=kmax {
            for s in -kmax..=kmax {
                for i in -self.w..=self.w {
                    for b in [Basis::V, Basis::W] {
                        let x: Vector = [((b, i), Scalar::one())].into_iter().collect();
                        let (Some(es), Some(ek)) = (self.act(s, &x), self.act(k, &x)) else { continue };
                        let (Some(kes), Some(sek)) = (self.act(k, &es), self.act(s, &ek)) else { continue };
                        let Some(lhs) = self.act(k + s, &x) else { continue };
                        let mut defect = Vector::new();
                        for (key, c) in lhs {
                            add_to(&mut defect, key, c * Scalar::int(s - k));
                        }
                        for (key, c) in kes {
                            add_to(&mut defect, key, -c);
                        }
                        for (key, c) in sek {
                            add_to(&mut defect, key, c);
                        }
                        if !defect.is_empty() {
                            let defect = defect.into_iter().map(|((bb, j), c)| (bb, self.m_at(j), c)).collect();
                            out.push(BracketViolation { k, s, m: self.m_at(i), basis: b, defect });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The same module in the basis w′_m = w_m + g(m) v_m.
    pub fn change_basis(&self, shift: &dyn Fn(&Scalar) -> Scalar) -> ModuleWindow {
        let (a, b) = (&self.params.alpha, &self.params.beta);
        let mut table = HashMap::new();
        for k in -self.w..=self.w {
            for i in -self.w..=self.w {
                let m = self.m_at(i);
                let ks = Scalar::int(k);
                let mut v = self.tau(k, i);
                if self.in_window(i + k) {
                    v = v + &(&m + &(a * &ks)) * &shift(&m) - &(&m + &(b * &ks)) * &shift(&self.m_at(i + k));
                }
                if !v.is_zero() {
                    table.insert((k, i), v);
                }
            }
        }
        ModuleWindow { params: self.params.clone(), w: self.w, tau: table }
    }
}

/// Generators of the semidirect product Vir ⋉ V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    L(i64),
    W(i64),
    C1,
    C2,
    C3,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::L(k) => write!(f, "L({k})"),
            Gen::W(k) => write!(f, "W({k})"),
            Gen::C1 => write!(f, "c1"),
            Gen::C2 => write!(f, "c2"),
            Gen::C3 => write!(f, "c3"),
        }
    }
}

pub type AlgVector = BTreeMap<Gen, Scalar>;

fn alg_add(v: &mut AlgVector, g: Gen, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(g).or_insert_with(Scalar::zero);
    *e = &*e + &c;
    if e.is_zero() {
        v.remove(&g);
    }
}

/// `[L(k),L(m)] = (m−k)L(k+m) + δ_{k+m,0}(k³−k)/12·c₁`,
/// `[L(k),W(m)] = (m+βk)W(k+m) + δ_{k+m,0}μ(k)·c₂`,
/// `[W(k),W(m)] = 0` (abelian) or `δ_{k+m,0}k·c₃` (Heisenberg).
#[derive(Debug, Clone)]
pub struct CurrentAlgebra {
    pub beta: Scalar,
    pub mu: UPoly,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiViolation {
    pub triple: (Gen, Gen, Gen),
    pub defect: AlgVector,
}

impl CurrentAlgebra {
    pub fn new(beta: Scalar, mu: UPoly, abelian: bool) -> Self {
        CurrentAlgebra { beta, mu, abelian }
    }

    pub fn bracket(&self, x: Gen, y: Gen) -> AlgVector {
        let mut out = AlgVector::new();
        match (x, y) {
            (Gen::L(k), Gen::L(m)) => {
                alg_add(&mut out, Gen::L(k + m), Scalar::int(m - k));
                if k + m == 0 {
                    alg_add(&mut out, Gen::C1, Scalar::frac(k * k * k - k, 12));
                }
            }
            (Gen::L(k), Gen::W(m)) => {
                alg_add(&mut out, Gen::W(k + m), &Scalar::int(m) + &(&self.beta * &Scalar::int(k)));
                if k + m == 0 {
                    alg_add(&mut out, Gen::C2, self.mu.eval(&Scalar::int(k)));
                }
            }
            (Gen::W(_), Gen::L(_)) => {
                for (g, c) in self.bracket(y, x) {
                    alg_add(&mut out, g, -c);
                }
            }
            (Gen::W(k), Gen::W(m)) => {
                if !self.abelian && k + m == 0 {
                    alg_add(&mut out, Gen::C3, Scalar::int(k));
                }
            }
            _ => {}
        }
        out
    }

    pub fn bracket_vec(&self, a: &AlgVector, b: &AlgVector) -> AlgVector {
        let mut out = AlgVector::new();
        for (x, cx) in a {
            for (y, cy) in b {
                let f = cx * cy;
                for (g, c) in self.bracket(*x, *y) {
                    alg_add(&mut out, g, &f * &c);
                }
            }
        }
        out
    }

    fn generators(kmax: i64) -> Vec<Gen> {
        (-kmax..=kmax).flat_map(|i| [Gen::L(i), Gen::W(i)]).collect()
    }

    /// Jacobi identity on all triples of L/W generators with indices in [−K, K].
    pub fn jacobi_check(&self, kmax: i64) -> Vec<JacobiViolation> {
        let gens = Self::generators(kmax);
        let single = |g: Gen| -> AlgVector { [(g, Scalar::one())].into_iter().collect() };
        let mut out = Vec::new();
        for (ia, &a) in gens.iter().enumerate() {
            for (ib, &b) in gens.iter().enumerate().skip(ia) {
                for &c in gens.iter().skip(ib) {
                    let mut total = AlgVector::new();
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for (g, v) in self.bracket_vec(&single(x), &self.bracket(y, z)) {
                            alg_add(&mut total, g, v);
                        }
                    }
                    if !total.is_empty() {
                        out.push(JacobiViolation { triple: (a, b, c), defect: total });
                    }
                }
            }
        }
        out
    }

    /// Pairs violating `[x,y] = −[y,x]`.
    pub fn antisymmetry_check(&self, kmax: i64) -> Vec<(Gen, Gen)> {
        let gens = Self::generators(kmax);
        let mut out = Vec::new();
        for &x in &gens {
            for &y in &gens {
                let mut sum = self.bracket(x, y);
                for (g, c) in self.bracket(y, x) {
                    alg_add(&mut sum, g, c);
                }
                if !sum.is_empty() {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// `[L(k), I(m)]` in the basis I(j) = j·W(j); keys `W(j)` stand for `I(j)`.
    /// `None` if the result needs W(0), which is not in the span of the I(j).
    pub fn bracket_l_i(&self, k: i64, m: i64) -> Option<AlgVector> {
        let lhs: AlgVector = [(Gen::L(k), Scalar::one())].into_iter().collect();
        let rhs: AlgVector = [(Gen::W(m), Scalar::int(m))].into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = AlgVector::new();
        for (g, c) in self.bracket_vec(&lhs, &rhs) {
            match g {
                Gen::W(0) => return None,
                Gen::W(j) => alg_add(&mut out, Gen::W(j), c / Scalar::int(j)),
                other => alg_add(&mut out, other, c),
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::CoboundaryGen;

    fn pt(a: i64, b: i64) -> ExtensionParams {
        ExtensionParams::integral(Scalar::int(a), Scalar::int(b))
    }

    fn poly(t: &str) -> Cocycle {
        Cocycle::poly(t.parse().unwrap())
    }

    #[test]
    fn bracket_examples() {
        let mw = ModuleWindow::new(&pt(2, 0), &poly("k^3 + 2*k^2*m"), 12);
        assert!(mw.bracket_check(4).unwrap().is_empty());
        let bad = ModuleWindow::new(&pt(2, 0), &poly("k^3 + 2*k^2*m + m^2"), 12);
        assert!(!bad.bracket_check(4).unwrap().is_empty());
        assert!(ModuleWindow::new(&pt(3, -1), &Cocycle::zero(), 8).bracket_check(4).unwrap().is_empty());
        assert_eq!(mw.bracket_check(7), Err(ExtensionError::WindowTooSmall { w: 12, k: 7 }));
    }

    #[test]
    fn change_basis_adds_coboundary() {
        let params = pt(1, 0);
        let base = ModuleWindow::new(&params, &poly("k^2"), 10);
        let shifted = base.change_basis(&|m: &Scalar| m.clone());
        let cob = crate::cocycles::coboundary(&CoboundaryGen::poly(UPoly::from_ints(&[0, 1])), &params).unwrap();
        for k in -3..=3 {
            for i in -5..=5 {
                assert_eq!(shifted.tau(k, i), &base.tau(k, i) + &cob.eval(k, &Scalar::int(i)));
            }
        }
        assert!(shifted.bracket_check(4).unwrap().is_empty());
        let same = base.change_basis(&|_: &Scalar| Scalar::zero());
        assert_eq!(same.tau, base.tau);
    }

    #[test]
    fn point_shift_gives_delta() {
        let params = pt(0, 3);
        let base = ModuleWindow::new(&params, &Cocycle::zero(), 8);
        let c = Scalar::int(5);
        let shifted = base.change_basis(&|m: &Scalar| if m.is_zero() { c.clone() } else { Scalar::zero() });
        // τ gains k(1−β)c at m = −k
        assert_eq!(shifted.tau(2, -2), Scalar::int(2 * (1 - 3) * 5));
        assert_eq!(shifted.tau(2, 1), Scalar::zero());
    }

    #[test]
    fn current_algebras() {
        let w22 = CurrentAlgebra::new(Scalar::int(-1), UPoly::from_ints(&[0, 0, 0, 1]), true);
        assert!(w22.jacobi_check(4).is_empty());
        let thv = CurrentAlgebra::new(Scalar::zero(), UPoly::from_ints(&[0, 0, 1]), true);
        assert!(thv.jacobi_check(4).is_empty());
        let bad = CurrentAlgebra::new(Scalar::one(), UPoly::from_ints(&[0, 0, 1]), true);
        assert!(!bad.jacobi_check(4).is_empty());
        assert!(w22.antisymmetry_check(3).is_empty());
    }

    #[test]
    fn rescaled_basis() {
        let a = CurrentAlgebra::new(Scalar::one(), UPoly::from_ints(&[0, 1]), true);
        for k in -4..=4 {
            for m in -4..=4 {
                let got = a.bracket_l_i(k, m).unwrap();
                let mut want = AlgVector::new();
                alg_add(&mut want, Gen::W(m + k), Scalar::int(m));
                if k + m == 0 {
                    alg_add(&mut want, Gen::C2, Scalar::int(-m * m));
                }
                if m + k == 0 {
                    want.remove(&Gen::W(0));
                }
                assert_eq!(got, want, "k={k} m={m}");
            }
        }
    }
}
