//! Operator calculus in Hom(A, T(α,γ)) for A = ℂ[t, t⁻¹].
//!
//! A weight operator φ of weight j sends tᵐ to `c(m)·v_{m+j}` where the coefficient
//! function is a polynomial plus finitely many point masses. The Witt algebra acts by
//! `(e_k φ)(f) = e_k(φ(f)) − φ(e_k f)` and A acts by `(t^ℓ φ)(f) = φ(t^ℓ f)`.

use std::collections::BTreeMap;

use crate::polynomials::{MPoly, UPoly, Var};
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightOp {
    pub weight: Scalar,
    /// Coefficient function on tᵐ, as a polynomial in m.
    pub poly: UPoly,
    /// Point masses: value added to the coefficient at the given integer m.
    pub points: BTreeMap<i64, Scalar>,
    pub alpha: Scalar,
}

fn factorial(n: u32) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, i| acc * Scalar::int(i))
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `(m + c)^p / p!` as a polynomial in m.
fn shifted_power(c: &Scalar, p: u32) -> UPoly {
    let base = UPoly::new(vec![c.clone(), Scalar::one()]);
    let mut acc = UPoly::constant(Scalar::one());
    for _ in 0..p {
        acc = &acc * &base;
    }
    acc.scale(&factorial(p).inv().expect("nonzero"))
}

impl WeightOp {
    pub fn zero(weight: Scalar, alpha: Scalar) -> Self {
        WeightOp { weight, poly: UPoly::zero(), points: BTreeMap::new(), alpha }
    }

    /// θ_j^{(p)}: tᵐ ↦ (m+j)ᵖ/p! · v_{m+j}.
    pub fn theta(j: Scalar, p: u32, alpha: Scalar) -> Self {
        let poly = shifted_power(&j, p);
        WeightOp { weight: j, poly, points: BTreeMap::new(), alpha }
    }

    /// δ_j: t^{−j} ↦ v_0, every other tᵐ ↦ 0. Needs integral weight.
    pub fn delta(j: i64, alpha: Scalar) -> Self {
        let mut points = BTreeMap::new();
        points.insert(-j, Scalar::one());
        WeightOp { weight: Scalar::int(j), poly: UPoly::zero(), points, alpha }
    }

    /// Coefficient of the point mass at m = −weight.
    pub fn delta_coeff(&self) -> Scalar {
        self.weight
            .to_i64()
            .and_then(|j| self.points.get(&-j).cloned())
            .unwrap_or_default()
    }

    /// Coefficient of v_{m+weight} in φ(tᵐ).
    pub fn value_at(&self, m: i64) -> Scalar {
        self.poly.eval(&Scalar::int(m)) + self.points.get(&m).cloned().unwrap_or_default()
    }

    fn with_points(mut self, points: BTreeMap<i64, Scalar>) -> Self {
        self.points = points.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self
    }

    pub fn scale(&self, c: &Scalar) -> WeightOp {
        let points = self.points.iter().map(|(m, v)| (*m, v * c)).collect();
        WeightOp { poly: self.poly.scale(c), ..self.clone() }.with_points(points)
    }

    /// Sum of two operators of equal weight.
    pub fn add(&self, other: &WeightOp) -> WeightOp {
        assert_eq!(self.weight, other.weight, "weights differ");
        let mut points = self.points.clone();
        for (m, c) in &other.points {
            let e = points.entry(*m).or_default();
            *e = &*e + c;
        }
        WeightOp { poly: &self.poly + &other.poly, ..self.clone() }.with_points(points)
    }
}

/// `(e_k φ)(tᵐ) = (m+j+αk)·c(m) − m·c(m+k)`, of weight j+k.
pub fn act_witt_def(k: i64, op: &WeightOp) -> WeightOp {
    let ks = Scalar::int(k);
    let first = UPoly::new(vec![&op.weight + &(&op.alpha * &ks), Scalar::one()]);
    let shifted = op.poly.compose(&UPoly::new(vec![ks.clone(), Scalar::one()]));
    let m = UPoly::from_ints(&[0, 1]);
    let poly = &(&first * &op.poly) - &(&m * &shifted);
    let mut points: BTreeMap<i64, Scalar> = BTreeMap::new();
    for (x, c) in &op.points {
        let xs = Scalar::int(*x);
        let a = points.entry(*x).or_default();
        *a = &*a + &(&(&xs + &op.weight) + &(&op.alpha * &ks)) * c;
        let b = points.entry(x - k).or_default();
        *b = &*b - &(&Scalar::int(x - k) * c);
    }
    WeightOp { weight: &op.weight + &ks, poly, points: BTreeMap::new(), alpha: op.alpha.clone() }
        .with_points(points)
}

/// `(t^ℓ φ)(tᵐ) = φ(t^{m+ℓ})`, of weight j+ℓ.
pub fn act_a(ell: i64, op: &WeightOp) -> WeightOp {
    let poly = op.poly.compose(&UPoly::new(vec![Scalar::int(ell), Scalar::one()]));
    let points = op.points.iter().map(|(x, c)| (x - ell, c.clone())).collect();
    WeightOp { weight: &op.weight + &Scalar::int(ell), poly, points: BTreeMap::new(), alpha: op.alpha.clone() }
        .with_points(points)
}

/// `Σ_i coeffs[i]·θ_weight^{(i)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCombo {
    pub weight: Scalar,
    pub coeffs: Vec<Scalar>,
}

impl ThetaCombo {
    pub fn to_weight_op(&self, alpha: &Scalar) -> WeightOp {
        let mut out = WeightOp::zero(self.weight.clone(), alpha.clone());
        for (i, c) in self.coeffs.iter().enumerate() {
            out = out.add(&WeightOp::theta(self.weight.clone(), i as u32, alpha.clone()).scale(c));
        }
        out
    }
}

/// Closed form of e_k θ_j^{(p)}:
/// `Σ_{i<p} ((−1)^{p−i}/(p+1−i)!)((p+1−i)α − (p+1)) k^{p+1−i} θ_{j+k}^{(i)} + (j + (α−p)k) θ_{j+k}^{(p)}`.
pub fn theta_action_closed(k: i64, j: &Scalar, p: u32, alpha: &Scalar) -> ThetaCombo {
    let ks = Scalar::int(k);
    let mut coeffs = Vec::with_capacity(p as usize + 1);
    for i in 0..p {
        let q = p + 1 - i;
        let sign = if (p - i) % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
        let c = sign / factorial(q) * (alpha * &Scalar::int(q as i64) - Scalar::int(p as i64 + 1)) * ks.pow(q);
        coeffs.push(c);
    }
    coeffs.push(j + &((alpha - &Scalar::int(p as i64)) * &ks));
    ThetaCombo { weight: j + &ks, coeffs }
}

/// Defect of the closed form against the definitional action with k kept symbolic:
/// a polynomial in k and m that vanishes identically when the closed form is right.
pub fn theta_action_defect(j: &Scalar, p: u32, alpha: &Scalar) -> MPoly {
    let k = MPoly::var(Var::K);
    let m = MPoly::var(Var::M);
    let jc = MPoly::constant(j.clone());
    let pow_fact = |base: &MPoly, e: u32| base.pow(e).scale(&factorial(e).inv().expect("nonzero"));
    let a = |shift: &MPoly| pow_fact(&(&(&m + shift) + &jc), p);
    let definitional = &(&(&(&m + &jc) + &k.scale(alpha)) * &a(&MPoly::zero())) - &(&m * &a(&k));
    let target = &(&m + &jc) + &k;
    let mut closed = MPoly::zero();
    for i in 0..p {
        let q = p + 1 - i;
        let sign = if (p - i) % 2 == 0 { 1 } else { -1 };
        let c = Scalar::int(sign) / factorial(q) * (alpha * &Scalar::int(q as i64) - Scalar::int(p as i64 + 1));
        closed = closed + &k.pow(q).scale(&c) * &pow_fact(&target, i);
    }
    let diag = &jc + &k.scale(&(alpha - &Scalar::int(p as i64)));
    closed = closed + &diag * &pow_fact(&target, p);
    definitional - closed
}

/// `eps·ε_weight + eta·η_weight` in Hom(A, T(β,γ)).
#[derive(Debug, Clone, PartialEq)]
pub struct EpsEta {
    pub weight: Scalar,
    pub eps: Scalar,
    pub eta: Scalar,
}

impl EpsEta {
    /// ε_j(tᵐ) = w_{m+j}, η_j(tᵐ) = (m+j)·w_{m+j}.
    pub fn to_weight_op(&self, beta: &Scalar) -> WeightOp {
        let poly = UPoly::new(vec![&self.eps + &(&self.eta * &self.weight), self.eta.clone()]);
        WeightOp { weight: self.weight.clone(), poly, points: BTreeMap::new(), alpha: beta.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsEtaActions {
    /// e_k ε_j = (j + βk) ε_{j+k}
    pub e_eps: EpsEta,
    /// e_k η_j = (j + k(β−1)) η_{j+k} − k²(β−1) ε_{j+k}
    pub e_eta: EpsEta,
    /// φ(e_k, w_j) = β η_{j+k} + (1−β) j ε_{j+k}
    pub phi: EpsEta,
}

pub fn epsilon_eta_actions(k: i64, j: &Scalar, beta: &Scalar) -> EpsEtaActions {
    let ks = Scalar::int(k);
    let w = j + &ks;
    let bm1 = beta - &Scalar::one();
    EpsEtaActions {
        e_eps: EpsEta { weight: w.clone(), eps: j + &(beta * &ks), eta: Scalar::zero() },
        e_eta: EpsEta { weight: w.clone(), eps: -(&ks * &ks * &bm1), eta: j + &(&ks * &bm1) },
        phi: EpsEta { weight: w, eps: (Scalar::one() - beta) * j, eta: beta.clone() },
    }
}

/// φ(e_k, w_j)(tᵐ) = (tᵐ e_k)·w_j = e_{m+k} w_j = (j + β(m+k)) w_{m+j+k}.
pub fn phi_def(k: i64, j: &Scalar, beta: &Scalar) -> WeightOp {
    let poly = UPoly::new(vec![j + &(beta * &Scalar::int(k)), beta.clone()]);
    WeightOp { weight: j + &Scalar::int(k), poly, points: BTreeMap::new(), alpha: beta.clone() }
}

/// `Σ c · t^{a_power} e_{e_index}` acting on weight operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOpCombo {
    pub terms: Vec<(Scalar, i64, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZyKind {
    Z,
    Y,
}

/// `z_n = Σ_{i=0}^{n+1} (−1)ⁱ C(n+1,i) t^{i−1} e_{1−i}` and
/// `y_n = Σ_{i=0}^{n} (−1)ⁱ C(n,i) tⁱ e_{−i}`.
pub fn zy_operator(n: u32, kind: ZyKind) -> DiffOpCombo {
    let terms = match kind {
        ZyKind::Z => (0..=n + 1)
            .map(|i| (Scalar::int(sign(i) * binomial(n + 1, i)), i as i64 - 1, 1 - i as i64))
            .collect(),
        ZyKind::Y => {
            (0..=n).map(|i| (Scalar::int(sign(i) * binomial(n, i)), i as i64, -(i as i64))).collect()
        }
    };
    DiffOpCombo { terms }
}

fn sign(i: u32) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

impl DiffOpCombo {
    /// Merges like terms and drops zeros, ordered by (a_power, e_index).
    pub fn normalized(&self) -> DiffOpCombo {
        let mut acc: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        for (c, a, e) in &self.terms {
            let v = acc.entry((*a, *e)).or_default();
            *v = &*v + c;
        }
        DiffOpCombo {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, e), c)| (c, a, e)).collect(),
        }
    }

    pub fn sub(&self, other: &DiffOpCombo) -> DiffOpCombo {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(c, a, e)| (-c, *a, *e)));
        DiffOpCombo { terms }.normalized()
    }

    /// Applies the combination to the weight-k operator with coefficient function `a`.
    pub fn apply(&self, a: &UPoly, k: &Scalar, alpha: &Scalar) -> UPoly {
        let op = WeightOp { weight: k.clone(), poly: a.clone(), points: BTreeMap::new(), alpha: alpha.clone() };
        let mut out = UPoly::zero();
        for (c, power, index) in &self.terms {
            let r = act_a(*power, &act_witt_def(*index, &op));
            out = &out + &r.poly.scale(c);
        }
        out
    }
}

/// Whether `Σ_{i=0}^{n+1} (−1)ⁱ C(n+1,i) a(m+i−1)` vanishes identically.
pub fn binomial_annihilates(a: &UPoly, n: u32) -> bool {
    let mut acc = UPoly::zero();
    for i in 0..=n + 1 {
        let shifted = a.compose(&UPoly::new(vec![Scalar::int(i as i64 - 1), Scalar::one()]));
        acc = &acc + &shifted.scale(&Scalar::int(sign(i) * binomial(n + 1, i)));
    }
    acc.is_zero()
}

pub type Matrix = Vec<Vec<Scalar>>;

/// ρ(zⁱ d/dz) on the basis (θ^{(0)}, …, θ^{(n−1)}, ε) for the degree-n ansatz
/// `e_k ε_m = (m+βk) ε_{m+k} + Σ c_i k^{n−i} θ_{m+k}^{(i)}`. Columns are sources.
pub fn rho_matrix(i: u32, coeffs: &[Scalar], n: usize, alpha: &Scalar, beta: &Scalar) -> Matrix {
    let dim = n + 1;
    let mut r = vec![vec![Scalar::zero(); dim]; dim];
    let c = |idx: i64| -> Scalar {
        if idx < 0 {
            Scalar::zero()
        } else {
            coeffs.get(idx as usize).cloned().unwrap_or_default()
        }
    };
    if i == 1 {
        for p in 0..n {
            r[p][p] = alpha - &Scalar::int(p as i64);
        }
        r[n][n] = beta.clone();
        if n > 0 {
            r[n - 1][n] = c(n as i64 - 1);
        }
        return r;
    }
    let ii = i as i64;
    for p in 0..n as i64 {
        let target = p + 1 - ii;
        if target >= 0 {
            let v = Scalar::int(sign(i - 1)) * (alpha * &Scalar::int(ii) - Scalar::int(p + 1));
            r[target as usize][p as usize] = v;
        }
    }
    let target = n as i64 - ii;
    if target >= 0 {
        r[target as usize][n] = factorial(i) * c(target);
    }
    r
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoViolation {
    pub i: u32,
    pub j: u32,
    /// `[ρ_i, ρ_j] − (j−i) ρ_{i+j−1}`
    pub defect: Matrix,
}

/// Checks `[ρ_i, ρ_j] = (j−i) ρ_{i+j−1}` for all `1 ≤ i < j ≤ n+1`.
pub fn rho_check(coeffs: &[Scalar], n: usize, alpha: &Scalar, beta: &Scalar) -> Vec<RhoViolation> {
    let top = n as u32 + 1;
    let rho: Vec<Matrix> = (0..=2 * top).map(|i| if i == 0 { Vec::new() } else { rho_matrix(i, coeffs, n, alpha, beta) }).collect();
    let mut out = Vec::new();
    for i in 1..=top {
        for j in (i + 1)..=top {
            let ab = mat_mul(&rho[i as usize], &rho[j as usize]);
            let ba = mat_mul(&rho[j as usize], &rho[i as usize]);
            let rhs = &rho[(i + j - 1) as usize];
            let f = Scalar::int(j as i64 - i as i64);
            let defect: Matrix = (0..=n)
                .map(|r| (0..=n).map(|c| &(&ab[r][c] - &ba[r][c]) - &(&f * &rhs[r][c])).collect())
                .collect();
            if defect.iter().flatten().any(|x| !x.is_zero()) {
                out.push(RhoViolation { i, j, defect });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn delta_under_witt_and_a() {
        let d = WeightOp::delta(3, Scalar::zero());
        let r = act_witt_def(2, &d);
        assert_eq!(r, WeightOp::delta(5, Scalar::zero()).scale(&s(5)));
        assert_eq!(act_a(4, &d), WeightOp::delta(7, Scalar::zero()));
        assert_eq!(act_a(0, &d), d);
    }

    #[test]
    fn delta_with_nonzero_alpha_leaves_extra_mass() {
        let d = WeightOp::delta(3, s(2));
        let r = act_witt_def(2, &d);
        assert_eq!(r.delta_coeff(), s(5));
        assert_eq!(r.points.get(&-3), Some(&s(4)));
    }

    #[test]
    fn theta_examples() {
        let t = theta_action_closed(2, &s(0), 1, &s(0));
        assert_eq!(t.coeffs, vec![s(4), s(-2)]);
        let t0 = theta_action_closed(5, &s(3), 0, &Scalar::frac(1, 2));
        assert_eq!(t0.coeffs, vec![s(3) + Scalar::frac(5, 2)]);
        let th = WeightOp::theta(s(3), 2, s(1));
        assert_eq!(act_witt_def(0, &th), th.scale(&s(3)));
        assert_eq!(act_a(3, &WeightOp::theta(s(0), 2, s(1))), WeightOp::theta(s(3), 2, s(1)));
    }

    #[test]
    fn eps_eta_examples() {
        let a = epsilon_eta_actions(3, &s(2), &s(0));
        assert_eq!(a.e_eps, EpsEta { weight: s(5), eps: s(2), eta: s(0) });
        let b = epsilon_eta_actions(3, &s(2), &s(1));
        assert_eq!(b.e_eta, EpsEta { weight: s(5), eps: s(0), eta: s(2) });
        let c = epsilon_eta_actions(0, &s(2), &Scalar::frac(1, 3));
        assert_eq!(c.phi, EpsEta { weight: s(2), eps: Scalar::frac(4, 3), eta: Scalar::frac(1, 3) });
    }

    #[test]
    fn zy_examples() {
        assert_eq!(zy_operator(1, ZyKind::Z).sub(&zy_operator(0, ZyKind::Z).sub(&zy_operator(1, ZyKind::Y))).terms, vec![]);
        let one = UPoly::constant(s(1));
        for n in 2..6 {
            assert!(zy_operator(n, ZyKind::Z).apply(&one, &s(3), &Scalar::frac(2, 7)).is_zero());
        }
        let m = UPoly::from_ints(&[0, 1]);
        assert_eq!(zy_operator(2, ZyKind::Y).apply(&m, &s(0), &s(0)), UPoly::constant(s(2)));
    }

    #[test]
    fn rho_examples() {
        assert!(rho_check(&[s(7)], 1, &Scalar::frac(1, 3), &s(-2)).is_empty());
        assert!(rho_check(&[s(0), s(0)], 2, &s(4), &s(9)).is_empty());
    }
}
