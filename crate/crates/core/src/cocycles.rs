//! 1-cocycles τ(k,m) for extensions 0 → T(α,γ) → M → T(β,γ) → 0, where
//! `e_k w_m = (m+βk) w_{m+k} + τ(k,m) v_{m+k}`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::{nullspace, solve};
use crate::polynomials::{MPoly, UPoly, Var};
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("invalid coboundary generator: {0}")]
    InvalidCoboundary(String),
    #[error("operation needs a polynomial cocycle")]
    NotPolynomial,
}

/// Parameters (α, β, γ); γ is kept with real part in [0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionParams {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
}

impl ExtensionParams {
    pub fn new(alpha: Scalar, beta: Scalar, gamma: Scalar) -> Self {
        ExtensionParams { alpha, beta, gamma: gamma.mod_one() }
    }

    /// γ = 0.
    pub fn integral(alpha: Scalar, beta: Scalar) -> Self {
        Self::new(alpha, beta, Scalar::zero())
    }

    pub fn gamma_integral(&self) -> bool {
        self.gamma.is_zero()
    }

    /// (1−β, 1−α, −γ)
    pub fn dual(&self) -> Self {
        let one = Scalar::one();
        Self::new(&one - &self.beta, &one - &self.alpha, -&self.gamma)
    }
}

impl fmt::Display for ExtensionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={}, beta={}, gamma={}", self.alpha, self.beta, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocycleKind {
    Zero,
    Poly,
    DeltaKM,
    DeltaM0,
    /// μ/m with its value at m = 0.
    InvM,
    /// μ/(m+k) with its value at m+k = 0 (the dual shape of `InvM`).
    InvMK,
    Mixed,
}

/// τ as a sum of parts:
/// `poly(k,m) + [k+m=0]·f(k) + [m=0]·μ₀(k) + [m≠0]·μ(k,m)/m + [m+k≠0]·ν(k,m)/(m+k)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cocycle {
    pub poly: MPoly,
    pub delta_km: UPoly,
    pub delta_m0: UPoly,
    pub inv_m: MPoly,
    pub inv_mk: MPoly,
}

fn k_var() -> MPoly {
    MPoly::var(Var::K)
}

fn m_var() -> MPoly {
    MPoly::var(Var::M)
}

impl Cocycle {
    pub fn zero() -> Self {
        Cocycle::default()
    }

    pub fn poly(p: MPoly) -> Self {
        Cocycle { poly: p, ..Default::default() }
    }

    pub fn delta_km(f: UPoly) -> Self {
        Cocycle { delta_km: f, ..Default::default() }
    }

    pub fn delta_m0(mu: UPoly) -> Self {
        Cocycle { delta_m0: mu, ..Default::default() }
    }

    /// `μ(k,m)/m` for m ≠ 0 and `at_zero(k)` at m = 0.
    pub fn inv_m(mu: MPoly, at_zero: UPoly) -> Self {
        Cocycle { inv_m: mu, delta_m0: at_zero, ..Default::default() }
    }

    /// `ν(k,m)/(m+k)` for m+k ≠ 0 and `at_pole(k)` at m+k = 0.
    pub fn inv_mk(nu: MPoly, at_pole: UPoly) -> Self {
        Cocycle { inv_mk: nu, delta_km: at_pole, ..Default::default() }
    }

    pub fn kind(&self) -> CocycleKind {
        let p = !self.poly.is_zero();
        let km = !self.delta_km.is_zero();
        let m0 = !self.delta_m0.is_zero();
        let im = !self.inv_m.is_zero();
        let imk = !self.inv_mk.is_zero();
        match (p, km, m0, im, imk) {
            (false, false, false, false, false) => CocycleKind::Zero,
            (true, false, false, false, false) => CocycleKind::Poly,
            (false, true, false, false, false) => CocycleKind::DeltaKM,
            (false, false, true, false, false) => CocycleKind::DeltaM0,
            (false, false, _, true, false) => CocycleKind::InvM,
            (false, _, false, false, true) => CocycleKind::InvMK,
            _ => CocycleKind::Mixed,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind() == CocycleKind::Zero
    }

    pub fn is_poly(&self) -> bool {
        matches!(self.kind(), CocycleKind::Poly | CocycleKind::Zero)
    }

    pub fn scale(&self, c: &Scalar) -> Cocycle {
        Cocycle {
            poly: self.poly.scale(c),
            delta_km: self.delta_km.scale(c),
            delta_m0: self.delta_m0.scale(c),
            inv_m: self.inv_m.scale(c),
            inv_mk: self.inv_mk.scale(c),
        }
    }

    pub fn add(&self, o: &Cocycle) -> Cocycle {
        Cocycle {
            poly: &self.poly + &o.poly,
            delta_km: &self.delta_km + &o.delta_km,
            delta_m0: &self.delta_m0 + &o.delta_m0,
            inv_m: &self.inv_m + &o.inv_m,
            inv_mk: &self.inv_mk + &o.inv_mk,
        }
    }

    pub fn sub(&self, o: &Cocycle) -> Cocycle {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    /// τ(k, m) for integer k and m ∈ γ+ℤ.
    pub fn eval(&self, k: i64, m: &Scalar) -> Scalar {
        let ks = Scalar::int(k);
        let mut v = Scalar::zero();
        if !self.poly.is_zero() {
            v = v + self.poly.eval(&[(Var::K, ks.clone()), (Var::M, m.clone())]);
        }
        let mk = m + &ks;
        if mk.is_zero() {
            v = v + self.delta_km.eval(&ks);
        } else if !self.inv_mk.is_zero() {
            v = v + self.inv_mk.eval(&[(Var::K, ks.clone()), (Var::M, m.clone())]) / mk;
        }
        if m.is_zero() {
            v = v + self.delta_m0.eval(&ks);
        } else if !self.inv_m.is_zero() {
            v = v + self.inv_m.eval(&[(Var::K, ks), (Var::M, m.clone())]) / m;
        }
        v
    }

    /// Moves the polynomial parts of μ/m and ν/(m+k) into `poly`, adjusting the
    /// point values so that τ is unchanged pointwise.
    pub fn canonical(&self) -> Cocycle {
        let mut out = self.clone();
        // μ = μ₀(k) + m·μ₁(k,m)
        let mut mu0 = MPoly::zero();
        let mut mu1 = MPoly::zero();
        for (e, c) in self.inv_m.terms() {
            if e[Var::M as usize] == 0 {
                mu0.add_term(*e, c);
            } else {
                let mut f = *e;
                f[Var::M as usize] -= 1;
                mu1.add_term(f, c);
            }
        }
        out.inv_m = mu0;
        out.poly = &out.poly + &mu1;
        let mu1_at0 = mu1.specialize(&[(Var::M, Scalar::zero())]).to_upoly(Var::K).expect("k only");
        out.delta_m0 = &out.delta_m0 - &mu1_at0;

        // ν(k, u−k) with u = m+k: split off the u-divisible part.
        let in_u = self.inv_mk.substitute(&[(Var::M, &m_var() - &k_var())]);
        let mut nu0 = MPoly::zero();
        let mut nu1 = MPoly::zero();
        for (e, c) in in_u.terms() {
            if e[Var::M as usize] == 0 {
                nu0.add_term(*e, c);
            } else {
                let mut f = *e;
                f[Var::M as usize] -= 1;
                nu1.add_term(f, c);
            }
        }
        let back = |p: &MPoly| p.substitute(&[(Var::M, &m_var() + &k_var())]);
        out.inv_mk = back(&nu0);
        let nu1_m = back(&nu1);
        out.poly = &out.poly + &nu1_m;
        let at_pole = nu1.specialize(&[(Var::M, Scalar::zero())]).to_upoly(Var::K).expect("k only");
        out.delta_km = &out.delta_km - &at_pole;
        out
    }

    pub fn degree(&self) -> u32 {
        let kmv = [Var::K, Var::M];
        [
            self.poly.total_degree(&kmv),
            self.delta_km.degree().unwrap_or(0) as u32,
            self.delta_m0.degree().unwrap_or(0) as u32,
            self.inv_m.total_degree(&kmv).saturating_sub(1),
            self.inv_mk.total_degree(&kmv).saturating_sub(1),
        ]
        .into_iter()
        .max()
        .unwrap_or(0)
    }
}

fn paren(text: String, multi: bool) -> String {
    if multi {
        format!("({text})")
    } else {
        text
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.inv_m.is_zero() {
            parts.push(format!("m^-1*{}", paren(self.inv_m.to_string(), self.inv_m.num_terms() > 1)));
        }
        if !self.inv_mk.is_zero() {
            parts.push(format!("(m+k)^-1*{}", paren(self.inv_mk.to_string(), self.inv_mk.num_terms() > 1)));
        }
        if !self.poly.is_zero() {
            parts.push(self.poly.to_string());
        }
        let delta = |name: &str, p: &UPoly| {
            let body = p.display_in("k");
            if body == "1" {
                name.to_string()
            } else {
                let multi = p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
                format!("{name}*{}", paren(body, multi))
            }
        };
        if !self.delta_km.is_zero() {
            parts.push(delta("delta(k+m,0)", &self.delta_km));
        }
        if !self.delta_m0.is_zero() {
            parts.push(delta("delta(m,0)", &self.delta_m0));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        write!(f, "{out}")
    }
}

/// Residual of the cocycle condition with α, β given as polynomials (so they may stay symbolic):
/// `(s−k)τ(k+s,m) − (m+βs)τ(k,m+s) + (m+βk)τ(s,m+k) − (m+s+αk)τ(s,m) + (m+k+αs)τ(k,m)`.
pub fn residual_symbolic(tau: &MPoly, alpha: &MPoly, beta: &MPoly) -> MPoly {
    let k = k_var();
    let s = MPoly::var(Var::S);
    let m = m_var();
    let at = |kk: &MPoly, mm: &MPoly| tau.substitute(&[(Var::K, kk.clone()), (Var::M, mm.clone())]);
    let t1 = &(&s - &k) * &at(&(&k + &s), &m);
    let t2 = &(&m + &(beta * &s)) * &at(&k, &(&m + &s));
    let t3 = &(&m + &(beta * &k)) * &at(&s, &(&m + &k));
    let t4 = &(&(&m + &s) + &(alpha * &k)) * &at(&s, &m);
    let t5 = &(&(&m + &k) + &(alpha * &s)) * &at(&k, &m);
    t1 - t2 + t3 - t4 + t5
}

/// Exact residual polynomial in k, s, m of a polynomial cocycle.
pub fn residual(tau: &Cocycle, params: &ExtensionParams) -> Result<MPoly, CocycleError> {
    if !tau.is_poly() {
        return Err(CocycleError::NotPolynomial);
    }
    Ok(residual_symbolic(
        &tau.poly,
        &MPoly::constant(params.alpha.clone()),
        &MPoly::constant(params.beta.clone()),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub k: i64,
    pub s: i64,
    pub m: Scalar,
    pub defect: Scalar,
}

/// Memoized τ values keyed by (k, m − γ).
pub(crate) struct TauTable<'a> {
    tau: &'a Cocycle,
    gamma: Scalar,
    cache: HashMap<(i64, i64), Scalar>,
}

impl<'a> TauTable<'a> {
    pub(crate) fn new(tau: &'a Cocycle, gamma: &Scalar) -> Self {
        TauTable { tau, gamma: gamma.clone(), cache: HashMap::new() }
    }

    pub(crate) fn get(&mut self, k: i64, i: i64) -> Scalar {
        let (tau, gamma) = (self.tau, &self.gamma);
        self.cache.entry((k, i)).or_insert_with(|| tau.eval(k, &(gamma + &Scalar::int(i)))).clone()
    }
}

/// Evaluates the cocycle condition for all k, s ∈ [−W, W] and m ∈ γ + [−W, W].
pub fn residual_window(tau: &Cocycle, params: &ExtensionParams, w: i64) -> Vec<Violation> {
    let mut table = TauTable::new(tau, &params.gamma);
    let (a, b) = (&params.alpha, &params.beta);
    let mut out = Vec::new();
    for k in -w..=w {
        for s in -w..=w {
            for i in -w..=w {
                let m = &params.gamma + &Scalar::int(i);
                let (ks, ss) = (Scalar::int(k), Scalar::int(s));
                let v = &Scalar::int(s - k) * &table.get(k + s, i)
                    - &(&m + &(b * &ss)) * &table.get(k, i + s)
                    + &(&m + &(b * &ks)) * &table.get(s, i + k)
                    - &(&(&m + &ss) + &(a * &ks)) * &table.get(s, i)
                    + &(&(&m + &ks) + &(a * &ss)) * &table.get(k, i);
                if !v.is_zero() {
                    out.push(Violation { k, s, m, defect: v });
                }
            }
        }
    }
    out
}

/// Basis change `w_m ↦ w_m + g(m) v_m` with
/// `g(x) = poly_g(x) + point_g·[x=0] + (inv_g − delta_g)·[x≠0]/x`.
///
/// `point_g` and `delta_g` need γ ∈ ℤ (`delta_g` only at α = 0, β = 1, where it yields
/// `delta_g·(δ_{m,0} − δ_{m+k,0})`); `inv_g` needs γ ∉ ℤ.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoboundaryGen {
    pub poly_g: UPoly,
    pub delta_g: Scalar,
    pub point_g: Scalar,
    pub inv_g: Scalar,
}

impl CoboundaryGen {
    pub fn poly(g: UPoly) -> Self {
        CoboundaryGen { poly_g: g, ..Default::default() }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut v = self.poly_g.eval(x);
        if x.is_zero() {
            v = v + &self.point_g;
        } else {
            v = v + (&self.inv_g - &self.delta_g) / x;
        }
        v
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        CoboundaryGen {
            poly_g: self.poly_g.scale(c),
            delta_g: &self.delta_g * c,
            point_g: &self.point_g * c,
            inv_g: &self.inv_g * c,
        }
    }
}

/// `τ_g(k,m) = (m+αk) g(m) − (m+βk) g(m+k)`.
pub fn coboundary(g: &CoboundaryGen, params: &ExtensionParams) -> Result<Cocycle, CocycleError> {
    let (a, b) = (&params.alpha, &params.beta);
    let integral = params.gamma_integral();
    let k = k_var();
    let m = m_var();
    let gm = g.poly_g.to_mpoly(Var::M);
    let gmk = gm.substitute(&[(Var::M, &m + &k)]);
    let poly = &(&(&m + &k.scale(a)) * &gm) - &(&(&m + &k.scale(b)) * &gmk);
    let mut out = Cocycle::poly(poly);
    let one_minus_b = &Scalar::one() - b;
    if !g.point_g.is_zero() {
        if !integral {
            return Err(CocycleError::InvalidCoboundary("point shift needs integral gamma".into()));
        }
        let c = &g.point_g;
        out.delta_m0 = &out.delta_m0 + &UPoly::monomial(a * c, 1);
        out.delta_km = &out.delta_km + &UPoly::monomial(&one_minus_b * c, 1);
    }
    if !g.inv_g.is_zero() {
        if integral {
            return Err(CocycleError::InvalidCoboundary("1/x shift needs non-integral gamma".into()));
        }
        let c = &g.inv_g;
        out.inv_m = &out.inv_m + &k.scale(&(a * c));
        out.inv_mk = &out.inv_mk + &k.scale(&(&one_minus_b * c));
    }
    if !g.delta_g.is_zero() {
        if !(integral && a.is_zero() && b.is_one()) {
            return Err(CocycleError::InvalidCoboundary(
                "delta generator needs alpha = 0, beta = 1, integral gamma".into(),
            ));
        }
        let c = UPoly::constant(g.delta_g.clone());
        out.delta_m0 = &out.delta_m0 + &c;
        out.delta_km = &out.delta_km - &c;
    }
    Ok(out)
}

const CHECK_WINDOW: i64 = 8;

/// Symbolic check for polynomial cocycles, window check for the rest.
pub fn is_cocycle(tau: &Cocycle, params: &ExtensionParams) -> bool {
    match residual(tau, params) {
        Ok(r) => r.is_zero(),
        Err(_) => residual_window(tau, params, CHECK_WINDOW).is_empty(),
    }
}

/// Coboundary generators admissible at `params`, excluding the polynomial ones.
fn special_generators(params: &ExtensionParams) -> Vec<CoboundaryGen> {
    let one = Scalar::one();
    let mut gens = Vec::new();
    if params.gamma_integral() {
        gens.push(CoboundaryGen { point_g: one.clone(), ..Default::default() });
        if params.alpha.is_zero() && params.beta.is_one() {
            gens.push(CoboundaryGen { delta_g: one, ..Default::default() });
        }
    } else {
        gens.push(CoboundaryGen { inv_g: one, ..Default::default() });
    }
    gens
}

/// Coefficient equations for `target = Σ x_i basis_i + coboundary(g)`; columns are the basis
/// elements followed by the generators in `gens`.
fn combination_system(
    target: &Cocycle,
    basis: &[Cocycle],
    params: &ExtensionParams,
    degree_cap: usize,
) -> Result<(Vec<CoboundaryGen>, Vec<Vec<Scalar>>, Vec<Scalar>), CocycleError> {
    let mut gens: Vec<CoboundaryGen> =
        (0..=degree_cap).map(|d| CoboundaryGen::poly(UPoly::monomial(Scalar::one(), d))).collect();
    let all_poly = target.is_poly() && basis.iter().all(Cocycle::is_poly);
    if !all_poly {
        gens.extend(special_generators(params));
    }
    let cobs: Vec<Cocycle> = gens.iter().map(|g| coboundary(g, params)).collect::<Result<_, _>>()?;
    let columns: Vec<&Cocycle> = basis.iter().chain(cobs.iter()).collect();

    if all_poly {
        let mut keys: Vec<crate::polynomials::Exps> = Vec::new();
        for p in std::iter::once(&target.poly).chain(columns.iter().map(|c| &c.poly)) {
            for (e, _) in p.terms() {
                if !keys.contains(e) {
                    keys.push(*e);
                }
            }
        }
        let rows = keys.iter().map(|e| columns.iter().map(|c| c.poly.coeff(e)).collect()).collect();
        let rhs = keys.iter().map(|e| target.poly.coeff(e)).collect();
        return Ok((gens, rows, rhs));
    }
    let w = (degree_cap as i64 + 4).max(CHECK_WINDOW);
    let mut tt = TauTable::new(target, &params.gamma);
    let mut tc: Vec<TauTable> = columns.iter().map(|c| TauTable::new(c, &params.gamma)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in -w..=w {
        for i in -w..=w {
            rows.push(tc.iter_mut().map(|t| t.get(k, i)).collect());
            rhs.push(tt.get(k, i));
        }
    }
    Ok((gens, rows, rhs))
}

fn combine_generators(gens: &[CoboundaryGen], coefs: &[Scalar]) -> CoboundaryGen {
    let mut g = CoboundaryGen::default();
    for (gen, coef) in gens.iter().zip(coefs) {
        let part = gen.scale(coef);
        g = CoboundaryGen {
            poly_g: &g.poly_g + &part.poly_g,
            delta_g: &g.delta_g + &part.delta_g,
            point_g: &g.point_g + &part.point_g,
            inv_g: &g.inv_g + &part.inv_g,
        };
    }
    g
}

fn check_cocycles(items: &[(&str, &Cocycle)], params: &ExtensionParams) -> Result<(), CocycleError> {
    for (name, t) in items {
        if !is_cocycle(t, params) {
            return Err(CocycleError::NotACocycle(format!("{name} at {params}")));
        }
    }
    Ok(())
}

/// Writes `target = Σ x_i basis_i + coboundary(g)` if possible.
pub fn decompose(
    target: &Cocycle,
    basis: &[Cocycle],
    params: &ExtensionParams,
    degree_cap: usize,
) -> Result<Option<(Vec<Scalar>, CoboundaryGen)>, CocycleError> {
    check_cocycles(&[("target", target)], params)?;
    for (i, b) in basis.iter().enumerate() {
        check_cocycles(&[(&format!("basis element {i}"), b)], params)?;
    }
    let (gens, rows, rhs) = combination_system(target, basis, params, degree_cap)?;
    let Some(x) = solve(&rows, &rhs, basis.len() + gens.len()) else { return Ok(None) };
    let g = combine_generators(&gens, &x[basis.len()..]);
    Ok(Some((x[..basis.len()].to_vec(), g)))
}

/// True when τ is a coboundary with `deg poly_g ≤ degree_cap`.
pub fn is_trivial(tau: &Cocycle, params: &ExtensionParams, degree_cap: usize) -> Result<bool, CocycleError> {
    Ok(decompose(tau, &[], params, degree_cap)?.is_some())
}

/// Finds `(c, g)` with `tau1 = c·tau2 + coboundary(g)`, `c ≠ 0`, `deg poly_g ≤ degree_cap`.
pub fn equivalent(
    tau1: &Cocycle,
    tau2: &Cocycle,
    params: &ExtensionParams,
    degree_cap: usize,
) -> Result<Option<(Scalar, CoboundaryGen)>, CocycleError> {
    check_cocycles(&[("first argument", tau1), ("second argument", tau2)], params)?;
    let (gens, rows, rhs) = combination_system(tau1, std::slice::from_ref(tau2), params, degree_cap)?;
    let ncols = 1 + gens.len();
    let Some(mut x) = solve(&rows, &rhs, ncols) else { return Ok(None) };
    if x[0].is_zero() {
        match nullspace(&rows, ncols).into_iter().find(|v| !v[0].is_zero()) {
            Some(v) => x = x.iter().zip(&v).map(|(a, b)| a + b).collect(),
            None => return Ok(None),
        }
    }
    Ok(Some((x[0].clone(), combine_generators(&gens, &x[1..]))))
}

/// τ*(k,m) = τ(k, −m−k) at parameters (1−β, 1−α, −γ).
pub fn dualize(tau: &Cocycle, params: &ExtensionParams) -> (Cocycle, ExtensionParams) {
    let flip = |p: &MPoly| p.substitute(&[(Var::M, -&(&m_var() + &k_var()))]);
    let dual = Cocycle {
        poly: flip(&tau.poly),
        delta_km: tau.delta_m0.clone(),
        delta_m0: tau.delta_km.clone(),
        inv_m: -flip(&tau.inv_mk),
        inv_mk: -flip(&tau.inv_m),
    };
    (dual, params.dual())
}

fn factorial(n: u32) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, i| acc * Scalar::int(i))
}

/// `Σ c_i k^{n−i} θ^{(i)}  ↦  Σ c_i k^{n−i} (m+k)^i / i!`. Coefficients may involve α.
pub fn theta_to_m(coeffs: &[MPoly], n: u32) -> MPoly {
    let u = &m_var() + &k_var();
    let mut out = MPoly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        let i = i as u32;
        let term = &k_var().pow(n - i) * &u.pow(i).scale(&factorial(i).inv().expect("nonzero"));
        out = out + c * &term;
    }
    out
}

/// Inverse of [`theta_to_m`] on homogeneous degree-n polynomials divisible by k.
pub fn m_to_theta(p: &MPoly, n: u32) -> Option<Vec<MPoly>> {
    let in_u = p.substitute(&[(Var::M, &m_var() - &k_var())]);
    let mut coeffs = vec![MPoly::zero(); n as usize];
    for (e, c) in in_u.terms() {
        let (a, i) = (e[Var::K as usize], e[Var::M as usize]);
        if a + i != n || i >= n {
            return None;
        }
        let mut rest = *e;
        rest[Var::K as usize] = 0;
        rest[Var::M as usize] = 0;
        coeffs[i as usize].add_term(rest, &(c * &factorial(i)));
    }
    Some(coeffs)
}

/// Renders `Σ c_i k^{n−i} θ^{(i)}`.
pub fn format_theta(coeffs: &[MPoly], n: u32) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let kp = n - i as u32;
        let mono = match kp {
            0 => format!("θ({i})"),
            1 => format!("k*θ({i})"),
            _ => format!("k^{kp}*θ({i})"),
        };
        let text = match c.constant_value() {
            Some(v) if v.is_one() => mono,
            Some(v) if (-&v).is_one() => format!("-{mono}"),
            Some(v) if v.is_rational() => format!("{v}*{mono}"),
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

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &str) -> MPoly {
        t.parse().unwrap()
    }

    fn params(a: i64, b: i64) -> ExtensionParams {
        ExtensionParams::integral(Scalar::int(a), Scalar::int(b))
    }

    #[test]
    fn residual_examples() {
        assert!(residual(&Cocycle::poly(p("k")), &params(3, 3)).unwrap().is_zero());
        assert!(!residual(&Cocycle::poly(p("m^2")), &params(0, 1)).unwrap().is_zero());
        assert!(residual(&Cocycle::poly(p("k^3 + 2*k^2*m")), &params(2, 0)).unwrap().is_zero());
        assert_eq!(residual(&Cocycle::delta_km(UPoly::from_ints(&[1])), &params(0, 1)), Err(CocycleError::NotPolynomial));
    }

    #[test]
    fn window_examples() {
        let k3 = UPoly::from_ints(&[0, 0, 0, 1]);
        assert!(residual_window(&Cocycle::delta_km(k3.clone()), &params(0, -1), 6).is_empty());
        assert!(!residual_window(&Cocycle::delta_km(k3), &params(0, 0), 6).is_empty());
        let half = ExtensionParams::new(Scalar::zero(), Scalar::one(), Scalar::frac(1, 2));
        assert!(residual_window(&Cocycle::inv_m(p("k"), UPoly::zero()), &half, 6).is_empty());
        assert!(!residual_window(&Cocycle::inv_m(p("k"), UPoly::zero()), &params(0, 1), 6).is_empty());
    }

    #[test]
    fn coboundary_examples() {
        let g1 = CoboundaryGen::poly(UPoly::from_ints(&[1]));
        assert_eq!(coboundary(&g1, &params(5, 2)).unwrap(), Cocycle::poly(p("3*k")));
        let gx = CoboundaryGen::poly(UPoly::from_ints(&[0, 1]));
        assert_eq!(coboundary(&gx, &params(0, 0)).unwrap(), Cocycle::poly(p("-k*m")));
        let gd = CoboundaryGen { delta_g: Scalar::one(), ..Default::default() };
        let c = coboundary(&gd, &params(0, 1)).unwrap();
        assert_eq!(c.delta_m0, UPoly::from_ints(&[1]));
        assert_eq!(c.delta_km, UPoly::from_ints(&[-1]));
        assert!(matches!(coboundary(&gd, &params(1, 1)), Err(CocycleError::InvalidCoboundary(_))));
    }

    #[test]
    fn generator_pointwise_matches_parts() {
        let pr = params(2, -3);
        let g = CoboundaryGen { poly_g: UPoly::from_ints(&[1, 0, 2]), point_g: Scalar::int(5), ..Default::default() };
        let c = coboundary(&g, &pr).unwrap();
        for k in -4..=4 {
            for m in -4..=4 {
                let ms = Scalar::int(m);
                let direct = &(&ms + &(&pr.alpha * &Scalar::int(k))) * &g.eval(&ms)
                    - &(&ms + &(&pr.beta * &Scalar::int(k))) * &g.eval(&Scalar::int(m + k));
                assert_eq!(c.eval(k, &ms), direct, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let pr = params(1, 0);
        let base = Cocycle::poly(p("k^2"));
        let g = CoboundaryGen::poly(UPoly::from_ints(&[0, 0, 1]));
        let shifted = base.add(&coboundary(&g, &pr).unwrap());
        let (c, _) = equivalent(&shifted, &base, &pr, 3).unwrap().unwrap();
        assert!(c.is_one());
        assert_eq!(equivalent(&Cocycle::poly(p("k")), &Cocycle::poly(p("k*m")), &pr, 3).unwrap(), None);
        let d_m0 = Cocycle::delta_m0(UPoly::from_ints(&[1]));
        let d_km = Cocycle::delta_km(UPoly::from_ints(&[1]));
        let (c, g) = equivalent(&d_m0, &d_km, &params(0, 1), 1).unwrap().unwrap();
        assert!(c.is_one());
        assert!(!g.delta_g.is_zero());
        assert!(matches!(
            equivalent(&Cocycle::poly(p("k")), &base, &params(0, 1), 2),
            Err(CocycleError::NotACocycle(_))
        ));
    }

    #[test]
    fn dual_examples() {
        let (d, dp) = dualize(&Cocycle::delta_km(UPoly::from_ints(&[0, 0, 0, 1])), &params(0, -1));
        assert_eq!(d, Cocycle::delta_m0(UPoly::from_ints(&[0, 0, 0, 1])));
        assert_eq!(dp, params(2, 1));
        let (d, dp) = dualize(&Cocycle::poly(p("k^3 + 2*k^2*m")), &params(2, 0));
        assert_eq!(d, Cocycle::poly(p("-k^3 - 2*k^2*m")));
        assert_eq!(dp, params(1, -1));
        assert!(residual(&d, &dp).unwrap().is_zero());
        let third = ExtensionParams::new(Scalar::zero(), Scalar::one(), Scalar::frac(1, 3));
        let inv = Cocycle::inv_m(p("k^3 + k^2*m"), UPoly::zero());
        let (d1, p1) = dualize(&inv, &third);
        assert_eq!(p1.gamma, Scalar::frac(2, 3));
        let (d2, p2) = dualize(&d1, &p1);
        assert_eq!((d2, p2), (inv, third));
    }

    #[test]
    fn canonical_preserves_values() {
        let pr = ExtensionParams::new(Scalar::int(2), Scalar::one(), Scalar::zero());
        let t = Cocycle::inv_m(p("k^3 + 2*k^2*m + k*m^2"), UPoly::from_ints(&[0, 1]))
            .add(&Cocycle::inv_mk(p("k^2 + m*k + 3*m^2"), UPoly::from_ints(&[4])));
        let c = t.canonical();
        assert_eq!(c.inv_m, p("k^3"));
        for k in -5..=5 {
            for m in -5..=5 {
                assert_eq!(c.eval(k, &Scalar::int(m)), t.eval(k, &Scalar::int(m)));
            }
        }
        let _ = pr;
    }

    #[test]
    fn theta_conversion_round_trip() {
        let coeffs = vec![p("alpha - 1"), p("-1"), p("-12"), p("24")];
        let m = theta_to_m(&coeffs, 4);
        assert_eq!(m_to_theta(&m, 4).unwrap(), coeffs);
        assert_eq!(theta_to_m(&[p("1"), p("-2")], 3), p("k^3 - 2*k^2*(m+k)"));
        assert_eq!(format_theta(&[p("1"), p("-2")], 3), "k^3*θ(0) - 2*k^2*θ(1)");
    }
}
