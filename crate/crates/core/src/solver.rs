//! Classification engine: residual systems for homogeneous polynomial cocycles, H¹ at
//! specialized parameters, the parametric scan in α, the reduced two-family system used as an
//! independent oracle, and the δ / m⁻¹ classifications.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycles::{
    coboundary, decompose, equivalent, is_trivial, m_to_theta, residual_symbolic, residual_window, theta_to_m,
    CoboundaryGen, Cocycle, ExtensionParams,
};
use crate::linalg::{bareiss, det_poly, nullspace, rank, RatFunc};
use crate::polynomials::{solve_upoly, upoly_gcd, Exps, MPoly, UPoly, Var};
use crate::scalars::Scalar;
use crate::tables::{printed_m_rows_at, printed_theta_rows_at, NonPolyShape, NONPOLY_TABLE};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const MAX_SCAN_DEGREE: u32 = 14;

/// Linear system with entries in ℚ[α, β].
#[derive(Debug, Clone)]
pub struct LinSystem {
    pub rows: Vec<Vec<MPoly>>,
    pub unknowns: Vec<String>,
}

fn on_line(p: &MPoly, offset: &Scalar) -> UPoly {
    let beta = &MPoly::var(Var::Alpha) - &MPoly::constant(offset.clone());
    p.substitute(&[(Var::Beta, beta)]).to_upoly(Var::Alpha).expect("entries involve only alpha and beta")
}

impl LinSystem {
    pub fn specialize(&self, alpha: &Scalar, beta: &Scalar) -> Vec<Vec<Scalar>> {
        let point = [(Var::Alpha, alpha.clone()), (Var::Beta, beta.clone())];
        self.rows.iter().map(|r| r.iter().map(|e| e.eval(&point)).collect()).collect()
    }

    /// Entries as polynomials in α after substituting β = α − offset.
    pub fn on_line(&self, offset: &Scalar) -> Vec<Vec<UPoly>> {
        self.rows.iter().map(|r| r.iter().map(|e| on_line(e, offset)).collect()).collect()
    }
}

fn km_exps(a: u32, b: u32) -> Exps {
    let mut e = [0; 6];
    e[Var::K as usize] = a;
    e[Var::M as usize] = b;
    e
}

/// Residual equations for `τ = Σ_{a=1..n} c_a k^a m^{n−a}` with symbolic α, β.
#[derive(Debug)]
pub struct ResidualSystem {
    pub n: u32,
    /// Row labels: every monomial k^i s^j m^l with i+j+l = n+1.
    pub monomials: Vec<Exps>,
    pub system: LinSystem,
    /// Coordinates of the coboundary of g = x^{n−1}.
    pub coboundary: Vec<MPoly>,
}

fn build_residual_system(n: u32) -> ResidualSystem {
    let alpha = MPoly::var(Var::Alpha);
    let beta = MPoly::var(Var::Beta);
    let mut monomials = Vec::new();
    for i in (0..=n + 1).rev() {
        for j in (0..=n + 1 - i).rev() {
            let mut e = [0; 6];
            e[Var::K as usize] = i;
            e[Var::S as usize] = j;
            e[Var::M as usize] = n + 1 - i - j;
            monomials.push(e);
        }
    }
    let columns: Vec<_> = (1..=n)
        .map(|a| residual_symbolic(&MPoly::km(Scalar::one(), a, n - a), &alpha, &beta).coefficients_in(&[Var::K, Var::S, Var::M]))
        .collect();
    let rows = monomials
        .iter()
        .map(|e| columns.iter().map(|c| c.get(e).cloned().unwrap_or_default()).collect())
        .collect();
    let coboundary = if n == 0 {
        Vec::new()
    } else {
        let g = CoboundaryGen::poly(UPoly::monomial(Scalar::one(), n as usize - 1));
        let k = MPoly::var(Var::K);
        let m = MPoly::var(Var::M);
        let gm = g.poly_g.to_mpoly(Var::M);
        let gmk = gm.substitute(&[(Var::M, &m + &k)]);
        let cob = &(&(&m + &(&alpha * &k)) * &gm) - &(&(&m + &(&beta * &k)) * &gmk);
        let by_km = cob.coefficients_in(&[Var::K, Var::M]);
        (1..=n).map(|a| by_km.get(&km_exps(a, n - a)).cloned().unwrap_or_default()).collect()
    };
    let unknowns = (1..=n).map(|a| format!("k^{a}*m^{}", n - a)).collect();
    ResidualSystem { n, monomials, system: LinSystem { rows, unknowns }, coboundary }
}

/// Cached residual system of degree n.
pub fn residual_system(n: u32) -> Arc<ResidualSystem> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ResidualSystem>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache lock").get(&n) {
        return s.clone();
    }
    let built = Arc::new(build_residual_system(n));
    cache.lock().expect("cache lock").entry(n).or_insert(built).clone()
}

/// `Σ v[a−1] k^a m^{n−a}`.
pub fn vector_to_poly(n: u32, v: &[Scalar]) -> MPoly {
    let mut p = MPoly::zero();
    for (i, c) in v.iter().enumerate() {
        let a = i as u32 + 1;
        p.add_term(km_exps(a, n - a), c);
    }
    p
}

/// Coordinates of a homogeneous degree-n, k-divisible polynomial.
pub fn poly_to_vector(n: u32, p: &MPoly) -> Option<Vec<Scalar>> {
    let mut v = vec![Scalar::zero(); n as usize];
    for (e, c) in p.terms() {
        let (a, b) = (e[Var::K as usize], e[Var::M as usize]);
        let others = e.iter().enumerate().any(|(i, x)| *x > 0 && i != Var::K as usize && i != Var::M as usize);
        if others || a + b != n || a == 0 {
            return None;
        }
        v[a as usize - 1] = c.clone();
    }
    Some(v)
}

fn specialize_vec(v: &[MPoly], alpha: &Scalar, beta: &Scalar) -> Vec<Scalar> {
    let point = [(Var::Alpha, alpha.clone()), (Var::Beta, beta.clone())];
    v.iter().map(|e| e.eval(&point)).collect()
}

/// Basis of homogeneous degree-n polynomial cocycles.
pub fn poly_cocycle_space(n: u32, params: &ExtensionParams) -> Vec<Cocycle> {
    let sys = residual_system(n);
    let a = sys.system.specialize(&params.alpha, &params.beta);
    nullspace(&a, n as usize).iter().map(|v| Cocycle::poly(vector_to_poly(n, v))).collect()
}

#[derive(Debug, Clone)]
pub struct H1Report {
    pub n: u32,
    pub params: ExtensionParams,
    pub cocycle_space_dim: usize,
    pub coboundary_space_dim: usize,
    pub h1_dim: usize,
    pub representatives: Vec<Cocycle>,
}

fn extends_rank(chosen: &[Vec<Scalar>], v: &[Scalar]) -> bool {
    let mut m = chosen.to_vec();
    m.push(v.to_vec());
    rank(&m) > rank(chosen)
}

/// Reduces modulo the coboundary (clearing its lowest-k coordinate) and scales the highest-k
/// coefficient to 1.
fn default_normalize(v: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = v.to_vec();
    if let Some(j) = b.iter().position(|x| !x.is_zero()) {
        let f = &out[j] / &b[j];
        out = out.iter().zip(b).map(|(x, y)| x - &(&f * y)).collect();
    }
    if let Some(lead) = out.iter().rev().find(|x| !x.is_zero()).cloned() {
        out = out.iter().map(|x| x / &lead).collect();
    }
    out
}

/// H¹ restricted to homogeneous degree-n polynomial cocycles. Representatives are taken from
/// the printed rows at these parameters where those are valid, then completed from the solve.
pub fn h1_poly(n: u32, params: &ExtensionParams) -> H1Report {
    let mut printed = Vec::new();
    if n > 0 {
        printed.extend(printed_m_rows_at(n, &params.alpha, &params.beta));
        printed.extend(printed_theta_rows_at(n, &params.alpha, &params.beta));
    }
    h1_poly_with(n, params, &printed)
}

/// [`h1_poly`] with representatives taken only from the solve.
pub fn h1_poly_native(n: u32, params: &ExtensionParams) -> H1Report {
    h1_poly_with(n, params, &[])
}

/// [`h1_poly`] preferring the given polynomials (in order) as representatives whenever they are
/// cocycles independent modulo coboundaries and the representatives chosen so far.
pub fn h1_poly_with(n: u32, params: &ExtensionParams, preferred: &[MPoly]) -> H1Report {
    let sys = residual_system(n);
    let a = sys.system.specialize(&params.alpha, &params.beta);
    let z = nullspace(&a, n as usize);
    let b = specialize_vec(&sys.coboundary, &params.alpha, &params.beta);
    let b_nonzero = b.iter().any(|x| !x.is_zero());
    let coboundary_space_dim = usize::from(b_nonzero);
    let h1_dim = z.len() - coboundary_space_dim;

    let mut chosen: Vec<Vec<Scalar>> = if b_nonzero { vec![b.clone()] } else { Vec::new() };
    let mut representatives = Vec::new();
    for p in preferred {
        if representatives.len() == h1_dim {
            break;
        }
        let Some(v) = poly_to_vector(n, p) else { continue };
        let solves = a.iter().all(|row| row.iter().zip(&v).fold(Scalar::zero(), |acc, (x, y)| acc + x * y).is_zero());
        if solves && extends_rank(&chosen, &v) {
            chosen.push(v);
            representatives.push(Cocycle::poly(p.clone()));
        }
    }
    for v in &z {
        if representatives.len() == h1_dim {
            break;
        }
        if extends_rank(&chosen, v) {
            let w = default_normalize(v, &b);
            chosen.push(w.clone());
            representatives.push(Cocycle::poly(vector_to_poly(n, &w)));
        }
    }
    H1Report {
        n,
        params: params.clone(),
        cocycle_space_dim: z.len(),
        coboundary_space_dim,
        h1_dim,
        representatives,
    }
}

fn factorial(n: u32) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, i| acc * Scalar::int(i))
}

fn sign(e: u32) -> Scalar {
    if e % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

/// Rows of the reduced system in θ-coordinates c_0, …, c_{n−1}:
/// for 2 ≤ i ≤ n, `i!(α−β−(n−1)) c_{n−i} − (−1)^{i−1}(iα−n) c_{n−1}`;
/// for 2 ≤ i < j, i+j ≤ n+1,
/// `(i+j−1)!(j−i) c_{n−i−j+1} − j!(−1)^{i−1}(iα−(n−j+1)) c_{n−j} + i!(−1)^{j−1}(jα−(n−i+1)) c_{n−i}`.
pub fn lemma_ab_system(n: u32) -> LinSystem {
    let alpha = MPoly::var(Var::Alpha);
    let beta = MPoly::var(Var::Beta);
    let c = |v: i64| MPoly::int(v);
    let nn = n as i64;
    let mut rows = Vec::new();
    let d = &(&alpha - &beta) - &c(nn - 1);
    for i in 2..=n {
        let mut row = vec![MPoly::zero(); n as usize];
        row[(n - i) as usize] = d.scale(&factorial(i));
        let t = (&alpha.scale(&Scalar::int(i as i64)) - &c(nn)).scale(&sign(i - 1));
        row[(n - 1) as usize] = &row[(n - 1) as usize] - &t;
        rows.push(row);
    }
    for i in 2..=n {
        for j in (i + 1)..=n {
            if i + j > n + 1 {
                break;
            }
            rows.push(a1_row(n, i, j));
        }
    }
    LinSystem { rows, unknowns: (0..n).map(|i| format!("c{i}")).collect() }
}

fn a1_row(n: u32, i: u32, j: u32) -> Vec<MPoly> {
    let alpha = MPoly::var(Var::Alpha);
    let (ni, nj, nn) = (i as i64, j as i64, n as i64);
    let mut row = vec![MPoly::zero(); n as usize];
    let mut add = |col: u32, p: MPoly| row[col as usize] = &row[col as usize] + &p;
    add(n + 1 - i - j, MPoly::constant(&factorial(i + j - 1) * &Scalar::int(nj - ni)));
    let t2 = (&alpha.scale(&Scalar::int(ni)) - &MPoly::int(nn - nj + 1)).scale(&(&factorial(j) * &sign(i - 1)));
    add(n - j, -t2);
    let t3 = (&alpha.scale(&Scalar::int(nj)) - &MPoly::int(nn - ni + 1)).scale(&(&factorial(i) * &sign(j - 1)));
    add(n - i, t3);
    row
}

/// Regenerates `(b′_{i,n−3}, b_{i,n−2})` for 1 ≤ i ≤ n−5 on β = α−(n−1) with c_{n−1} = 0:
/// the i=3 family rows, reduced by the i=2 family rows until only c_{n−3}, c_{n−2} remain.
/// Each i=3 row is scaled so that its c_{n−5−i} entry is −i(i+5)!.
pub fn b_prime_rows(n: u32) -> Vec<(UPoly, UPoly)> {
    if n < 6 {
        return Vec::new();
    }
    let offset = Scalar::int(n as i64 - 1);
    let line = |row: Vec<MPoly>| -> Vec<UPoly> { row[..(n - 1) as usize].iter().map(|e| on_line(e, &offset)).collect() };
    // pivot column of the i=2 row with index j is n−j−1
    let a_rows: Vec<Vec<UPoly>> = (3..=n - 1).map(|j| line(a1_row(n, 2, j))).collect();
    let mut out = Vec::new();
    for ib in 1..=n - 5 {
        let j = ib + 3;
        let mut row = line(a1_row(n, 3, j));
        let col = (n - 5 - ib) as usize;
        let target = -(&Scalar::int(ib as i64) * &factorial(ib + 5));
        let entry = row[col].coeff(0);
        let scale = &target / &entry;
        row = row.iter().map(|e| e.scale(&scale)).collect();
        for c in 0..=(n - 4) as usize {
            if row[c].is_zero() {
                continue;
            }
            let a = &a_rows[n as usize - 4 - c];
            let piv = a[c].coeff(0);
            assert!(a[c].degree() == Some(0) && !piv.is_zero(), "constant pivot expected");
            let f = row[c].scale(&piv.inv().expect("nonzero"));
            row = row.iter().zip(a).map(|(x, y)| x - &(&f * y)).collect();
        }
        out.push((row[(n - 3) as usize].clone(), row[(n - 2) as usize].clone()));
    }
    out
}

/// Checks, with α and β indeterminate, that the first-family rows are exactly (up to nonzero
/// constants) coefficients of k^i s J^{n−i} (J = m+k+s) of the full residual, and that the
/// coboundary's c_{n−1} coordinate is (n−1)!(α−β−(n−1)). Together these force α−β = n−1 for
/// any class beyond the coboundary.
pub fn offset_forcing_check(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let alpha = MPoly::var(Var::Alpha);
    let beta = MPoly::var(Var::Beta);
    let k = MPoly::var(Var::K);
    let s = MPoly::var(Var::S);
    let j = MPoly::var(Var::X);
    let m_of_j = &(&j - &k) - &s;
    let columns: Vec<_> = (0..n)
        .map(|i| {
            let mut coeffs = vec![MPoly::zero(); n as usize];
            coeffs[i as usize] = MPoly::int(1);
            let tau = theta_to_m(&coeffs, n);
            residual_symbolic(&tau, &alpha, &beta)
                .substitute(&[(Var::M, m_of_j.clone())])
                .coefficients_in(&[Var::K, Var::S, Var::X])
        })
        .collect();
    let ab = lemma_ab_system(n);
    for i in 2..=n {
        let mut e = [0; 6];
        e[Var::K as usize] = i;
        e[Var::S as usize] = 1;
        e[Var::X as usize] = n - i;
        let full: Vec<MPoly> = columns.iter().map(|c| c.get(&e).cloned().unwrap_or_default()).collect();
        let b1 = &ab.rows[(i - 2) as usize];
        let Some((col, lead)) = b1.iter().enumerate().find(|(_, x)| !x.is_zero()) else { return false };
        let Some(r) = full[col].ratio_to(lead) else { return false };
        if r.is_zero() || full.iter().zip(b1).any(|(f, b)| *f != b.scale(&r)) {
            return false;
        }
    }
    let sys = residual_system(n);
    let cob = vector_to_poly_symbolic(n, &sys.coboundary);
    let Some(theta) = m_to_theta(&cob, n) else { return false };
    let d = &(&alpha - &beta) - &MPoly::int(n as i64 - 1);
    theta[(n - 1) as usize] == d.scale(&factorial(n - 1))
}

fn vector_to_poly_symbolic(n: u32, v: &[MPoly]) -> MPoly {
    let mut p = MPoly::zero();
    for (i, c) in v.iter().enumerate() {
        let a = i as u32 + 1;
        p = p + c.mul_monomial(&km_exps(a, n - a));
    }
    p
}

#[derive(Debug, Clone)]
pub struct SpecialPoint {
    pub params: ExtensionParams,
    pub report: H1Report,
}

#[derive(Debug, Clone)]
pub struct LineScan {
    /// α − β on this line.
    pub offset: i64,
    pub generic_rank: usize,
    pub generic_h1: usize,
    /// Generic representatives as polynomials in k, m, α.
    pub generic_reps: Vec<MPoly>,
    /// Polynomial in α whose roots contain every rank-drop point.
    pub rank_drop_poly: UPoly,
    /// gcd of the coboundary coordinates on the line.
    pub coboundary_gcd: UPoly,
    pub special: Vec<SpecialPoint>,
    /// α values at which the (single) generic representative becomes a coboundary.
    pub rep_trivial_at: Vec<Scalar>,
    pub unresolved: Vec<UPoly>,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub n: u32,
    /// Result of [`offset_forcing_check`] (n ≥ 2).
    pub offset_forced: Option<bool>,
    pub lines: Vec<LineScan>,
}

impl ScanReport {
    /// True when no parameter on any scanned line carries a class.
    pub fn is_empty(&self) -> bool {
        self.lines.iter().all(|l| l.generic_h1 == 0 && l.special.is_empty() && l.unresolved.is_empty())
    }
}

fn random_projection(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<Scalar>> {
    (0..rows).map(|_| (0..cols).map(|_| Scalar::int(rng.gen_range(-4..=4))).collect()).collect()
}

fn mat_mul_scalar_left(l: &[Vec<Scalar>], m: &[Vec<UPoly>]) -> Vec<Vec<UPoly>> {
    let cols = m.first().map_or(0, Vec::len);
    l.iter()
        .map(|lr| {
            (0..cols)
                .map(|c| {
                    lr.iter().zip(m).fold(UPoly::zero(), |acc, (x, row)| {
                        if x.is_zero() {
                            acc
                        } else {
                            &acc + &row[c].scale(x)
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn mat_mul_scalar_right(m: &[Vec<UPoly>], q: &[Vec<Scalar>]) -> Vec<Vec<UPoly>> {
    let cols = q.first().map_or(0, Vec::len);
    m.iter()
        .map(|row| {
            (0..cols)
                .map(|c| row.iter().zip(q).fold(UPoly::zero(), |acc, (e, qr)| &acc + &e.scale(&qr[c])))
                .collect()
        })
        .collect()
}

fn gcd_all<'a>(items: impl IntoIterator<Item = &'a UPoly>) -> UPoly {
    let mut g = UPoly::zero();
    for p in items {
        if p.is_zero() {
            continue;
        }
        g = if g.is_zero() { p.monic() } else { upoly_gcd(&g, p) };
    }
    g
}

/// Clears denominators and content of a rational-function vector.
fn polynomial_direction(v: &[RatFunc]) -> Vec<UPoly> {
    let mut den = UPoly::constant(Scalar::one());
    for x in v {
        let g = upoly_gcd(&den, x.den());
        den = (&den * x.den()).div_exact(&g).expect("gcd divides");
    }
    let nums: Vec<UPoly> = v.iter().map(|x| (x.num() * &den).div_exact(x.den()).expect("lcm")).collect();
    let g = gcd_all(nums.iter());
    let mut out: Vec<UPoly> = nums.iter().map(|p| p.div_exact(&g).expect("content")).collect();
    if let Some(lead) = out.iter().rev().find(|p| !p.is_zero()).map(|p| p.lead()) {
        let inv = lead.inv().expect("nonzero");
        out = out.iter().map(|p| p.scale(&inv)).collect();
    }
    out
}

fn scan_line(n: u32, offset: i64, rng: &mut ChaCha8Rng) -> LineScan {
    let sys = residual_system(n);
    let off = Scalar::int(offset);
    let m = sys.system.on_line(&off);
    let b: Vec<UPoly> = sys.coboundary.iter().map(|e| on_line(e, &off)).collect();
    let cols = n as usize;
    let elim = bareiss(&m);
    let r = elim.rank();
    let b_nonzero = b.iter().any(|x| !x.is_zero());
    let generic_h1 = cols - r - usize::from(b_nonzero);

    let mut rank_drop_poly = UPoly::zero();
    if r > 0 {
        let mut minors = vec![elim.last_pivot()];
        for _ in 0..5 {
            let l = random_projection(rng, r, m.len());
            let q = random_projection(rng, cols, r);
            minors.push(det_poly(&mat_mul_scalar_right(&mat_mul_scalar_left(&l, &m), &q)));
        }
        rank_drop_poly = gcd_all(minors.iter());
    }
    let coboundary_gcd = gcd_all(b.iter());

    let mut candidates: Vec<Scalar> = Vec::new();
    let mut unresolved = Vec::new();
    for p in [&rank_drop_poly, &coboundary_gcd] {
        if p.degree().unwrap_or(0) == 0 {
            continue;
        }
        let roots = solve_upoly(p).expect("nonzero rational polynomial");
        for x in roots.roots {
            if !candidates.contains(&x) {
                candidates.push(x);
            }
        }
        unresolved.extend(roots.unresolved);
    }
    candidates.sort_by(|a, b| a.cmp_real(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut special = Vec::new();
    for alpha in candidates {
        let params = ExtensionParams::integral(alpha.clone(), &alpha - &off);
        let report = h1_poly(n, &params);
        if report.h1_dim != generic_h1 {
            special.push(SpecialPoint { params, report });
        }
    }

    let mut generic_reps = Vec::new();
    let mut rep_trivial_at = Vec::new();
    if generic_h1 > 0 {
        let mf: Vec<Vec<RatFunc>> = m.iter().map(|row| row.iter().cloned().map(RatFunc::poly).collect()).collect();
        let mut chosen: Vec<Vec<RatFunc>> = Vec::new();
        if b_nonzero {
            chosen.push(b.iter().cloned().map(RatFunc::poly).collect());
        }
        for v in nullspace(&mf, cols) {
            if generic_reps.len() == generic_h1 {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if rank(&trial) > rank(&chosen) {
                chosen.push(v.clone());
                let mut dir = polynomial_direction(&v);
                if generic_h1 == 1 && b_nonzero {
                    dir = saturate(dir, &b);
                }
                let mut p = MPoly::zero();
                for (i, e) in dir.iter().enumerate() {
                    let a = i as u32 + 1;
                    p = p + e.to_mpoly(Var::Alpha).mul_monomial(&km_exps(a, n - a));
                }
                generic_reps.push(p);
                if generic_h1 == 1 && b_nonzero {
                    rep_trivial_at = proportional_points(&dir, &b, &mut unresolved);
                }
            }
        }
    }
    LineScan {
        offset,
        generic_rank: r,
        generic_h1,
        generic_reps,
        rank_drop_poly,
        coboundary_gcd,
        special,
        rep_trivial_at,
        unresolved,
    }
}

/// Removes rational points where `dir` is proportional to `b`: at such a root r,
/// `dir − λ b` vanishes at r and is divided by (x − r).
fn saturate(mut dir: Vec<UPoly>, b: &[UPoly]) -> Vec<UPoly> {
    let mut scratch = Vec::new();
    'outer: loop {
        for r in proportional_points(&dir, b, &mut scratch) {
            if !r.is_rational() {
                continue;
            }
            let bv: Vec<Scalar> = b.iter().map(|p| p.eval(&r)).collect();
            let Some(j) = bv.iter().position(|x| !x.is_zero()) else { continue };
            let lambda = &dir[j].eval(&r) / &bv[j];
            let lin = UPoly::linear_root(&r);
            let next: Option<Vec<UPoly>> =
                dir.iter().zip(b).map(|(d, bb)| (d - &bb.scale(&lambda)).div_exact(&lin)).collect();
            if let Some(next) = next {
                dir = polynomial_direction(&next.into_iter().map(RatFunc::poly).collect::<Vec<_>>());
                continue 'outer;
            }
        }
        return dir;
    }
}

/// Roots of the gcd of the 2×2 minors of `[u; v]`.
fn proportional_points(u: &[UPoly], v: &[UPoly], unresolved: &mut Vec<UPoly>) -> Vec<Scalar> {
    let mut minors = Vec::new();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            minors.push(&(&u[i] * &v[j]) - &(&u[j] * &v[i]));
        }
    }
    let g = gcd_all(minors.iter());
    if g.is_zero() || g.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let roots = solve_upoly(&g).expect("nonzero polynomial");
    unresolved.extend(roots.unresolved);
    roots.roots
}

/// Scans degree n for parameters carrying nontrivial polynomial classes.
pub fn parametric_scan(n: u32, seed: u64) -> ScanReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(n));
    let offset_forced = (n >= 2).then(|| offset_forcing_check(n));
    let offsets: Vec<i64> = match n {
        0 => Vec::new(),
        1 | 2 => (0..n as i64).collect(),
        _ => vec![n as i64 - 1],
    };
    let lines = offsets.into_iter().map(|c| scan_line(n, c, &mut rng)).collect();
    ScanReport { n, offset_forced, lines }
}

#[derive(Debug, Clone)]
pub struct DeltaClass {
    pub degree: u32,
    pub params: ExtensionParams,
    pub cocycle: Cocycle,
}

/// Solves a relation `A(k,s) + t·B(k,s) = 0` for the scalar t.
enum LinearSolution {
    All,
    One(Scalar),
    Empty,
}

fn solve_linear_identity(p: &MPoly, t: Var) -> LinearSolution {
    let mut value: Option<Scalar> = None;
    let mut free = true;
    for (_, c) in p.coefficients_in(&[Var::K, Var::S]) {
        let u = c.to_upoly(t).expect("single parameter");
        let (a, b) = (u.coeff(0), u.coeff(1));
        if a.is_zero() && b.is_zero() {
            continue;
        }
        free = false;
        if b.is_zero() {
            return LinearSolution::Empty;
        }
        let x = -(&a / &b);
        match &value {
            None => value = Some(x),
            Some(v) if *v == x => {}
            Some(_) => return LinearSolution::Empty,
        }
    }
    match (free, value) {
        (true, _) => LinearSolution::All,
        (false, Some(v)) => LinearSolution::One(v),
        (false, None) => LinearSolution::Empty,
    }
}

fn kpow(base: &MPoly, d: u32) -> MPoly {
    base.pow(d)
}

/// Classes `δ_{k+m,0} k^d` (α = 0) for d ≤ max_deg, modulo coboundaries. For each d the
/// identity `(s−k)f(k+s) = ((β−1)s−k)f(k) − ((β−1)k−s)f(s)` is solved for β.
pub fn delta_km_scan(max_deg: u32) -> Vec<DeltaClass> {
    let k = MPoly::var(Var::K);
    let s = MPoly::var(Var::S);
    let beta = MPoly::var(Var::Beta);
    let one = MPoly::int(1);
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let lhs = &(&s - &k) * &kpow(&(&k + &s), d);
        let r1 = &(&(&(&beta - &one) * &s) - &k) * &kpow(&k, d);
        let r2 = &(&(&(&beta - &one) * &k) - &s) * &kpow(&s, d);
        let identity = &(&lhs - &r1) + &r2;
        let f = UPoly::monomial(Scalar::one(), d as usize);
        let tau = Cocycle::delta_km(f.clone());
        let betas = match solve_linear_identity(&identity, Var::Beta) {
            LinearSolution::Empty => Vec::new(),
            LinearSolution::One(b) => vec![b],
            // The point shift w_0 ↦ w_0 + v_0 has δ_{k+m,0}-component (1−β)k.
            LinearSolution::All => point_shift_roots(|p| p.delta_km.clone(), Var::Beta, &f),
        };
        for b in betas {
            let params = ExtensionParams::integral(Scalar::zero(), b);
            if !is_trivial(&tau, &params, d as usize + 1).expect("solved identity gives a cocycle") {
                out.push(DeltaClass { degree: d, params, cocycle: tau.clone() });
            }
        }
    }
    out
}

/// Values of the free parameter where the point-shift coboundary loses its component along
/// `f`, found from the coboundary at two parameter values (it is affine in the parameter).
fn point_shift_roots(part: impl Fn(&Cocycle) -> UPoly, t: Var, f: &UPoly) -> Vec<Scalar> {
    let g = CoboundaryGen { point_g: Scalar::one(), ..Default::default() };
    let at = |x: i64| {
        let params = match t {
            Var::Beta => ExtensionParams::integral(Scalar::zero(), Scalar::int(x)),
            _ => ExtensionParams::integral(Scalar::int(x), Scalar::one()),
        };
        let c = part(&coboundary(&g, &params).expect("integral gamma"));
        let d = f.degree().unwrap_or(0);
        if (0..=c.degree().unwrap_or(0)).any(|i| i != d && !c.coeff(i).is_zero()) {
            None
        } else {
            Some(c.coeff(d))
        }
    };
    match (at(0), at(1)) {
        (Some(v0), Some(v1)) => {
            let slope = &v1 - &v0;
            if slope.is_zero() {
                Vec::new()
            } else {
                vec![-(&v0 / &slope)]
            }
        }
        _ => Vec::new(),
    }
}

/// Classes `δ_{m,0} k^d` (β = 1) for d ≤ max_deg, modulo coboundaries, solving
/// `(s−k)μ(k+s) − (s+αk)μ(s) + (k+αs)μ(k) = 0` for α.
pub fn delta_m0_scan(max_deg: u32) -> Vec<DeltaClass> {
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let identity = delta_m0_identity(&UPoly::monomial(Scalar::one(), d as usize).to_mpoly(Var::K), &MPoly::var(Var::Alpha));
        let mu = UPoly::monomial(Scalar::one(), d as usize);
        let tau = Cocycle::delta_m0(mu.clone());
        let alphas = match solve_linear_identity(&identity, Var::Alpha) {
            LinearSolution::Empty => Vec::new(),
            LinearSolution::One(a) => vec![a],
            LinearSolution::All => point_shift_roots(|p| p.delta_m0.clone(), Var::Alpha, &mu),
        };
        for a in alphas {
            let params = ExtensionParams::integral(a, Scalar::one());
            if !is_trivial(&tau, &params, d as usize + 1).expect("solved identity gives a cocycle") {
                out.push(DeltaClass { degree: d, params, cocycle: tau.clone() });
            }
        }
    }
    out
}

/// `(s−k)μ(k+s) − (s+αk)μ(s) + (k+αs)μ(k)` for μ given in k.
fn delta_m0_identity(mu: &MPoly, alpha: &MPoly) -> MPoly {
    let k = MPoly::var(Var::K);
    let s = MPoly::var(Var::S);
    let at = |x: &MPoly| mu.substitute(&[(Var::K, x.clone())]);
    let t1 = &(&s - &k) * &at(&(&k + &s));
    let t2 = &(&s + &(alpha * &k)) * &at(&s);
    let t3 = &(&k + &(alpha * &s)) * &at(&k);
    &(&t1 - &t2) + &t3
}

/// Nontrivial `δ_{m,0} μ(k)` classes at a fixed α (β = 1) with deg μ ≤ max_deg.
pub fn delta_m0_classes_at(alpha: &Scalar, max_deg: u32) -> Vec<UPoly> {
    let a = MPoly::constant(alpha.clone());
    let cols: Vec<_> = (0..=max_deg)
        .map(|d| delta_m0_identity(&MPoly::km(Scalar::one(), d, 0), &a).coefficients_in(&[Var::K, Var::S]))
        .collect();
    let mut keys: Vec<Exps> = cols.iter().flat_map(|c| c.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|e| cols.iter().map(|c| c.get(e).and_then(MPoly::constant_value).unwrap_or_default()).collect())
        .collect();
    let width = max_deg as usize + 1;
    let space = if rows.is_empty() {
        (0..width).map(|i| (0..width).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
    } else {
        nullspace(&rows, width)
    };
    // the point shift contributes αk
    let mut trivial = vec![Scalar::zero(); width];
    if width > 1 {
        trivial[1] = alpha.clone();
    }
    let mut chosen: Vec<Vec<Scalar>> = if alpha.is_zero() { Vec::new() } else { vec![trivial] };
    let mut out = Vec::new();
    for v in space {
        if extends_rank(&chosen, &v) {
            chosen.push(v.clone());
            out.push(UPoly::new(v));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    pub alpha: Scalar,
    pub upto: usize,
    /// Dimension of the solution space of the window system in μ(−upto..upto).
    pub solution_dim: usize,
    /// Whether every solution satisfies μ(n+1) = ((n+α)μ(n) − (1+nα)μ(1))/(n−1) for 2 ≤ n < upto.
    pub agrees: bool,
    /// Largest degree of a polynomial interpolating a solution on 1..upto.
    pub degree: usize,
}

/// Degree of the polynomial through `values` at 1, 2, … via finite differences.
fn interpolation_degree(values: &[Scalar]) -> usize {
    let mut diffs = values.to_vec();
    let mut order = 0;
    while diffs.iter().any(|x| !x.is_zero()) {
        if diffs.len() <= 1 {
            return order;
        }
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        order += 1;
    }
    order.saturating_sub(1)
}

/// Solves the δ_{m,0} condition directly on a window of values μ(j), |j| ≤ upto, and checks
/// the k=1 recurrence against every solution.
pub fn recurrence_check(alpha: &Scalar, upto: usize) -> RecurrenceReport {
    let l = upto as i64;
    let idx = |j: i64| (j + l) as usize;
    let width = 2 * upto + 1;
    let mut rows = Vec::new();
    for k in -l..=l {
        for s in -l..=l {
            if (k + s).abs() > l {
                continue;
            }
            let mut row = vec![Scalar::zero(); width];
            let mut add = |j: i64, c: Scalar| row[idx(j)] = &row[idx(j)] + &c;
            add(k + s, Scalar::int(s - k));
            add(s, -(&Scalar::int(s) + &(alpha * &Scalar::int(k))));
            add(k, &Scalar::int(k) + &(alpha * &Scalar::int(s)));
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let space = nullspace(&rows, width);
    let mut agrees = true;
    let mut degree = 0;
    for v in &space {
        let mu = |j: i64| v[idx(j)].clone();
        for n in 2..l {
            let nn = Scalar::int(n);
            let next = (&(&nn + alpha) * &mu(n) - &(&Scalar::one() + &(&nn * alpha)) * &mu(1)) / Scalar::int(n - 1);
            if next != mu(n + 1) {
                agrees = false;
            }
        }
        let positive: Vec<Scalar> = (1..=l).map(mu).collect();
        degree = degree.max(interpolation_degree(&positive));
    }
    RecurrenceReport { alpha: alpha.clone(), upto, solution_dim: space.len(), agrees, degree }
}

#[derive(Debug, Clone)]
pub struct InvMClass {
    pub params: ExtensionParams,
    pub cocycle: Cocycle,
    /// Degree and β = 0 polynomial class the candidate μ/m was lifted from.
    pub source_degree: u32,
    pub source: MPoly,
}

/// Lifts β = 0 polynomial classes μ (degree n, α = n−1) to μ/m at β = 1, γ = 1/2, keeping those
/// that are cocycles and not equivalent to a polynomial class or an earlier lift.
pub fn invm_classes() -> Vec<InvMClass> {
    let half = Scalar::frac(1, 2);
    let mut out: Vec<InvMClass> = Vec::new();
    for n in 1..=7u32 {
        let alpha = Scalar::int(n as i64 - 1);
        let base = h1_poly(n, &ExtensionParams::integral(alpha.clone(), Scalar::zero()));
        let params = ExtensionParams::new(alpha.clone(), Scalar::one(), half.clone());
        for mu in &base.representatives {
            let lift = Cocycle::inv_m(mu.poly.clone(), UPoly::zero());
            if !residual_window(&lift, &params, 6).is_empty() {
                continue;
            }
            let mut known: Vec<Cocycle> = h1_poly(n - 1, &params).representatives;
            known.extend(out.iter().filter(|c| c.params == params).map(|c| c.cocycle.clone()));
            if decompose(&lift, &known, &params, n as usize).expect("cocycles").is_some() {
                continue;
            }
            let printed = NONPOLY_TABLE
                .iter()
                .filter(|r| r.shape == NonPolyShape::InvM && r.params() == params)
                .map(|r| r.cocycle())
                .find(|c| matches!(equivalent(&lift, c, &params, n as usize), Ok(Some(_))));
            let cocycle = printed.unwrap_or_else(|| lift.canonical());
            out.push(InvMClass { params: params.clone(), cocycle, source_degree: n, source: mu.poly.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64) -> ExtensionParams {
        ExtensionParams::integral(Scalar::int(a), Scalar::int(b))
    }

    fn p(t: &str) -> MPoly {
        t.parse().unwrap()
    }

    #[test]
    fn residual_system_shape() {
        let s = residual_system(3);
        assert_eq!(s.monomials.len(), 15);
        assert_eq!(s.system.rows.len(), 15);
        assert_eq!(s.system.unknowns.len(), 3);
    }

    #[test]
    fn cocycle_space_examples() {
        for c in poly_cocycle_space(3, &pt(2, 0)) {
            assert!(crate::cocycles::residual(&c, &pt(2, 0)).unwrap().is_zero());
        }
        let space = poly_cocycle_space(3, &pt(2, 0));
        let target = poly_to_vector(3, &p("k^3 + 2*k^2*m")).unwrap();
        let mut m: Vec<Vec<Scalar>> = space.iter().map(|c| poly_to_vector(3, &c.poly).unwrap()).collect();
        let r = rank(&m);
        m.push(target);
        assert_eq!(rank(&m), r);
        let h = h1_poly(3, &pt(0, 0));
        assert_eq!(h.h1_dim, 0);
        assert_eq!(h.cocycle_space_dim, h.coboundary_space_dim);
    }

    #[test]
    fn h1_examples() {
        let h = h1_poly(2, &pt(1, 0));
        assert_eq!(h.h1_dim, 2);
        assert_eq!(h.representatives, vec![Cocycle::poly(p("k*m")), Cocycle::poly(p("k^2"))]);
        assert_eq!(h1_poly(2, &pt(3, 2)).h1_dim, 0);
        assert_eq!(h1_poly(1, &pt(4, 4)).h1_dim, 1);
    }

    #[test]
    fn ab_system_degree_two() {
        let s = lemma_ab_system(2);
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0][0], p("2*alpha - 2*beta - 2"));
        assert_eq!(s.rows[0][1], p("2*alpha - 2"));
        let a1: usize = lemma_ab_system(5).rows.len() - 4;
        assert_eq!(a1, 2);
    }

    #[test]
    fn forcing_check_holds() {
        for n in 2..=6 {
            assert!(offset_forcing_check(n), "n={n}");
        }
    }

    #[test]
    fn b_prime_first_row_matches_display() {
        for n in 6..=8u32 {
            let (bp, _) = b_prime_rows(n)[0].clone();
            let nn = n as i64;
            let c = |x: i64| Scalar::int(x);
            // −n³ + 3n² − 2n + (6n² − 6n + 4)α − 12n α² + 8α³
            let expected = UPoly::new(vec![
                c(-nn * nn * nn + 3 * nn * nn - 2 * nn),
                c(6 * nn * nn - 6 * nn + 4),
                c(-12 * nn),
                c(8),
            ]);
            assert_eq!(bp, expected, "n={n}");
        }
    }

    #[test]
    fn scan_low_degrees() {
        let s1 = parametric_scan(1, DEFAULT_SEED);
        assert_eq!(s1.lines.len(), 1);
        assert_eq!(s1.lines[0].generic_h1, 1);
        let s2 = parametric_scan(2, DEFAULT_SEED);
        let l1 = s2.lines.iter().find(|l| l.offset == 1).unwrap();
        assert_eq!(l1.generic_h1, 0);
        assert_eq!(l1.special.len(), 1);
        assert_eq!(l1.special[0].params, pt(1, 0));
        assert_eq!(l1.special[0].report.h1_dim, 2);
    }

    #[test]
    fn delta_scans() {
        let km: Vec<(u32, Scalar)> = delta_km_scan(6).iter().map(|c| (c.degree, c.params.beta.clone())).collect();
        assert_eq!(km, vec![(0, Scalar::one()), (1, Scalar::one()), (2, Scalar::zero()), (3, Scalar::int(-1))]);
        let m0: Vec<(u32, Scalar)> = delta_m0_scan(6).iter().map(|c| (c.degree, c.params.alpha.clone())).collect();
        assert_eq!(m0, vec![(0, Scalar::zero()), (1, Scalar::zero()), (2, Scalar::one()), (3, Scalar::int(2))]);
        assert!(delta_m0_classes_at(&Scalar::int(3), 6).is_empty());
        assert_eq!(delta_m0_classes_at(&Scalar::zero(), 6).len(), 2);
    }

    #[test]
    fn recurrence_examples() {
        let r = recurrence_check(&Scalar::int(2), 10);
        assert!(r.agrees);
        assert_eq!(r.degree, 3);
        let r = recurrence_check(&Scalar::frac(7, 3), 10);
        assert!(r.agrees);
        assert_eq!(r.degree, 1);
    }
}
