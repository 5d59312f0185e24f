//! Brute-force H¹ dimensions for homogeneous polynomial cocycles, checked against the solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wittext::cocycles::{coboundary, residual, CoboundaryGen, Cocycle, ExtensionParams};
use wittext::linalg::{nullspace, rank};
use wittext::solver::h1_poly;
use wittext::{MPoly, Scalar, UPoly};

/// k^a m^(n−a) at (k, m).
fn mono(a: u32, n: u32, k: &Scalar, m: &Scalar) -> Scalar {
    k.pow(a) * m.pow(n - a)
}

/// Cocycle condition of τ = k^a m^(n−a) at (k, s, m), written out from the module action.
fn condition(a: u32, n: u32, k: i64, s: i64, m: i64, alpha: &Scalar, beta: &Scalar) -> Scalar {
    let (ks, ss, ms) = (Scalar::int(k), Scalar::int(s), Scalar::int(m));
    let t = |x: &Scalar, y: &Scalar| mono(a, n, x, y);
    let ksum = &ks + &ss;
    Scalar::int(s - k) * t(&ksum, &ms) - (&ms + &(beta * &ss)) * t(&ks, &(&ms + &ss))
        + (&ms + &(beta * &ks)) * t(&ss, &(&ms + &ks))
        - (&(&ms + &ss) + &(alpha * &ks)) * t(&ss, &ms)
        + (&(&ms + &ks) + &(alpha * &ss)) * t(&ks, &ms)
}

fn brute_h1(n: u32, alpha: &Scalar, beta: &Scalar) -> usize {
    let mut rows = Vec::new();
    for k in -3..=3 {
        for s in -3..=3 {
            for m in -3..=3 {
                rows.push((0..=n).map(|a| condition(a, n, k, s, m, alpha, beta)).collect::<Vec<_>>());
            }
        }
    }
    let cocycles = nullspace(&rows, n as usize + 1).len();
    // the only homogeneous degree-n coboundary comes from g(x) = x^(n−1)
    let g = UPoly::monomial(Scalar::one(), n as usize - 1);
    let b = coboundary(&CoboundaryGen::poly(g), &ExtensionParams::integral(alpha.clone(), beta.clone())).unwrap();
    let coords: Vec<Vec<Scalar>> = vec![(0..=n).map(|a| b.poly.coeff(&km(a, n))).collect()];
    cocycles - rank(&coords)
}

fn km(a: u32, n: u32) -> [u32; 6] {
    let mut e = [0; 6];
    e[wittext::Var::K as usize] = a;
    e[wittext::Var::M as usize] = n - a;
    e
}

fn solver_h1(n: u32, alpha: &Scalar, beta: &Scalar) -> usize {
    h1_poly(n, &ExtensionParams::integral(alpha.clone(), beta.clone())).h1_dim
}

#[test]
fn oracle_matches_solver_on_lines_and_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=5u32 {
        for _ in 0..4 {
            let a = Scalar::frac(rng.gen_range(-30..=30), rng.gen_range(1..=7));
            for beta in [&a - &Scalar::int(n as i64 - 1), Scalar::frac(rng.gen_range(-30..=30), 5)] {
                assert_eq!(brute_h1(n, &a, &beta), solver_h1(n, &a, &beta), "n={n} alpha={a} beta={beta}");
            }
        }
    }
}

#[test]
fn oracle_matches_solver_at_special_points() {
    let s = |t: &str| -> Scalar { t.parse().unwrap() };
    let cases = [
        (2, "1", "0", 2),
        (6, "1", "-4", 1),
        (6, "5", "0", 1),
        (6, "2", "-3", 0),
        (7, "(7+sqrt(19))/2", "(-5+sqrt(19))/2", 1),
        (7, "(7-sqrt(19))/2", "(-5-sqrt(19))/2", 1),
        (7, "(7+sqrt(19))/2", "-(5+sqrt(19))/2", 0),
    ];
    for (n, a, b, want) in cases {
        let (a, b) = (s(a), s(b));
        assert_eq!(brute_h1(n, &a, &b), want, "oracle n={n} alpha={a} beta={b}");
        assert_eq!(solver_h1(n, &a, &b), want, "solver n={n} alpha={a} beta={b}");
    }
}

#[test]
fn linear_cocycle_is_trivial_off_the_diagonal() {
    // τ = k satisfies the cocycle condition for every (α, β) and equals coboundary(1)/(α−β) when α ≠ β
    let p = ExtensionParams::integral(Scalar::zero(), Scalar::one());
    let tau = Cocycle::poly(MPoly::var(wittext::Var::K));
    assert!(residual(&tau, &p).unwrap().is_zero());
    let g = coboundary(&CoboundaryGen::poly(UPoly::constant(Scalar::one())), &p).unwrap();
    assert_eq!(g.scale(&Scalar::int(-1)), tau);
    assert_eq!(solver_h1(1, &Scalar::zero(), &Scalar::one()), 0);
    assert_eq!(solver_h1(1, &Scalar::int(3), &Scalar::int(3)), 1);
}
