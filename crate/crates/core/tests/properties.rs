use proptest::prelude::*;
use wittext::cocycles::{
    coboundary, dualize, equivalent, m_to_theta, residual, residual_window, theta_to_m, CoboundaryGen, Cocycle,
    ExtensionParams,
};
use wittext::polynomials::{solve_upoly, upoly_gcd};
use wittext::scalars::rat;
use wittext::tables::THETA_TABLE;
use wittext::{MPoly, Scalar, UPoly, Var};

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Scalar::frac(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Scalar> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

/// Elements of ℚ(√d) for one fixed d per case.
fn quad_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    let part = || (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6);
    (prop::sample::select(vec![2i64, 3, 5, 19]), part(), part(), part()).prop_map(|(d, x, y, z)| {
        let mk = |(a, b, c, e): (i64, i64, i64, i64)| Scalar::quad(rat(a, b), rat(c, e), d).expect("valid");
        (mk(x), mk(y), mk(z))
    })
}

fn km_poly(max_deg: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -9i64..=9), 0..6).prop_map(|terms| {
        terms.into_iter().fold(MPoly::zero(), |acc, (a, b, c)| acc + MPoly::km(Scalar::int(c), a, b))
    })
}

fn upoly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-9i64..=9, 0..=max_deg + 1).prop_map(|cs| UPoly::from_ints(&cs))
}

fn params() -> impl Strategy<Value = ExtensionParams> {
    (rational(), rational()).prop_map(|(a, b)| ExtensionParams::integral(a, b))
}

fn at(p: &MPoly, k: &Scalar, m: &Scalar) -> Scalar {
    p.eval(&[(Var::K, k.clone()), (Var::M, m.clone())])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_field_axioms((x, y, z) in quad_triple()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
        // the norm x·x̄ is rational
        prop_assert!((&x * &x.conj()).is_rational());
    }

    #[test]
    fn scalar_parse_round_trip((x, _, _) in quad_triple()) {
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn mpoly_ring_laws(p in km_poly(3), q in km_poly(3), r in km_poly(2), k in rational(), m in rational()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(at(&(&p * &q), &k, &m), &at(&p, &k, &m) * &at(&q, &k, &m));
    }

    #[test]
    fn mpoly_parse_round_trip(p in km_poly(4)) {
        let back: MPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn gcd_divides_and_keeps_common_factor(a in upoly(3), b in upoly(3), c in upoly(2)) {
        let (ac, bc) = (&a * &c, &b * &c);
        let g = upoly_gcd(&ac, &bc);
        if !g.is_zero() {
            prop_assert!(ac.div_rem(&g).1.is_zero());
            prop_assert!(bc.div_rem(&g).1.is_zero());
            if !ac.is_zero() || !bc.is_zero() {
                prop_assert!(g.div_rem(&c).1.is_zero() || c.is_zero());
            }
        }
    }

    #[test]
    fn rational_roots_recovered(rs in prop::collection::vec(rational(), 1..5), lead in nonzero_rational()) {
        let p = rs.iter().fold(UPoly::constant(lead), |acc, r| &acc * &UPoly::linear_root(r));
        let found = solve_upoly(&p).unwrap();
        prop_assert!(found.unresolved.is_empty());
        for r in &rs {
            prop_assert!(found.roots.contains(r));
        }
        for r in &found.roots {
            prop_assert!(p.eval(r).is_zero());
        }
    }

    #[test]
    fn quadratic_roots_are_exact(b in -30i64..=30, c in -30i64..=30) {
        let p = UPoly::from_ints(&[c, b, 1]);
        let found = solve_upoly(&p).unwrap();
        for r in &found.roots {
            prop_assert!(p.eval(r).is_zero());
        }
        let disc = b * b - 4 * c;
        if disc >= 0 {
            prop_assert!(found.unresolved.is_empty());
            prop_assert_eq!(found.roots.len(), if disc == 0 { 1 } else { 2 });
        }
    }

    #[test]
    fn residual_is_linear(t1 in km_poly(3), t2 in km_poly(3), c in rational(), p in params()) {
        let lhs = residual(&Cocycle::poly(&t1.scale(&c) + &t2), &p).unwrap();
        let rhs = &residual(&Cocycle::poly(t1), &p).unwrap().scale(&c) + &residual(&Cocycle::poly(t2), &p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coboundaries_are_cocycles(g in upoly(4), p in params()) {
        let tau = coboundary(&CoboundaryGen::poly(g), &p).unwrap();
        prop_assert!(residual(&tau, &p).unwrap().is_zero());
        prop_assert!(residual_window(&tau, &p, 3).is_empty());
    }

    #[test]
    fn window_agrees_with_symbolic_residual(t in km_poly(3), p in params()) {
        let tau = Cocycle::poly(t);
        let sym = residual(&tau, &p).unwrap();
        let window = residual_window(&tau, &p, 3);
        for v in &window {
            let direct = sym.eval(&[(Var::K, Scalar::int(v.k)), (Var::S, Scalar::int(v.s)), (Var::M, v.m.clone())]);
            prop_assert_eq!(&direct, &v.defect);
        }
        // a nonzero polynomial of degree ≤ 4 in (k, s, m) cannot vanish on the 7×7×7 grid
        prop_assert_eq!(window.is_empty(), sym.is_zero());
    }

    #[test]
    fn theta_round_trip(cs in prop::collection::vec(-9i64..=9, 1..7)) {
        let n = cs.len() as u32;
        let coeffs: Vec<MPoly> = cs.iter().map(|&c| MPoly::int(c)).collect();
        prop_assert_eq!(m_to_theta(&theta_to_m(&coeffs, n), n).unwrap(), coeffs);
    }

    #[test]
    fn dual_is_an_involution_and_keeps_cocycles(g in upoly(3), row in 0usize..6, a in rational()) {
        let printed = &THETA_TABLE[row];
        let offset = match printed.params {
            wittext::tables::ParamSpec::Line(c) => c,
            _ => return Ok(()),
        };
        let p = ExtensionParams::integral(a.clone(), &a - &Scalar::int(offset));
        let class = Cocycle::poly(printed.m_poly().specialize(&[(Var::Alpha, a.clone())]));
        let tau = class.add(&coboundary(&CoboundaryGen::poly(g), &p).unwrap());
        let (d, dp) = dualize(&tau, &p);
        prop_assert!(residual(&d, &dp).unwrap().is_zero());
        prop_assert_eq!(dualize(&d, &dp), (tau, p));
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(g in upoly(3), c in nonzero_rational(), row in 0usize..6, a in rational()) {
        let printed = &THETA_TABLE[row];
        let wittext::tables::ParamSpec::Line(offset) = printed.params else { return Ok(()) };
        let p = ExtensionParams::integral(a.clone(), &a - &Scalar::int(offset));
        let class = Cocycle::poly(printed.m_poly().specialize(&[(Var::Alpha, a.clone())]));
        let other = class.scale(&c).add(&coboundary(&CoboundaryGen::poly(g), &p).unwrap());
        let n = (printed.degree as usize + 1).max(4);
        prop_assert!(equivalent(&class, &class, &p, n).unwrap().is_some());
        let (c12, _) = equivalent(&other, &class, &p, n).unwrap().expect("equivalent");
        let (c21, _) = equivalent(&class, &other, &p, n).unwrap().expect("symmetric");
        prop_assert!((&c12 * &c21).is_one());
    }
}
