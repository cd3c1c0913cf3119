use std::sync::Arc;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use fanocalc_core::chow::{basis_map_a, derived_context, intersection_degree, reduce, RawPoly};
use fanocalc_core::exact::{arg_less_than, int, quad_pow, rat};
use fanocalc_core::expr::{evaluate, generator_bindings, parse_str, Expr, Value};
use fanocalc_core::slope::{boundary_delta, check_rho_tau};
use fanocalc_core::{BasisMap, QuadNum, Rat, RingCtx, RingElem};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn negative_rat() -> impl Strategy<Value = Rat> {
    (1i64..=12, 1i64..=4).prop_map(|(p, q)| rat(-p, q))
}

fn ctx() -> impl Strategy<Value = Arc<RingCtx>> {
    (2u32..=6, small_rat(), small_rat(), 1i64..=36)
        .prop_map(|(n, a, b, s)| RingCtx::new(n, ("G1", "G2"), a, b, int(s)).expect("positive degree"))
}

fn raw(n: u32) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(((0u32..=4, 0..=n + 1), small_rat()), 0..=4).prop_map(|terms| {
        let mut p = RawPoly::new();
        for (k, v) in terms {
            *p.entry(k).or_insert_with(Rat::zero) += v;
        }
        p
    })
}

fn ctx_and_polys() -> impl Strategy<Value = (Arc<RingCtx>, RawPoly, RawPoly)> {
    ctx().prop_flat_map(|c| {
        let n = c.n();
        (Just(c), raw(n), raw(n))
    })
}

fn quad_pair() -> impl Strategy<Value = (QuadNum, QuadNum)> {
    (negative_rat(), small_rat(), small_rat(), small_rat(), small_rat()).prop_map(|(d, a, b, c, e)| {
        (
            QuadNum::new(a, b, d.clone()).expect("negative"),
            QuadNum::new(c, e, d).expect("negative"),
        )
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["L", "H", "K'", "c1"]).prop_map(|s| Expr::Sym(s.to_string())),
        (0i64..=9, 1i64..=3).prop_map(|(p, q)| Expr::Num(rat(p, q))),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 1i64..=5).prop_map(|(a, d)| Expr::Div(Box::new(a), Box::new(Expr::Num(int(d))))),
            (inner, 0u32..=3).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
        ]
    })
}

fn raw_add(p: &RawPoly, q: &RawPoly) -> RawPoly {
    let mut out = p.clone();
    for (k, v) in q {
        *out.entry(*k).or_insert_with(Rat::zero) += v;
    }
    out
}

fn raw_mul(p: &RawPoly, q: &RawPoly) -> RawPoly {
    let mut out = RawPoly::new();
    for (&(a, b), x) in p {
        for (&(c, d), y) in q {
            *out.entry((a + c, b + d)).or_insert_with(Rat::zero) += x * y;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduce_is_idempotent((c, p, _q) in ctx_and_polys()) {
        let r = reduce(&p, &c);
        prop_assert_eq!(reduce(&r.to_raw(), &c), r);
    }

    #[test]
    fn reduce_is_linear((c, p, q) in ctx_and_polys()) {
        prop_assert_eq!(reduce(&raw_add(&p, &q), &c), &reduce(&p, &c) + &reduce(&q, &c));
    }

    #[test]
    fn reduce_is_multiplicative((c, p, q) in ctx_and_polys()) {
        prop_assert_eq!(reduce(&raw_mul(&p, &q), &c), &reduce(&p, &c) * &reduce(&q, &c));
    }

    #[test]
    fn normal_forms_are_linear_in_g1((c, p, _q) in ctx_and_polys()) {
        prop_assert!(reduce(&p, &c).terms().all(|(i, _, _)| i <= 1));
    }

    #[test]
    fn relative_canonical_squares_to_discriminant(c in ctx()) {
        let k = RingElem::linear(&c, int(-2), c.rel_a().clone());
        let h = RingElem::g2(&c);
        prop_assert_eq!(&k * &k, (&h * &h).scale(&c.discriminant()));
    }

    #[test]
    fn chern_wu_from_chern_data(n in 2u32..=7, c1 in -1i64..=0, delta in negative_rat(), deg in 1i64..=20) {
        let c2 = (int(c1 * c1) - &delta) / int(4);
        let c = RingCtx::from_chern(n, int(c1), c2, int(deg)).unwrap();
        let k = RingElem::linear(&c, int(-2), int(c1));
        let h = RingElem::g2(&c);
        prop_assert_eq!(&k * &k, (&h * &h).scale(&delta));
    }

    #[test]
    fn basis_map_round_trip(nu in 1i64..=6, nu_p in 1i64..=6, mu in 1i64..=3, lambda in 1i64..=2) {
        if let Ok(a) = basis_map_a(nu, nu_p, mu, mu, lambda) {
            if let Ok(inv) = a.inverse() {
                prop_assert_eq!(a.compose(&inv).entries, BasisMap::identity().entries);
                prop_assert_eq!(inv.compose(&a).entries, BasisMap::identity().entries);
                prop_assert_eq!(inv.inverse().unwrap().entries, a.entries);
            }
        }
    }

    #[test]
    fn derived_context_round_trip(c in ctx(), a in -3i64..=3, b in -3i64..=3, cc in -3i64..=3, d in -3i64..=3) {
        let m = BasisMap::new([[int(a), int(b)], [int(cc), int(d)]], fanocalc_core::MapLabel::Change);
        prop_assume!(!m.det().is_zero());
        if let Ok(there) = derived_context(&c, &m, ("X", "Y")) {
            let back = derived_context(&there, &m.inverse().unwrap(), ("G1", "G2")).unwrap();
            prop_assert_eq!(back.rel_a(), c.rel_a());
            prop_assert_eq!(back.rel_b(), c.rel_b());
            prop_assert_eq!(back.degree_s(), c.degree_s());
        }
    }

    #[test]
    fn quad_pow_is_multiplicative((z, _w) in quad_pair(), a in 0u32..=6, b in 0u32..=6) {
        prop_assert_eq!(quad_pow(&z, a + b), &quad_pow(&z, a) * &quad_pow(&z, b));
    }

    #[test]
    fn norm_is_multiplicative((z, w) in quad_pair()) {
        prop_assert_eq!((&z * &w).norm(), z.norm() * w.norm());
    }

    #[test]
    fn arg_less_than_is_antitone(d in negative_rat(), re in small_rat(), p in 1i64..=6, q in 1i64..=4) {
        let z = QuadNum::new(re, rat(p, q), d).unwrap();
        let flags: Vec<bool> = (2..=12).map(|q| arg_less_than(&z, q).unwrap()).collect();
        prop_assert!(flags.windows(2).all(|w| w[0] || !w[1]), "{:?}", flags);
    }

    #[test]
    fn boundary_discriminant_lies_on_the_ray(n in prop::sample::select(vec![2u32, 3, 5]), tau in 1i64..=8) {
        let delta = boundary_delta(n, &int(tau)).unwrap();
        prop_assert!(delta.is_negative());
        let z = QuadNum::shifted_root(int(tau), delta.clone()).unwrap();
        prop_assert!(z.pow(n + 1).is_negative_real());
        prop_assert_eq!(check_rho_tau(n, &int(tau), &int(tau), &delta), Ok(true));
    }

    #[test]
    fn parser_round_trips(e in expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse_str(&printed).unwrap(), e);
    }

    #[test]
    fn evaluation_agrees_with_ring_arithmetic(c in ctx(), x in small_rat(), y in small_rat(), k in 1u32..=4) {
        let b = generator_bindings(&c);
        let text = format!("(({x})*G1 + ({y})*G2)^{k}");
        let v = evaluate(&parse_str(&text).unwrap(), &c, &b).unwrap();
        let expected = RingElem::linear(&c, x, y).pow(k);
        match v.value {
            Value::Elem(e) => prop_assert_eq!(e, expected),
            Value::Scalar(s) => prop_assert_eq!(RingElem::scalar(&c, s), expected),
        }
    }

    #[test]
    fn top_degree_is_linear(c in ctx(), x in small_rat(), y in small_rat()) {
        let n = c.n();
        let h = RingElem::g2(&c).pow(n);
        let e = &RingElem::linear(&c, x.clone(), y.clone()) * &h;
        let g1 = intersection_degree(&(&RingElem::g1(&c) * &h)).unwrap();
        let g2 = intersection_degree(&(&RingElem::g2(&c) * &h)).unwrap();
        prop_assert_eq!(intersection_degree(&e).unwrap(), x * g1 + y * g2);
    }
}
