use num_traits::Zero;
use proptest::prelude::*;
use qid::appell_lerch::{change_z_identity_check, cube_decomposition_check};
use qid::engine::verify_exprs;
use qid::{
    dissect_extract, dissect_reconstruct, eval, parse, pochhammer_finite, prove_zero, EtaExpression,
    EtaMonomial, Expr, LaurentSeries, MockThetaSelector, ParamProofOutcome, Rat, Registry,
    SignedMonomial, Status,
};

fn series() -> impl Strategy<Value = LaurentSeries> {
    (-6i64..6, prop::collection::vec(-9i64..10, 0..24), 0i64..4).prop_map(|(lo, cs, extra)| {
        let order = lo + cs.len() as i64 - 1 + extra;
        LaurentSeries::from_ints(lo, &cs, order)
    })
}

fn naive_mul(a: &LaurentSeries, b: &LaurentSeries, n: i64) -> Rat {
    let mut s = Rat::zero();
    for i in a.min_exp()..=a.order() {
        let j = n - i;
        if j >= b.min_exp() && j <= b.order() {
            s += a.coefficient(i).unwrap() * b.coefficient(j).unwrap();
        }
    }
    s
}

fn monomial() -> impl Strategy<Value = SignedMonomial> {
    (prop::bool::ANY, -6i64..7).prop_map(|(neg, e)| SignedMonomial { negative: neg, exp: e })
}

fn eta_monomial() -> impl Strategy<Value = EtaMonomial> {
    let ks = prop::sample::select(vec![1u32, 2, 3, 4, 6, 12]);
    (-5i64..6, -2i64..3, prop::collection::vec((ks, -4i64..5), 0..4)).prop_map(|(c, qp, ex)| {
        EtaMonomial::new(Rat::from_integer(c.into()), qp, ex)
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let sel = prop::sample::select(MockThetaSelector::ALL.to_vec());
    let leaf = prop_oneof![
        (0i64..20).prop_map(Expr::int),
        Just(Expr::Q),
        (1u32..13).prop_map(Expr::F),
        sel.prop_map(Expr::MT),
        (monomial(), 1i64..6).prop_map(|(z, base)| Expr::J { z, base }),
        (monomial(), 1i64..6, monomial()).prop_map(|(x, base, z)| Expr::AL { x, base, z }),
        (monomial(), 1i64..4, 0u64..5).prop_map(|(a, step, n)| Expr::P { a, step, n }),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.div(b)),
            (inner.clone(), -3i64..4).prop_map(|(a, n)| a.pow(n)),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), 1i64..5, 0i64..5)
                .prop_map(|(e, m, r)| Expr::Extract { e: Box::new(e), m, r: r % m }),
            (inner, 1i64..4).prop_map(|(e, m)| Expr::Subst { e: Box::new(e), m }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_matches_naive_convolution(a in series(), b in series()) {
        let p = a.mul(&b);
        for n in p.min_exp().min(a.min_exp() + b.min_exp())..=p.order() {
            prop_assert_eq!(p.coefficient(n).unwrap(), naive_mul(&a, &b, n));
        }
    }

    #[test]
    fn inverse_times_series_is_one(a in series()) {
        prop_assume!(!a.is_zero());
        let inv = a.invert().unwrap();
        let p = a.mul(&inv);
        prop_assert!(p.compare(&LaurentSeries::one(p.order())).is_equal());
    }

    #[test]
    fn substitution_composes(a in series(), m in 1i64..4, k in 1i64..4) {
        let (x, y) = (a.substitute_power(m).substitute_power(k), a.substitute_power(m * k));
        prop_assert_eq!(x.order(), y.order());
        prop_assert!(x.compare(&y).is_equal());
    }

    #[test]
    fn dissection_round_trip(a in series(), m in prop::sample::select(vec![2i64, 3, 4, 6])) {
        let parts: Vec<_> = (0..m).map(|r| dissect_extract(&a, m, r).unwrap()).collect();
        let back = dissect_reconstruct(&parts, m).unwrap();
        prop_assert!(back.compare(&a).is_equal());
        prop_assert!(back.order() > a.order() - m);
    }

    #[test]
    fn dissection_is_linear(a in series(), b in series(), m in 1i64..5, r in 0i64..5) {
        let r = r % m;
        let lhs = dissect_extract(&a.add(&b), m, r).unwrap();
        let rhs = dissect_extract(&a, m, r).unwrap().add(&dissect_extract(&b, m, r).unwrap());
        prop_assert_eq!(lhs.order(), rhs.order());
        prop_assert!(lhs.compare(&rhs).is_equal());
    }

    #[test]
    fn extract_undoes_substitution(a in series(), m in 1i64..5, r in 0i64..5) {
        let r = r % m;
        let spread = a.substitute_power(m).shift(r);
        let back = dissect_extract(&spread, m, r).unwrap();
        prop_assert!(back.order() >= a.order());
        prop_assert!(back.compare(&a).is_equal());
    }

    #[test]
    fn pochhammer_concatenates(a in monomial(), step in 1i64..4, n in 0u64..6, k in 0u64..6) {
        let order = 40;
        let whole = pochhammer_finite(a, step, n + k, order);
        let shifted = a.mul(SignedMonomial::q_pow(step * n as i64));
        let prod = pochhammer_finite(a, step, n, order).mul(&pochhammer_finite(shifted, step, k, order));
        prop_assert!(whole.compare(&prod).is_equal());
    }

    #[test]
    fn eta_evaluation_distributes(xs in prop::collection::vec(eta_monomial(), 1..4),
                                  ys in prop::collection::vec(eta_monomial(), 1..4)) {
        let order = 30;
        let a = EtaExpression::new(xs);
        let b = EtaExpression::new(ys);
        let sum = a.concat(&b).eval(order);
        prop_assert!(sum.compare(&a.eval(order).add(&b.eval(order))).is_equal());
        let prod: Vec<_> = a.terms.iter().flat_map(|x| b.terms.iter().map(move |y| x.mul(y))).collect();
        let lhs = EtaExpression::new(prod).eval(order);
        let rhs = reach(&a, &b, order);
        prop_assert!(lhs.compare(&rhs).is_equal());
    }

    #[test]
    fn print_parse_round_trip(e in expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), e, "{}", printed);
    }
}

/// `a·b` with enough working order on both factors to deliver `order`.
fn reach(a: &EtaExpression, b: &EtaExpression, order: i64) -> LaurentSeries {
    let lo = |e: &EtaExpression| e.terms.iter().map(|t| t.qpow).min().unwrap_or(0).min(0);
    let extra = -(lo(a) + lo(b));
    a.eval(order + extra).mul(&b.eval(order + extra)).truncate(order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn change_of_z_holds_for_generic_parameters(x in monomial(), base in 1i64..6, z1 in monomial(), z0 in monomial()) {
        let out = change_z_identity_check(x, base, z1, z0, 40);
        // parameters where a theta function vanishes are outside the identity
        prop_assume!(out.status != Status::Error);
        prop_assert!(out.is_pass(), "{}", out.message);
    }

    #[test]
    fn cube_decomposition_holds(x in monomial(), base in 1i64..4) {
        let out = cube_decomposition_check(x, base, 40);
        prop_assume!(out.status != Status::Error);
        prop_assert!(out.is_pass(), "{}", out.message);
    }

    #[test]
    fn zero_proofs_survive_rescaling(scale in eta_monomial(), c in 1i64..9, name in prop::sample::select(vec!["S0", "S1", "H0", "H1", "R0"])) {
        let reg = Registry::bundled();
        let base = reg.def(name).unwrap().to_eta().unwrap();
        let mut scale = scale;
        scale.coeff = Rat::from_integer(c.into());
        let mut terms: Vec<_> = base.terms.iter().map(|t| t.mul(&scale)).collect();
        terms.reverse();
        prop_assert_eq!(prove_zero(&EtaExpression::new(terms)).unwrap(), ParamProofOutcome::ProvedZero);
    }

    #[test]
    fn verification_is_symmetric(e1 in eta_monomial(), e2 in eta_monomial()) {
        let a = Expr::from(&EtaExpression::new(vec![e1]));
        let b = Expr::from(&EtaExpression::new(vec![e2]));
        let ab = verify_exprs(&a, &b, 20, None);
        let ba = verify_exprs(&b, &a, 20, None);
        prop_assert_eq!(ab.status, ba.status);
        prop_assert_eq!(ab.compared_order, ba.compared_order);
        match (ab.first_mismatch, ba.first_mismatch) {
            (Some(x), Some(y)) => {
                prop_assert_eq!(x.exponent, y.exponent);
                prop_assert_eq!(x.lhs, y.rhs);
                prop_assert_eq!(x.rhs, y.lhs);
            }
            (None, None) => {}
            _ => prop_assert!(false, "mismatch presence differs"),
        }
    }

    #[test]
    fn evaluation_is_stable_under_deeper_orders(e in expr()) {
        if let (Ok(a), Ok(b)) = (eval(&e, 6), eval(&e, 12)) {
            prop_assert_eq!(a.order(), 6);
            prop_assert!(a.compare(&b).is_equal());
        }
    }
}
