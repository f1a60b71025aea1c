use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qpcount::arith::{eventual_sign, poly_divmod, poly_substitute_affine, IntPoly, RatPoly, Sign};

fn int_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 1..=max_deg + 1).prop_map(|c| IntPoly::from_i64s(&c))
}

fn rat(p: &IntPoly) -> RatPoly {
    p.to_rat()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn divmod_identity(f in int_poly(6), g in int_poly(6)) {
        prop_assume!(!g.is_zero());
        let (q, r) = poly_divmod(&rat(&f), &rat(&g)).unwrap();
        prop_assert_eq!(&(&q * &rat(&g)) + &r, rat(&f));
        prop_assert!(r.degree() < g.degree());
    }

    #[test]
    fn substitution_is_multiplicative(f1 in int_poly(4), f2 in int_poly(4), m in 1i64..=7, r in -6i64..=6) {
        let lhs = poly_substitute_affine(&(&f1 * &f2), m, r);
        let rhs = &poly_substitute_affine(&f1, m, r) * &poly_substitute_affine(&f2, m, r);
        prop_assert_eq!(&lhs, &rhs);
        for u in -5i64..=5 {
            prop_assert_eq!(lhs.eval_i64(u), (&f1 * &f2).eval_i64(m * u + r));
        }
    }

    #[test]
    fn eventual_sign_holds_from_threshold(p in int_poly(5)) {
        let q = rat(&p);
        let (s, threshold) = eventual_sign(&q);
        for t in threshold..threshold + 200 {
            prop_assert_eq!(Sign::of(&q.eval_i64(t)), s);
        }
        if threshold > 0 {
            prop_assert_ne!(Sign::of(&q.eval_i64(threshold - 1)), s);
        }
    }
}

#[test]
fn eventual_sign_of_constants() {
    assert_eq!(eventual_sign(&RatPoly::zero()), (Sign::Zero, 0));
    let c = RatPoly::constant(BigRational::from_integer(BigInt::from(-3)));
    assert_eq!(eventual_sign(&c), (Sign::Negative, 0));
}
