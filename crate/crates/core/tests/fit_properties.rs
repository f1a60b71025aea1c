use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qpcount::arith::{IntPoly, RatPoly};
use qpcount::error::Result;
use qpcount::fit::{detect_and_fit_eqp, fit_qp_fixed, verify_eqp, FitConfig, FitOutcome, Oracle};
use qpcount::frobenius::frobenius_at;
use qpcount::qpoly::{poly_floor_div, QuasiPolynomial};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Integer-valued QP: integer polynomial plus `c·(t - r)/s` on class `r`.
fn qp() -> impl Strategy<Value = QuasiPolynomial> {
    (1usize..=8).prop_flat_map(|s| {
        prop::collection::vec((prop::collection::vec(-6i64..=6, 1..=4), -3i64..=3), s).prop_map(move |classes| {
            let si = s as i64;
            QuasiPolynomial::new(
                classes
                    .into_iter()
                    .enumerate()
                    .map(|(r, (ints, c))| {
                        let base = RatPoly::new(ints.iter().map(|&k| ratio(k, 1)).collect());
                        &base + &RatPoly::new(vec![ratio(-c * r as i64, si), ratio(c, si)])
                    })
                    .collect(),
            )
        })
    })
}

/// Every smaller period fails to reproduce the oracle past the threshold.
fn assert_minimal(out: &FitOutcome, oracle: &Oracle) {
    let e = &out.eqp;
    let (s, d) = (e.qp.period(), e.qp.degree().max(0) as usize);
    for smaller in 1..s {
        let Ok(q) = fit_qp_fixed(oracle, smaller, d, e.threshold) else {
            continue;
        };
        let hi = e.threshold + 4 * (s * (d + 1)) as i64;
        let agrees = (e.threshold..hi).all(|t| oracle(t).ok().map(BigRational::from_integer) == Some(q.eval(t)));
        assert!(!agrees, "period {smaller} also fits");
    }
}

fn assert_window(out: &FitOutcome, oracle: &Oracle) {
    let e = &out.eqp;
    let s = e.qp.period() as i64;
    let d = e.qp.degree().max(0) as i64;
    let r = verify_eqp(e, oracle, 1, e.threshold + 2 * s * (d + 1));
    assert!(r.ok, "first mismatch at {:?}", r.first_mismatch);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn perturbed_prefix_becomes_exceptions(
        q in qp(),
        bumps in prop::collection::btree_map(1i64..=12, 1i64..=9, 0..4),
    ) {
        let oracle = |t: i64| -> Result<BigInt> {
            Ok(q.eval(t).to_integer() + bumps.get(&t).copied().unwrap_or(0))
        };
        let out = detect_and_fit_eqp(&oracle, &FitConfig::default()).unwrap();
        prop_assert_eq!(&out.eqp.qp, &q);
        let listed: BTreeMap<i64, BigInt> =
            out.eqp.exceptions.iter().map(|(&t, v)| (t, v.clone().unwrap())).collect();
        let want: BTreeMap<i64, BigInt> =
            bumps.keys().map(|&t| (t, oracle(t).unwrap())).collect();
        prop_assert_eq!(listed, want);
        prop_assert_eq!(out.eqp.threshold, bumps.keys().next_back().map_or(1, |t| t + 1));
        assert_minimal(&out, &oracle);
        assert_window(&out, &oracle);
    }
}

#[test]
fn library_oracles_fit_minimally() {
    let cfg = FitConfig::default();
    let floor_oracle = |t: i64| -> Result<BigInt> {
        let f = IntPoly::from_i64s(&[0, 0, 1]);
        let g = IntPoly::from_i64s(&[3, 2]);
        Ok(poly_floor_div(&f, &g)?.eqp.eval(t)?.to_integer())
    };
    let pair = [IntPoly::from_i64s(&[0, 1]), IntPoly::from_i64s(&[1, 1])];
    let frob_oracle = |t: i64| frobenius_at(&pair, t).map(|v| v.0);
    let triple = [
        IntPoly::from_i64s(&[0, 1]),
        IntPoly::from_i64s(&[1, 1]),
        IntPoly::from_i64s(&[3, 1]),
    ];
    let genus_oracle = |t: i64| frobenius_at(&triple, t).map(|v| v.1);
    let oracles: [(&str, &Oracle); 3] = [
        ("floor", &floor_oracle),
        ("frobenius", &frob_oracle),
        ("genus", &genus_oracle),
    ];
    for (name, oracle) in oracles {
        let out = detect_and_fit_eqp(oracle, &cfg).unwrap();
        assert_minimal(&out, oracle);
        assert_window(&out, oracle);
        assert!(out.eqp.qp.period() <= 3, "{name}");
    }
}
