//! Property tests for the exact arithmetic layer.

use modeforge::algebra::coeff::{rat, ratq, Rat};
use modeforge::algebra::frac::Frac;
use modeforge::algebra::mpoly::{MPoly, VarSet};
use modeforge::{Coeff, RatSeries};
use num::{One, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratq(p, q))
}

fn series(len: usize) -> impl Strategy<Value = RatSeries> {
    (
        proptest::collection::vec(small_rat(), len),
        -3i64..=3,
    )
        .prop_map(|(coeffs, start)| RatSeries::new(1, start, coeffs))
}

fn unit_series(len: usize) -> impl Strategy<Value = RatSeries> {
    proptest::collection::vec(small_rat(), len - 1).prop_map(|mut tail| {
        let mut coeffs = vec![Rat::one()];
        coeffs.append(&mut tail);
        RatSeries::new(1, 0, coeffs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_ring_axioms(a in series(8), b in series(8), c in series(8)) {
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        prop_assert!(left.eq_to_validity(&right));
        let l2 = a.mul(&b.add(&c));
        let r2 = a.mul(&b).add(&a.mul(&c));
        prop_assert!(l2.eq_to_validity(&r2));
    }

    #[test]
    fn pow_rational_is_additive(a in unit_series(9),
                                p1 in -4i64..=4, q1 in 1i64..=3,
                                p2 in -4i64..=4, q2 in 1i64..=3) {
        let r1 = ratq(p1, q1);
        let r2 = ratq(p2, q2);
        let lhs = a.pow_rat(&(&r1 + &r2)).unwrap();
        let rhs = a.pow_rat(&r1).unwrap().mul(&a.pow_rat(&r2).unwrap());
        prop_assert!(lhs.eq_to_validity(&rhs));
    }

    #[test]
    fn pow_integral_matches_repeated_multiplication(a in unit_series(8), n in 0u32..5) {
        let lhs = a.pow_rat(&rat(n as i64)).unwrap();
        let rhs = a.pow_int(n);
        prop_assert!(lhs.eq_to_validity(&rhs));
    }

    #[test]
    fn double_inverse_is_identity(a in unit_series(9)) {
        let inv = a.inv().unwrap();
        let back = inv.inv().unwrap();
        prop_assert!(back.eq_to_validity(&a));
        // and a * a^{-1} = 1
        let prod = a.mul(&inv);
        prop_assert!(prod.eq_to_validity(&RatSeries::one_through(1, prod.valid_num())));
    }

    #[test]
    fn frac_inverse_roundtrip(c1 in proptest::collection::vec(small_rat(), 4),
                              c2 in proptest::collection::vec(small_rat(), 4)) {
        let vars = VarSet::new(["t", "s"]);
        let t = MPoly::var(&vars, "t");
        let s = MPoly::var(&vars, "s");
        let build = |cs: &[Rat]| {
            MPoly::constant_in(&vars, cs[0].clone())
                + t.clone().scale_rat(&cs[1])
                + s.clone().scale_rat(&cs[2])
                + (t.clone() * s.clone()).scale_rat(&cs[3])
        };
        let p = build(&c1);
        let q = build(&c2);
        prop_assume!(!p.is_zero() && !q.is_zero());
        let f = Frac::new(p.clone(), q.clone());
        let g = Frac::new(q, p);
        prop_assert_eq!(f * g, Frac::one());
    }

    #[test]
    fn dq_is_a_derivation(a in series(7), b in series(7)) {
        let lhs = a.mul(&b).dq();
        let rhs = a.dq().mul(&b).add(&a.mul(&b.dq()));
        prop_assert!(lhs.eq_to_validity(&rhs));
    }
}
