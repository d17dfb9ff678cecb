mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use thompson_core::dyadic::{circ_between, circ_interp, in_cyclic_order};
use thompson_core::{CirclePoint, Dyadic};

fn r(x: &Dyadic) -> BigRational {
    x.to_rational()
}

proptest! {
    #[test]
    fn ring_operations_match_rationals(a in dyadic(), b in dyadic()) {
        prop_assert_eq!(r(&(&a + &b)), r(&a) + r(&b));
        prop_assert_eq!(r(&(&a - &b)), r(&a) - r(&b));
        prop_assert_eq!(r(&(&a * &b)), r(&a) * r(&b));
        prop_assert_eq!(r(&-a.clone()), -r(&a));
        prop_assert_eq!(a.cmp(&b), r(&a).cmp(&r(&b)));
        prop_assert_eq!(a == b, r(&a) == r(&b));
    }

    #[test]
    fn floor_and_fract(a in dyadic()) {
        prop_assert_eq!(BigRational::from_integer(a.floor()), r(&a).floor());
        let f = a.fract();
        prop_assert!(!f.is_negative() && f < Dyadic::one());
        prop_assert_eq!(r(&f) + BigRational::from_integer(a.floor()), r(&a));
    }

    #[test]
    fn scaling_by_powers_of_two(a in dyadic(), k in -20i64..20) {
        let two = BigRational::from_integer(BigInt::from(2));
        let want = if k >= 0 { r(&a) * two.pow(k as i32) } else { r(&a) / two.pow((-k) as i32) };
        prop_assert_eq!(r(&a.mul_pow2(k)), want);
        prop_assert_eq!(r(&Dyadic::pow2(k)), BigRational::from_integer(BigInt::from(2)).pow(k as i32));
    }

    #[test]
    fn canonical_form_is_reduced(a in dyadic()) {
        prop_assert!(a.exp() == 0 || a.numer() % 2 != BigInt::zero());
    }

    #[test]
    fn display_roundtrip(a in dyadic()) {
        prop_assert_eq!(a.to_string().parse::<Dyadic>().unwrap(), a.clone());
        prop_assert_eq!(a.to_pow2_string().parse::<Dyadic>().unwrap(), a.clone());
        let back = Dyadic::from_rational(&r(&a)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn json_roundtrip(a in dyadic()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Dyadic>(&s).unwrap(), a);
    }

    #[test]
    fn simplest_between_brute_force(n in 0i64..64, m in 1i64..64, d in 0u32..7) {
        let lo = BigRational::new(BigInt::from(n), BigInt::from(1i64 << d) * 3);
        let hi = &lo + BigRational::new(BigInt::from(m), BigInt::from(64));
        let s = Dyadic::simplest_between(&lo, &hi).unwrap();
        prop_assert!(lo < r(&s) && r(&s) < hi);
        // No point of a coarser grid lies strictly between.
        for e in 0..s.exp() {
            let scale = BigRational::from_integer(BigInt::one() << e);
            let k = (&lo * &scale).floor().to_integer() + 1;
            prop_assert!(BigRational::new(k, BigInt::one() << e) >= hi);
        }
    }

    #[test]
    fn circle_distances(a in unit_dyadic(), b in unit_dyadic()) {
        let (p, q) = (CirclePoint::new(&a), CirclePoint::new(&b));
        let d = p.ccw_dist(&q);
        prop_assert!(!d.is_negative() && d < Dyadic::one());
        prop_assert_eq!(p.shift(&d), q.clone());
        if p != q {
            prop_assert_eq!(&d + &q.ccw_dist(&p), Dyadic::one());
        }
    }

    #[test]
    fn cyclic_order_is_rotation_invariant(xs in proptest::collection::btree_set(0i64..1024, 3..6), s in 0i64..1024) {
        let pts: Vec<CirclePoint> = xs.iter().map(|&x| CirclePoint::new(&Dyadic::new(x, 10))).collect();
        prop_assert!(in_cyclic_order(&pts));
        let shift = Dyadic::new(s, 10);
        let moved: Vec<CirclePoint> = pts.iter().map(|p| p.shift(&shift)).collect();
        prop_assert!(in_cyclic_order(&moved));
        let mut rev = pts.clone();
        rev.reverse();
        prop_assert!(!in_cyclic_order(&rev));
        prop_assert!(circ_between(&pts[0], &pts[1], &pts[2]).unwrap());
    }

    #[test]
    fn interpolation_stays_on_the_arc(a in unit_dyadic(), b in unit_dyadic(), t in 1i64..16) {
        prop_assume!(a != b);
        let (p, q) = (CirclePoint::new(&a), CirclePoint::new(&b));
        let m = circ_interp(&p, &q, &Dyadic::q(t, 16)).unwrap();
        prop_assert!(circ_between(&p, &m, &q).unwrap());
        prop_assert_eq!(p.ccw_dist(&m), &p.ccw_dist(&q) * &Dyadic::q(t, 16));
    }
}

#[test]
fn parse_errors() {
    for bad in ["", "1/3", "a", "1/0", "1/2^x", "1/-2"] {
        assert!(bad.parse::<Dyadic>().is_err(), "{bad:?}");
    }
    assert_eq!("3/8".parse::<Dyadic>().unwrap(), q(3, 8));
    assert_eq!("-5/2^3".parse::<Dyadic>().unwrap(), q(-5, 8));
    assert_eq!("4/8".parse::<Dyadic>().unwrap(), q(1, 2));
}
