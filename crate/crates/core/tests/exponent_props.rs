mod common;

use common::*;
use proptest::prelude::*;
use varexp::exponent::Exponent;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conjugate_is_an_involution(e in exponent(), x in -50.0f64..50.0) {
        let back = e.conjugate().unwrap().conjugate().unwrap();
        prop_assert!((back.value(x) - e.value(x)).abs() <= 1e-12 * e.value(x));
    }

    #[test]
    fn constant_bounds_are_exact(p in 1.01f64..100.0) {
        let e = Exponent::constant(p).unwrap();
        prop_assert_eq!(e.p_minus(), p);
        prop_assert_eq!(e.p_plus(), p);
    }

    #[test]
    fn conjugate_swaps_bounds(e in exponent()) {
        let c = e.conjugate().unwrap();
        let dual = |p: f64| p / (p - 1.0);
        prop_assert!((c.p_minus() - dual(e.p_plus())).abs() <= 1e-12 * c.p_minus());
        prop_assert!((c.p_plus() - dual(e.p_minus())).abs() <= 1e-12 * c.p_plus());
    }

    #[test]
    fn conjugate_pointwise(e in exponent(), x in -50.0f64..50.0) {
        let c = e.conjugate().unwrap();
        prop_assert!((1.0 / e.value(x) + 1.0 / c.value(x) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn membership_in_p() {
    let edge = Exponent::piecewise(vec![0.0], vec![1.0, 2.0]).unwrap();
    assert!(!edge.is_in_p());
    let t = varexp::config::default_statement_tols()["lemma2.3"];
    assert!(varexp::verify::check_chi_product(&edge, &[1.0], &t).is_err());
    assert!(Exponent::constant(2.0).unwrap().is_in_p());
    assert!(Exponent::constant(f64::INFINITY).is_err());
    assert!(Exponent::piecewise(vec![0.0], vec![2.0, 0.5]).is_err());
}
