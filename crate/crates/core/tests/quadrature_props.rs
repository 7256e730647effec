mod common;

use common::*;
use proptest::prelude::*;
use varexp::funcs::{mean_on_ball, Ball, Func, RealFunction};
use varexp::quadrature::{integrate_annulus, integrate_ball, integrate_interval};

const TOL: f64 = 1e-11;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_is_floor_plus_rings(f in func(), k_min in -4i32..0, span in 1i32..6) {
        let k = k_min + span;
        let whole = integrate_ball(&f, &Ball::dyadic(k, 1), TOL).unwrap();
        let floor = integrate_ball(&f, &Ball::dyadic(k_min, 1), TOL).unwrap();
        let mut sum = floor.value;
        let mut err = whole.abs_error_bound + floor.abs_error_bound;
        for j in k_min + 1..=k {
            let r = integrate_annulus(&f, j, 1, TOL).unwrap();
            sum += r.value;
            err += r.abs_error_bound;
        }
        prop_assert!((whole.value - sum).abs() <= err + 1e-12, "{} vs {}", whole.value, sum);
    }

    #[test]
    fn linear_in_the_integrand(f in func(), g in func(), a in -3.0f64..3.0, b in -3.0f64..3.0, r in 0.5f64..8.0) {
        let ball = Ball::new(r, 1).unwrap();
        let h = Func::combination([(a, f.clone()), (b, g.clone())]);
        let ih = integrate_ball(&h, &ball, TOL).unwrap();
        let i_f = integrate_ball(&f, &ball, TOL).unwrap();
        let ig = integrate_ball(&g, &ball, TOL).unwrap();
        let bound = ih.abs_error_bound + a.abs() * i_f.abs_error_bound + b.abs() * ig.abs_error_bound;
        prop_assert!((ih.value - a * i_f.value - b * ig.value).abs() <= bound + 1e-12);
    }

    #[test]
    fn halving_tol_does_not_loosen_the_bound(f in func(), r in 0.5f64..8.0, e in 4i32..10) {
        let tol = 10f64.powi(-e);
        let ball = Ball::new(r, 1).unwrap();
        let coarse = integrate_ball(&f, &ball, tol).unwrap();
        let fine = integrate_ball(&f, &ball, tol / 2.0).unwrap();
        prop_assert!(fine.abs_error_bound <= coarse.abs_error_bound);
    }

    #[test]
    fn odd_functions_have_zero_mean(r in 0.1f64..20.0, s in 0.2f64..5.0, k in -2i32..3) {
        let ball = Ball::new(r, 1).unwrap();
        for f in [Func::Sign, Func::chi_ball(s).times_sign(), Func::chi_ring(k).times_sign()] {
            let m = mean_on_ball(&f, &ball, 1e-12).unwrap();
            prop_assert!(m.value.abs() <= m.abs_error_bound.max(1e-12), "{:?}", m);
        }
    }

    #[test]
    fn mean_of_own_indicator_is_one(r in 1e-3f64..1e3, dim in 1usize..4) {
        let ball = Ball::new(r, dim).unwrap();
        let m = mean_on_ball(&Func::chi_ball(r), &ball, 1e-12).unwrap();
        prop_assert!((m.value - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn interval_rule_against_closed_form() {
    // ∫_0^1 x^{-1/2} = 2 with the singularity at an endpoint
    let q = integrate_interval(|x: f64| x.powf(-0.5), 0.0, 1.0, &[], 1e-10).unwrap();
    assert!((q.value - 2.0).abs() < 1e-8, "{q:?}");
    let f = Func::power(-0.5, Some(1.0));
    assert_eq!(f.value(0.25).unwrap(), 2.0);
}
