mod common;

use common::*;
use proptest::prelude::*;
use varexp::exponent::Exponent;
use varexp::funcs::Func;
use varexp::spaces::{self, CenterRule};

const TOL: f64 = 1e-10;

fn grid() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(-6i32..8, 2..6).prop_map(|ks| ks.into_iter().map(|k| 2f64.powi(k)).collect())
}

fn bounded_func() -> impl Strategy<Value = Func> {
    prop_oneof![
        (-4.0f64..4.0, 0.1f64..3.0, 0.2f64..3.0).prop_map(|(a, w, c)| Func::chi_interval(a, a + w).scaled(c)),
        (-3i32..4, -2.0f64..3.0).prop_map(|(k, c)| Func::combination([(c, Func::chi_ring(k)), (1.0, Func::Sign)])),
        (0.5f64..4.0).prop_map(|r| Func::chi_ball(r).times_sign()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn definitional_halves(f in bounded_func(), e in exponent(), g in grid(), c in -2.0f64..2.0) {
        let var = spaces::cbmo_var_norm(&f, &e, &g, TOL).unwrap();
        let star = spaces::cbmo_star_norm(&f, &e, &CenterRule::BallAverage, &g, TOL).unwrap();
        let other = spaces::cbmo_star_norm(&f, &e, &CenterRule::Constant { c }, &g, TOL).unwrap();
        let inf = spaces::cbmo_inf_norm(&f, &e, &g, TOL).unwrap();
        for i in 0..g.len() {
            prop_assert_eq!(var.breakdown[i], star.breakdown[i]);
            let v_inf = inf.breakdown[i].1;
            prop_assert!(v_inf <= var.breakdown[i].1);
            prop_assert!(v_inf <= other.breakdown[i].1 + 1e-9, "inf {} vs c={c}: {}", v_inf, other.breakdown[i].1);
        }
    }

    #[test]
    fn extending_the_grid_never_decreases(f in bounded_func(), e in exponent(), g in grid(), extra in -6i32..8) {
        let base = spaces::cbmo_var_norm(&f, &e, &g, TOL).unwrap().value;
        let mut wider = g.clone();
        wider.push(2f64.powi(extra));
        wider.sort_by(f64::total_cmp);
        wider.dedup();
        prop_assert!(spaces::cbmo_var_norm(&f, &e, &wider, TOL).unwrap().value >= base);
    }

    #[test]
    fn constant_exponent_bridge(f in bounded_func(), p in 1.1f64..6.0, g in grid()) {
        let e = Exponent::constant(p).unwrap();
        let var = spaces::cbmo_var_norm(&f, &e, &g, TOL).unwrap().value;
        let classical = spaces::cbmo_classical_norm(&f, p, 1, &g, TOL).unwrap().value;
        prop_assert!((var - classical).abs() <= 1e-6 * classical.max(1e-12), "{var} vs {classical}");
    }

    #[test]
    fn herz_lq_embedding(f in func(), e in exponent(), t in 0.2f64..1.0, q1 in 0.3f64..4.0, dq in 0.0f64..4.0) {
        // α > -n/p_+ keeps the lower tail majorant summable
        let alpha = -1.0 / e.p_plus() + t;
        let q2 = q1 + dq;
        let k = (-12, 12);
        let a = spaces::herz_norm(&f, &e, alpha, q1, k, TOL).unwrap();
        let b = spaces::herz_norm(&f, &e, alpha, q2, k, TOL).unwrap();
        prop_assert!(b.value <= a.value * (1.0 + 1e-12), "q={q1}: {} < q={q2}: {}", a.value, b.value);
    }

    #[test]
    fn herz_widening_k_never_decreases(f in func(), e in exponent(), q in 0.3f64..4.0, lo in -10i32..0, hi in 0i32..10) {
        let a = spaces::herz_norm(&f, &e, 0.0, q, (lo, hi), TOL).unwrap().value;
        let b = spaces::herz_norm(&f, &e, 0.0, q, (lo - 2, hi + 2), TOL).unwrap().value;
        prop_assert!(b >= a);
    }
}
