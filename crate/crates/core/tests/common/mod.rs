#![allow(dead_code)]

use proptest::prelude::*;
use varexp::exponent::{Exponent, SmoothFormula, SmoothParams};
use varexp::funcs::Func;

pub fn constant_exponent() -> impl Strategy<Value = Exponent> {
    (1.1f64..6.0).prop_map(|p| Exponent::constant(p).unwrap())
}

pub fn piecewise_exponent() -> impl Strategy<Value = Exponent> {
    (-4.0f64..0.0, 0.1f64..4.0, prop::collection::vec(1.2f64..6.0, 3))
        .prop_map(|(a, w, values)| Exponent::piecewise(vec![a, a + w], values).unwrap())
}

pub fn smooth_exponent() -> impl Strategy<Value = Exponent> {
    (1.5f64..3.0, 0.0f64..1.0).prop_map(|(base, amp)| {
        Exponent::smooth(SmoothFormula::InvOnePlusAbs, SmoothParams { base, amp }).unwrap()
    })
}

pub fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![constant_exponent(), piecewise_exponent(), smooth_exponent()]
}

/// Functions in every `L^{p(·)}` with `p_+ <= 6`.
pub fn func() -> impl Strategy<Value = Func> {
    prop_oneof![
        (-4.0f64..4.0, 0.1f64..3.0, 0.2f64..3.0).prop_map(|(a, w, c)| Func::chi_interval(a, a + w).scaled(c)),
        (-3i32..4, 0.2f64..3.0).prop_map(|(k, c)| Func::chi_ring(k).scaled(c)),
        (0.0f64..0.15, 0.5f64..3.0).prop_map(|(a, r)| Func::power(-a, Some(r))),
        (0.5f64..4.0).prop_map(|r| Func::chi_ball(r).times_sign()),
        (-3.0f64..0.0, 0.2f64..2.0, -2.0f64..2.0, 0.5f64..3.0).prop_map(|(a, w, c, r)| {
            Func::combination([(1.0, Func::chi_interval(a, a + w)), (c, Func::chi_ring(1)), (0.5, Func::chi_ball(r))])
        }),
    ]
}
