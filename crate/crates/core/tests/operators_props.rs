mod common;

use common::*;
use proptest::prelude::*;
use varexp::funcs::{mean_on_ball, Ball, Func, RealFunction};
use varexp::operators::{self, commutator_dual_hardy, commutator_hardy, hardy, OperatorKind};

const TOL: f64 = 1e-12;

fn point() -> impl Strategy<Value = f64> {
    prop_oneof![-20.0f64..-0.01, 0.01f64..20.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_in_f(f in func(), g in func(), a in -3.0f64..3.0, b in -3.0f64..3.0, x in point()) {
        let h = Func::combination([(a, f.clone()), (b, g.clone())]);
        for kind in [OperatorKind::Hardy, OperatorKind::DualHardy] {
            let v = |u: &Func| operators::apply(kind, None, u, x, 1, TOL).unwrap();
            let (vh, vf, vg) = (v(&h), v(&f), v(&g));
            let bound = vh.abs_error_bound + a.abs() * vf.abs_error_bound + b.abs() * vg.abs_error_bound;
            prop_assert!((vh.value - a * vf.value - b * vg.value).abs() <= bound + 1e-9, "{kind:?}");
        }
    }

    #[test]
    fn commutator_ignores_constant_shift(b in func(), f in func(), c in -5.0f64..5.0, x in point()) {
        let shifted = Func::combination([(1.0, b.clone()), (c, Func::Constant { c: 1.0 })]);
        let d1 = commutator_hardy(&shifted, &f, x, 1, TOL).unwrap().value - commutator_hardy(&b, &f, x, 1, TOL).unwrap().value;
        let d2 = commutator_dual_hardy(&shifted, &f, x, 1, TOL).unwrap().value
            - commutator_dual_hardy(&b, &f, x, 1, TOL).unwrap().value;
        prop_assert!(d1.abs() <= 1e-9 && d2.abs() <= 1e-9, "{d1} {d2}");
    }

    #[test]
    fn commutator_bilinear(b in func(), f in func(), g in func(), s in -2.0f64..2.0, x in point()) {
        let fg = Func::combination([(1.0, f.clone()), (s, g.clone())]);
        let lhs = commutator_hardy(&b, &fg, x, 1, TOL).unwrap().value;
        let rhs = commutator_hardy(&b, &f, x, 1, TOL).unwrap().value + s * commutator_hardy(&b, &g, x, 1, TOL).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn oscillation_decomposition(b in func(), r in 0.2f64..12.0, t in 0.001f64..1.0, neg in any::<bool>()) {
        let x = if neg { -t * r } else { t * r };
        let ball = Ball::new(r, 1).unwrap();
        let lhs = b.value(x).unwrap() - mean_on_ball(&b, &ball, TOL).unwrap().value;
        let h = commutator_hardy(&b, &Func::chi_ball(r), x, 1, TOL).unwrap().value;
        let hs = commutator_dual_hardy(&b, &Func::scaled_ball(r, 1), x, 1, TOL).unwrap().value;
        let rhs = x.abs() / ball.volume() * h + hs;
        prop_assert!((lhs - rhs).abs() <= 1e-7, "{lhs} vs {rhs}");
    }

    #[test]
    fn hardy_of_unit_ball_indicator(x in point(), dim in 1usize..4) {
        // |x|^{-n} |B(0, min(|x|, 1))|
        let v = hardy(&Func::chi_ball(1.0), x, dim, TOL).unwrap().value;
        let vn = varexp::funcs::unit_ball_volume(dim);
        let exact = if x.abs() <= 1.0 { vn } else { vn * x.abs().powi(-(dim as i32)) };
        prop_assert!((v - exact).abs() <= 1e-10 * exact, "{v} vs {exact}");
    }
}
