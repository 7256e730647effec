//! Checkers for the central BMO statements.

use super::Named;
use crate::config::StatementTol;
use crate::error::{Error, Result};
use crate::exec;
use crate::exponent::Exponent;
use crate::fit::Verdict;
use crate::funcs::{mean_on_ball, Ball, Func, RealFunction};
use crate::report::{CheckReport, Witness};
use crate::spaces::{self, CenterRule, MEAN_TOL};

/// The dyadic-step counterexample: its `p = 1` mean oscillation stays
/// bounded, its ball means vanish, and its `p0`-oscillation ratio grows
/// like `r^{1 - 1/p0}`.
pub fn check_counterexample(
    p0s: &[f64],
    k_max: u32,
    radius_grid: &[f64],
    t: &StatementTol,
    norm_tol: f64,
) -> Result<CheckReport> {
    if p0s.is_empty() {
        return Err(Error::invalid("no p0 values to sweep"));
    }
    let f = Func::dyadic_step(k_max);
    let mut report = CheckReport::new("prop3.1");

    let classical = spaces::cbmo_classical_norm(&f, 1.0, 1, radius_grid, norm_tol)?;
    let trend = classical.divergence_fit.expect("CBMO results carry a trend");
    let bounded = trend.slope < t.slope_tol;
    report.witnesses.push(Witness::new("classical p=1 oscillation, grid sup", classical.value, f64::NAN));
    report.note(format!("p=1 oscillation sup {:.9}, edge slope {:.3e}", classical.value, trend.slope));

    let mut radii: Vec<f64> = radius_grid.to_vec();
    radii.push(10.0);
    let means = exec::try_map(&radii, |&r| mean_on_ball(&f, &Ball::new(r, 1)?, MEAN_TOL).map(|q| q.value))?;
    let mut zero_means = true;
    for (r, m) in radii.iter().zip(&means) {
        zero_means &= m.abs() <= t.abs_tol;
        report.witnesses.push(Witness::new(format!("f_B, B=B(0,{r})"), *m, 0.0));
    }

    let mut slopes_ok = true;
    let mut first_slope = None;
    for &p0 in p0s {
        let e = Exponent::constant(p0)?;
        let res = spaces::cbmo_var_norm(&f, &e, radius_grid, norm_tol)?;
        let tr = res.divergence_fit.expect("CBMO results carry a trend");
        let target = 1.0 - 1.0 / p0;
        slopes_ok &= (tr.slope - target).abs() <= t.slope_tol && tr.verdict == Verdict::Divergent;
        first_slope.get_or_insert(tr.slope);
        report.witnesses.push(Witness::new(format!("ratio slope, p0={p0}"), tr.slope, target));
        report.note(format!("p0={p0}: slope {:.6} (r²={:.6}), target {target:.6}", tr.slope, tr.r2));
    }
    report.pass = bounded && zero_means && slopes_ok;
    report.empirical_constant = Some(classical.value);
    report.fitted_exponent = first_slope;
    Ok(report)
}

/// `‖f‖_{C^{p(·)}} / ‖f‖_{CBMO^q}` over the bank for each `q`.
pub fn check_embedding_cbmo_q(
    e: &Exponent,
    q_grid: &[f64],
    bank: &[Named],
    radius_grid: &[f64],
    t: &StatementTol,
    norm_tol: f64,
) -> Result<CheckReport> {
    let q_max = q_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !q_max.is_finite() || q_grid.iter().any(|q| !(*q > 1.0)) {
        return Err(Error::invalid("embedding indices must be > 1"));
    }
    let dim = e.dimension();
    let mut report = CheckReport::new("prop3.2");
    let var = exec::try_map(bank, |(_, f)| spaces::cbmo_var_norm(f, e, radius_grid, norm_tol))?;
    let mut sup_at_max = 0.0f64;
    let mut finite_at_max = true;
    let mut tested_at_max = 0;
    for &q in q_grid {
        let mut sup = 0.0f64;
        for ((name, f), v) in bank.iter().zip(&var) {
            if f.origin_power().is_some_and(|a| a * q <= -(dim as f64)) {
                report.note(format!("{name}: not locally in L^{q}, skipped"));
                continue;
            }
            let c = spaces::cbmo_classical_norm(f, q, dim, radius_grid, norm_tol)?;
            let c_trend = c.divergence_fit.map_or(0.0, |tr| tr.slope);
            if c.value == 0.0 {
                report.note(format!("{name}, q={q}: 0/0, skipped"));
                continue;
            }
            if c_trend >= t.slope_tol {
                report.note(format!("{name}, q={q}: CBMO^q norm grows at the grid edge, skipped"));
                continue;
            }
            let ratio = v.value / c.value;
            sup = sup.max(ratio);
            report.witnesses.push(Witness::new(format!("{name} q={q}"), v.value, c.value));
            if q == q_max {
                tested_at_max += 1;
                let v_slope = v.divergence_fit.map_or(0.0, |tr| tr.slope);
                finite_at_max &= ratio.is_finite() && v_slope < t.slope_tol;
            }
        }
        if q == q_max {
            sup_at_max = sup;
        }
        report.note(format!("q={q}: sup ratio {sup:.9}"));
    }
    report.pass = finite_at_max && tested_at_max > 0;
    report.empirical_constant = Some(sup_at_max);
    Ok(report)
}

pub struct EquivalenceReports {
    pub prop3_3: CheckReport,
    pub prop3_4: CheckReport,
}

/// Per function: the mean-centred star norm equals the variable norm
/// exactly, the optimal-centre norm never exceeds it, and
/// `κ = var / inf` is finite.
pub fn check_norm_equivalences(
    e: &Exponent,
    bank: &[Named],
    radius_grid: &[f64],
    t3: &StatementTol,
    t4: &StatementTol,
    norm_tol: f64,
) -> Result<EquivalenceReports> {
    let rows = exec::try_map(bank, |(_, f)| -> Result<_> {
        let var = spaces::cbmo_var_norm(f, e, radius_grid, norm_tol)?;
        let star = spaces::cbmo_star_norm(f, e, &CenterRule::BallAverage, radius_grid, norm_tol)?;
        let (inf, centres) = spaces::cbmo_inf_norm_with_centres(f, e, radius_grid, norm_tol)?;
        let per_ball = spaces::cbmo_star_norm(f, e, &CenterRule::PerBall { centers: centres }, radius_grid, norm_tol)?;
        Ok((var, star, inf, per_ball))
    })?;
    let mut r3 = CheckReport::new("prop3.3");
    let mut r4 = CheckReport::new("prop3.4");
    let (mut pass3, mut pass4) = (true, true);
    let (mut c3, mut kappa) = (0.0f64, 0.0f64);
    for ((name, _), (var, star, inf, per_ball)) in bank.iter().zip(&rows) {
        for ((r, v), (_, s)) in var.breakdown.iter().zip(&star.breakdown) {
            pass3 &= (v - s).abs() <= t3.abs_tol;
            r3.witnesses.push(Witness::new(format!("{name} B(0,{r}) c_B=f_B"), *s, *v));
        }
        for (((r, v), (_, i)), (_, pb)) in var.breakdown.iter().zip(&inf.breakdown).zip(&per_ball.breakdown) {
            pass4 &= *i <= v + t4.abs_tol;
            // the optimal centres give a valid collection {c_B}
            pass3 &= (pb - i).abs() <= t3.abs_tol.max(1e-9 * i);
            r4.witnesses.push(Witness::new(format!("{name} B(0,{r})"), *i, *v));
        }
        if var.value == 0.0 && inf.value == 0.0 {
            r4.note(format!("{name}: both norms 0, κ skipped"));
            continue;
        }
        let k = var.value / inf.value;
        pass4 &= k.is_finite();
        kappa = kappa.max(k);
        c3 = c3.max(var.value / per_ball.value);
        r4.note(format!("{name}: κ={k:.9}"));
    }
    r3.pass = pass3 && !r3.witnesses.is_empty();
    r3.empirical_constant = Some(c3);
    r3.note("star norm with c_B = f_B must equal the variable norm; optimal centres reproduce the infimum");
    r4.pass = pass4 && !r4.witnesses.is_empty();
    r4.empirical_constant = Some(kappa);
    Ok(EquivalenceReports {
        prop3_3: r3,
        prop3_4: r4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_statement_tols;
    use crate::norms::DEFAULT_NORM_TOL;

    fn tol(id: &str) -> StatementTol {
        default_statement_tols()[id]
    }

    #[test]
    fn counterexample_slopes() {
        let grid = spaces::default_radius_grid();
        let r = check_counterexample(&[2.0, 4.0], 40, &grid, &tol("prop3.1"), DEFAULT_NORM_TOL).unwrap();
        assert!(r.pass, "{}", r.notes);
        assert!((r.fitted_exponent.unwrap() - 0.5).abs() < 0.05);
        let m10 = r.witnesses.iter().find(|w| w.input == "f_B, B=B(0,10)").unwrap();
        assert!(m10.lhs.abs() <= 1e-9);
    }

    #[test]
    fn embedding_sign_ratio_one() {
        let e = Exponent::constant(2.0).unwrap();
        let bank = vec![("sign".to_string(), Func::Sign), ("one".to_string(), Func::Constant { c: 1.0 })];
        let grid = [0.5, 1.0, 2.0, 8.0];
        let r = check_embedding_cbmo_q(&e, &[2.0], &bank, &grid, &tol("prop3.2"), DEFAULT_NORM_TOL).unwrap();
        assert!(r.pass);
        assert_eq!(r.witnesses.len(), 1);
        assert!((r.empirical_constant.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equivalences_on_small_bank() {
        let e = Exponent::constant(2.0).unwrap();
        let bank = vec![
            ("sign".to_string(), Func::Sign),
            ("one".to_string(), Func::Constant { c: 1.0 }),
            ("chi01".to_string(), Func::chi_interval(0.0, 1.0)),
        ];
        let grid = [0.25, 1.0, 4.0];
        let r = check_norm_equivalences(&e, &bank, &grid, &tol("prop3.3"), &tol("prop3.4"), DEFAULT_NORM_TOL).unwrap();
        assert!(r.prop3_3.pass && r.prop3_4.pass, "{:?}", r.prop3_4.notes);
        assert!(r.prop3_4.notes.contains("sign: κ=1.0000000"));
        assert!(r.prop3_4.empirical_constant.unwrap() >= 1.0, "{}", r.prop3_4.notes);
    }
}
