//! Checkers for the Hardy-commutator characterization.

use super::Named;
use crate::config::StatementTol;
use crate::error::{Error, Result};
use crate::exec;
use crate::exponent::Exponent;
use crate::funcs::{mean_on_ball, Ball, Domain, Func, RealFunction};
use crate::norms;
use crate::operators::{self, OperatorImage, OperatorKind, DEFAULT_OP_TOL};
use crate::report::{CheckReport, Witness};
use crate::spaces::{self, MEAN_TOL};
use crate::fit;

/// Four symbols: constant, `|y|`, `sign`, and a step function.
pub fn default_symbols() -> Vec<Named> {
    vec![
        ("b=3".into(), Func::Constant { c: 3.0 }),
        ("b=|y|".into(), Func::power(1.0, None)),
        ("b=sign".into(), Func::Sign),
        (
            "b=steps".into(),
            Func::combination([(1.5, Func::chi_interval(-0.7, 1.3)), (-2.0, Func::chi_ring(2)), (0.5, Func::Sign)]),
        ),
    ]
}

/// `b(x) - b_B = (|x|^n/|B|) [b,H](χ_B)(x) + [b,H*](f_0)(x)` with
/// `f_0 = |y|^n |B|^{-1} χ_B`, at `points` sample points per ball.
pub fn check_commutator_identity(
    symbols: &[Named],
    balls: &[f64],
    points: usize,
    dim: usize,
    t: &StatementTol,
    op_tol: f64,
) -> Result<CheckReport> {
    if points == 0 || balls.is_empty() || symbols.is_empty() {
        return Err(Error::invalid("identity check needs symbols, balls and points"));
    }
    let mut jobs = Vec::new();
    for (name, b) in symbols {
        if dim >= 2 && !b.is_radial() {
            continue;
        }
        for &r in balls {
            jobs.push((name, b, r));
        }
    }
    let rows = exec::try_map(&jobs, |&(name, b, r)| -> Result<Vec<Witness>> {
        let ball = Ball::new(r, dim)?;
        let b_mean = mean_on_ball(b, &ball, MEAN_TOL)?.value;
        let chi = Func::chi_ball(r);
        let f0 = Func::scaled_ball(r, dim);
        let mut out = Vec::with_capacity(points);
        for j in 0..points {
            let mut x = r * (j as f64 + 0.5) / points as f64;
            if dim == 1 && j % 2 == 1 {
                x = -x;
            }
            let lhs = b.value(x)? - b_mean;
            let h = operators::commutator_hardy(b, &chi, x, dim, op_tol)?.value;
            let hs = operators::commutator_dual_hardy(b, &f0, x, dim, op_tol)?.value;
            let rhs = x.abs().powi(dim as i32) / ball.volume() * h + hs;
            out.push(Witness::new(format!("{name} B(0,{r}) x={x}"), lhs, rhs));
        }
        Ok(out)
    })?;
    let mut report = CheckReport::new("thm4.1-converse-identity");
    report.witnesses = rows.into_iter().flatten().collect();
    let worst = report.witnesses.iter().map(|w| (w.lhs - w.rhs).abs()).fold(0.0, f64::max);
    report.pass = worst <= t.abs_tol && !report.witnesses.is_empty();
    report.empirical_constant = Some(worst);
    report.note(format!("max residual {worst:.3e}"));
    Ok(report)
}

/// Function banks for the forward check.
#[derive(Clone, Debug)]
pub struct ForwardOptions {
    /// `(scale, name, f)`; the trend is fitted against `scale`.
    pub bank: Vec<(f64, Named)>,
    /// Symbol outside `C^{p(·)}` and the scaled bank used to corroborate
    /// the converse.
    pub converse: Option<(Func, Vec<(f64, Func)>)>,
    pub op_tol: f64,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        let mut bank = Vec::new();
        for m in -4..=10 {
            let s = 2f64.powi(m);
            bank.push((s, (format!("χ_B(0,2^{m})"), Func::chi_ball(s))));
            bank.push((s, (format!("χ_C{m}"), Func::chi_ring(m))));
        }
        let converse = (1..=12).map(|m| (2f64.powi(m), Func::chi_ball(2f64.powi(m)))).collect();
        ForwardOptions {
            bank,
            converse: Some((Func::dyadic_step(crate::funcs::DEFAULT_K_MAX), converse)),
            op_tol: DEFAULT_OP_TOL,
        }
    }
}

fn operator_ratio(kind: OperatorKind, b: &Func, f: &Func, e: &Exponent, op_tol: f64, norm_tol: f64) -> Result<f64> {
    let nf = norms::luxemburg_norm(f, e, &Domain::Whole, norm_tol)?.value;
    if nf == 0.0 {
        return Ok(0.0);
    }
    let img = OperatorImage::new(kind, Some(b), f, e.dimension(), op_tol)?;
    Ok(norms::luxemburg_norm(&img, e, &Domain::Whole, norm_tol)?.value / nf)
}

/// Empirical operator norms of `[b,H]` and `[b,H*]` on `L^{p(·)}` and
/// `L^{p'(·)}` over a bank. A bank can only bound the operator norm from
/// below, so a pass means no counterexample was found.
pub fn check_commutator_bounded(
    b: &Func,
    e: &Exponent,
    opts: &ForwardOptions,
    t: &StatementTol,
    norm_tol: f64,
) -> Result<CheckReport> {
    let conj = e.conjugate()?;
    let grid = spaces::default_radius_grid();
    let in_c = |ex: &Exponent| -> Result<bool> {
        let r = spaces::cbmo_var_norm(b, ex, &grid, norm_tol)?;
        Ok(r.value.is_finite() && r.divergence_fit.is_none_or(|tr| tr.slope < t.slope_tol))
    };
    let symbol_ok = in_c(e)? && in_c(&conj)?;

    let mut report = CheckReport::new("thm4.1-forward");
    let mut scales: Vec<f64> = opts.bank.iter().map(|(s, _)| *s).collect();
    scales.sort_by(f64::total_cmp);
    scales.dedup();

    let mut forward_ok = true;
    let mut worst = 0.0f64;
    let mut worst_slope = f64::NEG_INFINITY;
    for (ename, ex) in [("p", e), ("p'", &conj)] {
        for (kname, kind) in [("[b,H]", OperatorKind::CommutatorHardy), ("[b,H*]", OperatorKind::CommutatorDualHardy)] {
            let ratios = exec::try_map(&opts.bank, |(_, (_, f))| operator_ratio(kind, b, f, ex, opts.op_tol, norm_tol))?;
            let per_scale: Vec<f64> = scales
                .iter()
                .map(|s| {
                    opts.bank
                        .iter()
                        .zip(&ratios)
                        .filter(|((bs, _), _)| bs == s)
                        .map(|(_, r)| *r)
                        .fold(0.0, f64::max)
                })
                .collect();
            for ((_, (fname, _)), r) in opts.bank.iter().zip(&ratios) {
                report
                    .witnesses
                    .push(Witness::new(format!("{kname} on L^{ename}, f={fname}"), *r, f64::NAN));
            }
            let sup = ratios.iter().copied().fold(0.0, f64::max);
            let tr = fit::last_decade_trend(&scales, &per_scale);
            forward_ok &= sup.is_finite() && tr.slope < t.slope_tol;
            worst = worst.max(sup);
            worst_slope = worst_slope.max(tr.slope);
            report.note(format!("{kname} on L^{ename}: sup {sup:.6}, edge slope {:.3e}", tr.slope));
        }
    }
    if !symbol_ok {
        report.note("symbol is not in C^{p(·)} ∩ C^{p'(·)} on the grid; forward direction not applicable");
    } else {
        report.note(if forward_ok {
            "no counterexample found"
        } else {
            "bank ratio unbounded for a symbol in the space"
        });
    }

    let mut converse_ok = true;
    if let Some((bad, fs)) = &opts.converse {
        let ratios = exec::try_map(fs, |(_, f)| operator_ratio(OperatorKind::CommutatorHardy, bad, f, e, opts.op_tol, norm_tol))?;
        for ((s, _), r) in fs.iter().zip(&ratios) {
            report.witnesses.push(Witness::new(format!("converse: [b,H] with dyadic-step b, f=χ_B(0,{s})"), *r, f64::NAN));
        }
        converse_ok = ratios.windows(2).all(|w| w[1] > w[0]);
        report.note(format!(
            "converse corroboration: ratio over scaled balls {}",
            if converse_ok { "strictly increasing" } else { "not monotone" }
        ));
    }

    report.pass = (!symbol_ok || forward_ok) && converse_ok;
    report.empirical_constant = Some(worst);
    report.fitted_exponent = Some(worst_slope);
    Ok(report)
}
