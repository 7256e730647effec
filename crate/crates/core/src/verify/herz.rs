//! Checkers for the generalized Minkowski inequality and the vector-valued
//! Herz commutator bound.

use rand::Rng;

use super::bank_rng;
use crate::config::StatementTol;
use crate::error::{Error, Result};
use crate::exec;
use crate::exponent::Exponent;
use crate::fit;
use crate::funcs::{AbsPow, Domain, Func, LrAggregate, RealFunction};
use crate::operators::{OperatorImage, OperatorKind, DEFAULT_OP_TOL};
use crate::quadrature::{self, QuadOptions};
use crate::report::{CheckReport, Witness};
use crate::spaces;

/// Fixed lists (single function, disjoint rings, identical pair) followed
/// by random finite lists drawn from `seed`.
pub fn minkowski_bank(count: usize, seed: u64) -> Vec<(String, Vec<Func>)> {
    let mut bank = vec![
        ("single χ[0,1]".to_string(), vec![Func::chi_interval(0.0, 1.0)]),
        ("{χ_C0, χ_C1}".to_string(), vec![Func::chi_ring(0), Func::chi_ring(1)]),
        ("identical pair".to_string(), vec![Func::power(-0.25, Some(2.0)); 2]),
    ];
    let mut rng = bank_rng(seed, "lemma5.1");
    let mut i = 0;
    while bank.len() < count {
        let len = rng.gen_range(1..=5);
        let list = (0..len)
            .map(|_| {
                let c = rng.gen_range(0.1..3.0);
                let f = match rng.gen_range(0..4) {
                    0 => {
                        let a = rng.gen_range(-5.0..5.0);
                        Func::chi_interval(a, a + rng.gen_range(0.1..4.0))
                    }
                    1 => Func::chi_ring(rng.gen_range(-3..4)),
                    2 => Func::power(-rng.gen_range(0.05..0.9), Some(rng.gen_range(0.5..4.0))),
                    _ => Func::chi_ball(rng.gen_range(0.5..4.0)).times_sign(),
                };
                f.scaled(c)
            })
            .collect();
        bank.push((format!("random#{i}"), list));
        i += 1;
    }
    bank.truncate(count.max(3));
    bank
}

const MINKOWSKI_TOL: f64 = 1e-13;

fn integral(g: &dyn RealFunction, dim: usize) -> Result<f64> {
    let opts = QuadOptions::new(MINKOWSKI_TOL).with_rel(MINKOWSKI_TOL);
    Ok(quadrature::integrate_domain(g, &Domain::Whole, dim, &opts)?.value)
}

/// `(Σ_j (∫|f_j|)^r)^{1/r} <= ∫ (Σ_j |f_j|^r)^{1/r}` on the line.
pub fn check_minkowski(lists: &[(String, Vec<Func>)], r_grid: &[f64], t: &StatementTol) -> Result<CheckReport> {
    if let Some(r) = r_grid.iter().find(|r| !(**r >= 1.0 && r.is_finite())) {
        return Err(Error::invalid(format!("ℓ^r index {r} must lie in [1, ∞)")));
    }
    let mut jobs = Vec::new();
    for (name, fs) in lists {
        if fs.is_empty() {
            return Err(Error::invalid(format!("list {name} is empty")));
        }
        for &r in r_grid {
            jobs.push((name, fs, r));
        }
    }
    let rows = exec::try_map(&jobs, |&(name, fs, r)| -> Result<Witness> {
        let norms1 = fs
            .iter()
            .map(|f| integral(&AbsPow::new(f, 1.0), 1))
            .collect::<Result<Vec<f64>>>()?;
        let lhs = norms1.iter().map(|v| v.powf(r)).sum::<f64>().powf(1.0 / r);
        let parts: Vec<&dyn RealFunction> = fs.iter().map(|f| f as &dyn RealFunction).collect();
        let rhs = integral(&LrAggregate::new(parts, r), 1)?;
        Ok(Witness::new(format!("{name} r={r}"), lhs, rhs))
    })?;
    let mut report = CheckReport::new("lemma5.1");
    let mut pass = true;
    let mut worst = 0.0f64;
    for w in rows {
        pass &= w.lhs <= w.rhs + t.abs_tol;
        if w.rhs > 0.0 {
            worst = worst.max(w.lhs / w.rhs);
        }
        report.witnesses.push(w);
    }
    report.pass = pass && !report.witnesses.is_empty();
    report.empirical_constant = Some(worst);
    report.note("constant 1");
    Ok(report)
}

/// Ten sequences `{χ_{C_m}, χ_{C_{m+1}}/2}` for `m = -2..=7`, with scale `2^m`.
pub fn sequence_bank() -> Vec<(f64, String, Vec<Func>)> {
    (-2..=7)
        .map(|m| {
            (
                2f64.powi(m),
                format!("{{χ_C{m}, χ_C{}/2}}", m + 1),
                vec![Func::chi_ring(m), Func::chi_ring(m + 1).scaled(0.5)],
            )
        })
        .collect()
}

/// `‖‖{[b,T]f_j}‖_{ℓ^r}‖_{K̇^{α,q}_{p(·)}} / ‖‖{f_j}‖_{ℓ^r}‖_{K̇^{α,q}_{p(·)}}`
/// for `T = H, H*` over a sequence bank, for every `q`. The `q = 1`
/// aggregate is also formed by both `ℓ^q` code paths, which must agree.
#[allow(clippy::too_many_arguments)]
pub fn check_vv_herz(
    b: &Func,
    e: &Exponent,
    alpha: f64,
    q_values: &[f64],
    r: f64,
    seqs: &[(f64, String, Vec<Func>)],
    k_range: (i32, i32),
    t: &StatementTol,
    norm_tol: f64,
) -> Result<CheckReport> {
    let conj = e.conjugate()?;
    let n = e.dimension() as f64;
    if !(alpha < n / conj.p_minus()) {
        return Err(Error::invalid(format!(
            "α = {alpha} must be below n/p'_- = {}",
            n / conj.p_minus()
        )));
    }
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::invalid(format!("ℓ^r index r = {r} must lie in (1, ∞)")));
    }
    if q_values.is_empty() {
        return Err(Error::invalid("no q values"));
    }
    let mut qs: Vec<f64> = q_values.to_vec();
    if !qs.contains(&1.0) {
        qs.push(1.0);
    }
    let dim = e.dimension();
    let kinds = [("[b,H]", OperatorKind::CommutatorHardy), ("[b,H*]", OperatorKind::CommutatorDualHardy)];

    // per sequence: denominators for every q, then numerators per kind
    type Row = (Vec<f64>, Vec<Vec<f64>>, f64);
    let rows = exec::try_map(seqs, |(_, _, fs)| -> Result<Row> {
        let parts: Vec<&dyn RealFunction> = fs.iter().map(|f| f as &dyn RealFunction).collect();
        let den = spaces::herz_norm_multi(&LrAggregate::new(parts, r), e, alpha, &qs, k_range, norm_tol)?;
        let mut nums = Vec::new();
        let mut branch_gap = 0.0f64;
        for (_, kind) in kinds {
            let imgs = fs
                .iter()
                .map(|f| OperatorImage::new(kind, Some(b), f, dim, DEFAULT_OP_TOL))
                .collect::<Result<Vec<_>>>()?;
            let parts: Vec<&dyn RealFunction> = imgs.iter().map(|g| g as &dyn RealFunction).collect();
            let num = spaces::herz_norm_multi(&LrAggregate::new(parts, r), e, alpha, &qs, k_range, norm_tol)?;
            // both ℓ^q paths on the same breakdown at the q = 1 boundary
            let vals: Vec<f64> = num[0].breakdown.iter().map(|(_, v)| *v).collect();
            branch_gap = branch_gap.max((spaces::lq_sum_small(&vals, 1.0) - spaces::lq_sum_large(&vals, 1.0)).abs());
            nums.push(num.iter().map(|s| s.value).collect());
        }
        Ok((den.iter().map(|s| s.value).collect(), nums, branch_gap))
    })?;

    let mut report = CheckReport::new("thm5.1");
    let scales: Vec<f64> = seqs.iter().map(|s| s.0).collect();
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut worst_slope = f64::NEG_INFINITY;
    for (qi, &q) in qs.iter().enumerate() {
        for (ki, (kname, _)) in kinds.iter().enumerate() {
            let mut ratios = Vec::with_capacity(seqs.len());
            for ((_, name, _), (den, nums, _)) in seqs.iter().zip(&rows) {
                let num = nums[ki][qi];
                let ratio = if den[qi] == 0.0 { 0.0 } else { num / den[qi] };
                ratios.push(ratio);
                report
                    .witnesses
                    .push(Witness::new(format!("{kname} q={q} {name}"), num, den[qi]));
            }
            let sup = ratios.iter().copied().fold(0.0, f64::max);
            let tr = fit::last_decade_trend(&scales, &ratios);
            pass &= sup.is_finite() && tr.slope < t.slope_tol;
            worst = worst.max(sup);
            worst_slope = worst_slope.max(tr.slope);
            report.note(format!("{kname} q={q}: sup {sup:.6}, slope {:.3e}", tr.slope));
        }
    }
    let gap = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    pass &= gap <= t.abs_tol;
    report.note(format!("q=1 branch gap {gap:.3e}"));
    let small = qs.iter().any(|q| *q <= 1.0);
    let large = qs.iter().any(|q| *q > 1.0);
    if !(small && large) {
        report.note("q sweep covers only one of the q <= 1 / q > 1 regimes");
    }
    report.pass = pass && !report.witnesses.is_empty();
    report.empirical_constant = Some(worst);
    report.fitted_exponent = Some(worst_slope);
    Ok(report)
}
