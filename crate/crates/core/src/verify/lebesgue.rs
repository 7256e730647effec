//! Checkers for the `L^{p(·)}` statements: associate-norm duality, the
//! single-family averaging bound, and the characteristic-function ratios.

use rand::Rng;

use super::{bank_rng, Named};
use crate::config::StatementTol;
use crate::error::{Error, Result};
use crate::exec;
use crate::exponent::{Exponent, DEFAULT_P_MARGIN};
use crate::fit;
use crate::funcs::{Ball, Domain, FarField, Func, RealFunction};
use crate::norms::{self, Extremizer};
use crate::quadrature;
use crate::report::{CheckReport, Witness};

fn require_p(e: &Exponent) -> Result<()> {
    if e.is_in_p_with_margin(DEFAULT_P_MARGIN) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "exponent with p_- = {}, p_+ = {} is not in P",
            e.p_minus(),
            e.p_plus()
        )))
    }
}

/// `sup_g |∫ f g| / ‖g‖_{p'(·)}` over the bank plus the Hölder extremizer
/// of each `f`, against the upper bound `r_p ‖f‖_{p(·)}`.
pub fn check_duality(e: &Exponent, bank: &[Named], t: &StatementTol, norm_tol: f64) -> Result<CheckReport> {
    require_p(e)?;
    let conj = e.conjugate()?;
    let rp = e.duality_constant();
    let dim = e.dimension();
    let mut report = CheckReport::new("eq1.1");

    // dual norms of the plain bank members, shared by every f
    let dual_norms = exec::map(bank, |(_, g)| norms::luxemburg_norm(g, &conj, &Domain::Whole, norm_tol).map(|n| n.value));

    let rows = exec::try_map(bank, |(name, f)| -> Result<Option<(Witness, f64)>> {
        let nf = match norms::luxemburg_norm(f, e, &Domain::Whole, norm_tol) {
            Ok(n) => n.value,
            Err(err) if matches!(err.root(), Error::NotInSpace(_)) => return Ok(None),
            Err(err) => return Err(err),
        };
        if nf == 0.0 {
            return Ok(None);
        }
        let ext = Extremizer::new(f, e, nf);
        let mut lower = 0.0f64;
        let mut candidates: Vec<(&dyn RealFunction, f64)> = Vec::new();
        let n_ext = norms::luxemburg_norm(&ext, &conj, &Domain::Whole, norm_tol)?.value;
        candidates.push((&ext, n_ext));
        for ((_, g), ng) in bank.iter().zip(&dual_norms) {
            if let Ok(ng) = ng {
                candidates.push((g, *ng));
            }
        }
        for (g, ng) in candidates {
            if ng == 0.0 {
                continue;
            }
            let pair = norms::pairing(f, g, dim, norm_tol * ng.max(1.0))?;
            lower = lower.max(pair.value.abs() / ng);
        }
        Ok(Some((Witness::new(name.clone(), lower, rp * nf), lower / nf)))
    })?;

    let mut pass = true;
    let mut worst = 0.0f64;
    let mut best = f64::INFINITY;
    for ((name, _), row) in bank.iter().zip(rows) {
        match row {
            None => report.note(format!("{name}: zero or outside the space, ratio undefined, skipped")),
            Some((w, ratio)) => {
                pass &= w.lhs <= w.rhs + t.abs_tol;
                pass &= ratio >= 1.0 - t.rel_tol && ratio <= rp + t.rel_tol;
                worst = worst.max(ratio);
                best = best.min(ratio);
                report.witnesses.push(w);
            }
        }
    }
    report.pass = pass && !report.witnesses.is_empty();
    report.empirical_constant = Some(worst);
    report.note(format!(
        "lower = best normalized pairing (extremizer included), upper = r_p‖f‖ with r_p = {rp:.6}; ratio range [{best:.9}, {worst:.9}]"
    ));
    Ok(report)
}

/// A finite family of disjoint intervals with weights and a function.
#[derive(Clone, Debug)]
pub struct CubeFamily {
    pub name: String,
    pub cubes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    pub f: Func,
}

/// Fixed families (identity, a half-filled cube, zero weights) followed by
/// randomized ones drawn from `seed`.
pub fn diening_families(seed: u64) -> Vec<CubeFamily> {
    let mut fams = vec![
        CubeFamily {
            name: "f≡1".into(),
            cubes: vec![(0.0, 1.0), (1.0, 3.0), (-2.0, -0.5)],
            weights: vec![1.0, 2.0, 0.5],
            f: Func::Constant { c: 1.0 },
        },
        CubeFamily {
            name: "χ[0,1/2] on [0,1]".into(),
            cubes: vec![(0.0, 1.0)],
            weights: vec![1.0],
            f: Func::chi_interval(0.0, 0.5),
        },
        CubeFamily {
            name: "zero weights".into(),
            cubes: vec![(0.0, 1.0), (2.0, 4.0)],
            weights: vec![0.0, 0.0],
            f: Func::Sign,
        },
    ];
    let mut rng = bank_rng(seed, "lemma2.2");
    for i in 0..6 {
        let count = rng.gen_range(2..=5);
        let mut a = rng.gen_range(-4.0..0.0);
        let mut cubes = Vec::new();
        for _ in 0..count {
            let len = rng.gen_range(0.2..3.0);
            cubes.push((a, a + len));
            a += len + rng.gen_range(0.0..1.0);
        }
        let weights = (0..count).map(|_| rng.gen_range(0.0..2.0)).collect();
        let mut terms = vec![(0.2, Func::Constant { c: 1.0 })];
        for _ in 0..3 {
            let lo = rng.gen_range(-4.0..6.0);
            let hi = lo + rng.gen_range(0.1..2.0);
            terms.push((rng.gen_range(0.1..3.0), Func::chi_interval(lo, hi)));
        }
        terms.push((rng.gen_range(0.0..1.0), Func::power(-0.25, Some(1.0))));
        fams.push(CubeFamily {
            name: format!("random#{i}"),
            cubes,
            weights,
            f: Func::combination(terms),
        });
    }
    fams
}

/// `Σ_Q t_Q |f/f_Q|^δ χ_Q` (or `Σ_Q t_Q χ_Q` when `averages` is `None`).
struct CubeSum<'a> {
    fam: &'a CubeFamily,
    averages: Option<(&'a [f64], f64)>,
}

impl RealFunction for CubeSum<'_> {
    fn value(&self, x: f64) -> Result<f64> {
        for (i, &(a, b)) in self.fam.cubes.iter().enumerate() {
            if a <= x && x < b {
                let t = self.fam.weights[i];
                return match self.averages {
                    None => Ok(t),
                    Some((avg, delta)) => Ok(t * (self.fam.f.value(x)? / avg[i]).abs().powf(delta)),
                };
            }
        }
        Ok(0.0)
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.fam.cubes.iter().flat_map(|&(a, b)| [a, b]).collect();
        if self.averages.is_some() {
            v.extend(self.fam.f.breakpoints());
        }
        v
    }
    fn support_radius(&self) -> f64 {
        self.fam.cubes.iter().map(|&(a, b)| a.abs().max(b.abs())).fold(0.0, f64::max)
    }
    fn far_field(&self) -> FarField {
        FarField::Compact {
            radius: self.support_radius(),
        }
    }
    fn origin_power(&self) -> Option<f64> {
        let (_, delta) = self.averages?;
        self.fam.f.origin_power().map(|a| a * delta)
    }
}

/// For each `δ`, the worst ratio `‖Σ t_Q |f/f_Q|^δ χ_Q‖ / ‖Σ t_Q χ_Q‖` over
/// the families; passes if some `δ` keeps it below `cap`.
pub fn check_diening_single_family(
    e: &Exponent,
    families: &[CubeFamily],
    delta_grid: &[f64],
    cap: f64,
    t: &StatementTol,
    norm_tol: f64,
) -> Result<CheckReport> {
    require_p(e)?;
    if e.dimension() != 1 {
        return Err(Error::invalid("single-family check is one-dimensional"));
    }
    if let Some(d) = delta_grid.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
        return Err(Error::invalid(format!("δ = {d} must lie in (0, 1)")));
    }
    let mut report = CheckReport::new("lemma2.2");
    let mut worst = vec![0.0f64; delta_grid.len()];
    for fam in families {
        if fam.cubes.len() != fam.weights.len() || fam.weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::invalid(format!("family {} has malformed cubes or weights", fam.name)));
        }
        let avgs = exec::try_map(&fam.cubes, |&(a, b)| {
            Ok::<_, Error>(quadrature::integrate_interval(|x: f64| fam.f.eval(x), a, b, &fam.f.breakpoints(), 1e-13)?.value / (b - a))
        })?;
        if let Some(i) = avgs.iter().position(|v| v.abs() < 1e-12) {
            report.note(format!("{}: f_Q = 0 on cube {:?}, skipped", fam.name, fam.cubes[i]));
            continue;
        }
        let rhs = norms::luxemburg_norm(&CubeSum { fam, averages: None }, e, &Domain::Whole, norm_tol)?.value;
        let lhs = exec::try_map(delta_grid, |&d| {
            norms::luxemburg_norm(&CubeSum { fam, averages: Some((&avgs, d)) }, e, &Domain::Whole, norm_tol).map(|n| n.value)
        })?;
        for (i, (&d, &l)) in delta_grid.iter().zip(&lhs).enumerate() {
            let ratio = if rhs == 0.0 { if l == 0.0 { 0.0 } else { f64::INFINITY } } else { l / rhs };
            worst[i] = worst[i].max(ratio);
            report.witnesses.push(Witness::new(format!("{} δ={d}", fam.name), l, rhs));
        }
    }
    let (best_i, best) = worst
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::INFINITY));
    report.pass = best <= cap + t.abs_tol && !report.witnesses.is_empty();
    report.empirical_constant = Some(best);
    report.fitted_exponent = delta_grid.get(best_i).copied();
    let per: Vec<String> = delta_grid.iter().zip(&worst).map(|(d, w)| format!("δ={d}:{w:.6}")).collect();
    report.note(format!(
        "finite explicit 1-D families only; worst ratio per δ [{}]; cap {cap}",
        per.join(" ")
    ));
    Ok(report)
}

/// `‖χ_B‖_{p(·)} ‖χ_B‖_{p'(·)} / |B|` over origin balls.
pub fn check_chi_product(e: &Exponent, radius_grid: &[f64], t: &StatementTol) -> Result<CheckReport> {
    require_p(e)?;
    if radius_grid.is_empty() {
        return Err(Error::invalid("radius grid is empty"));
    }
    let conj = e.conjugate()?;
    let dim = e.dimension();
    let vals = exec::try_map(radius_grid, |&r| -> Result<f64> {
        let d = Domain::Ball { radius: r };
        let a = norms::chi_norm(&d, e)?.value;
        let b = norms::chi_norm(&d, &conj)?.value;
        Ok(a * b / Ball::new(r, dim)?.volume())
    })?;
    let constant = e.as_constant().is_some();
    let mut report = CheckReport::new("lemma2.3");
    let mut exact = true;
    for (&r, &v) in radius_grid.iter().zip(&vals) {
        exact &= (v - 1.0).abs() <= t.abs_tol;
        report
            .witnesses
            .push(Witness::new(format!("B(0,{r})"), v, if constant { 1.0 } else { f64::NAN }));
    }
    let sup = vals.iter().copied().fold(0.0, f64::max);
    let upper = fit::last_decade_trend(radius_grid, &vals);
    let inv: Vec<f64> = radius_grid.iter().map(|r| 1.0 / r).collect();
    let lower = fit::last_decade_trend(&inv, &vals);
    report.pass = sup.is_finite() && upper.slope < t.slope_tol && lower.slope < t.slope_tol && (!constant || exact);
    report.empirical_constant = Some(sup);
    report.fitted_exponent = Some(upper.slope);
    report.note(format!(
        "sup {sup:.9}; edge slopes large-r {:.4}, small-r {:.4}{}",
        upper.slope,
        lower.slope,
        if constant { "; constant exponent, every ratio must equal 1" } else { "" }
    ));
    Ok(report)
}

/// `(B, S)` pairs with `S ⊂ B`: two fixed ones, then random balls, annuli
/// and (in 1-D) intervals.
pub fn subset_pairs(dim: usize, count: usize, seed: u64) -> Vec<(Domain, Domain)> {
    let mut pairs = vec![
        (Domain::Ball { radius: 8.0 }, Domain::Ball { radius: 0.125 }),
        (Domain::Ball { radius: 2.0 }, Domain::Ball { radius: 2.0 }),
    ];
    let mut rng = bank_rng(seed, "lemma2.4");
    while pairs.len() < count {
        let rb = 2f64.powf(rng.gen_range(-5.0..10.0));
        let kinds = if dim == 1 { 3 } else { 2 };
        let s = match rng.gen_range(0..kinds) {
            0 => Domain::Ball {
                radius: rb * rng.gen_range(0.01..1.0),
            },
            1 => {
                let lo = rng.gen_range(0.0..0.9);
                Domain::Annulus {
                    inner: rb * lo,
                    outer: rb * rng.gen_range(lo + 0.05..1.0),
                }
            }
            _ => {
                let a = rng.gen_range(-1.0..0.9);
                Domain::Interval {
                    a: rb * a,
                    b: rb * rng.gen_range(a + 0.05..1.0),
                }
            }
        };
        pairs.push((Domain::Ball { radius: rb }, s));
    }
    pairs.truncate(count.max(2));
    pairs
}

pub struct SubsetReports {
    pub lemma2_4: CheckReport,
    pub lemma2_5: CheckReport,
}

fn describe(d: &Domain) -> String {
    match *d {
        Domain::Ball { radius } => format!("B(0,{radius:.6})"),
        Domain::Annulus { inner, outer } => format!("A({inner:.6},{outer:.6})"),
        Domain::Interval { a, b } => format!("[{a:.6},{b:.6}]"),
        Domain::Ring { k } => format!("C_{k}"),
        Domain::Whole => "R^n".into(),
    }
}

/// The three characteristic-function ratio bounds: linear and power-`δ`
/// measure comparisons (one report) and the `1/p0` comparison (the other).
pub fn check_subset_ratios(
    e: &Exponent,
    pairs: &[(Domain, Domain)],
    p0_grid: &[f64],
    t4: &StatementTol,
    t5: &StatementTol,
) -> Result<SubsetReports> {
    require_p(e)?;
    let dim = e.dimension();
    let rows = exec::try_map(pairs, |(b, s)| -> Result<(f64, f64, f64, f64)> {
        b.validate(dim)?;
        s.validate(dim)?;
        let nb = norms::chi_norm(b, e)?.value;
        let ns = norms::chi_norm(s, e)?.value;
        Ok((nb, ns, b.measure(dim), s.measure(dim)))
    })?;
    let descs: Vec<String> = pairs.iter().map(|(b, s)| format!("{} ⊃ {}", describe(b), describe(s))).collect();

    // linear bound and fitted δ
    let mut r4 = CheckReport::new("lemma2.4");
    let c23 = rows.iter().map(|(nb, ns, mb, ms)| (nb / ns) / (mb / ms)).fold(0.0, f64::max);
    let (lx, ly): (Vec<f64>, Vec<f64>) = rows.iter().map(|(nb, ns, mb, ms)| ((ms / mb).ln(), (ns / nb).ln())).unzip();
    let delta = fit::slope_through_origin(&lx, &ly).unwrap_or(f64::NAN);
    let mut c24 = 0.0f64;
    for (d, (nb, ns, mb, ms)) in descs.iter().zip(&rows) {
        let rhs = (ms / mb).powf(delta);
        c24 = c24.max((ns / nb) / rhs);
        r4.witnesses.push(Witness::new(d.clone(), ns / nb, rhs));
    }
    r4.pass = c23.is_finite() && c24.is_finite() && delta > 0.0 && delta <= 1.0 + t4.rel_tol;
    r4.empirical_constant = Some(c24);
    r4.fitted_exponent = Some(delta);
    r4.note(format!("linear-measure constant {c23:.9}; δ fitted through the origin in log-log"));

    // 1/p0 bound
    let mut r5 = CheckReport::new("lemma2.5");
    let constant = e.as_constant();
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut per = Vec::new();
    for &p0 in p0_grid {
        let admissible = match constant {
            Some(p) => p0 > 1.0 && p0 <= p,
            None => p0 > 1.0 && p0 < e.p_minus(),
        };
        if !admissible {
            r5.note(format!("p0 = {p0} outside (1, p_-), skipped"));
            continue;
        }
        let mut c = 0.0f64;
        for (d, (nb, ns, mb, ms)) in descs.iter().zip(&rows) {
            let rhs = (mb / ms).powf(1.0 / p0);
            c = c.max((nb / ns) / rhs);
            r5.witnesses.push(Witness::new(format!("{d} p0={p0}"), nb / ns, rhs));
        }
        pass &= c.is_finite();
        if constant.is_some() {
            pass &= c <= 1.0 + t5.rel_tol;
        }
        worst = worst.max(c);
        per.push(format!("p0={p0}:{c:.9}"));
    }
    r5.pass = pass && !r5.witnesses.is_empty();
    r5.empirical_constant = Some(worst);
    r5.note(format!("constants per p0 [{}]", per.join(" ")));
    Ok(SubsetReports {
        lemma2_4: r4,
        lemma2_5: r5,
    })
}
