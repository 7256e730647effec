//! Central BMO norms (classical, variable exponent, and the two equivalent
//! variants) and homogeneous Herz norms.
//!
//! Suprema over radii are taken over a finite grid of origin-centred balls;
//! every ball is computed independently of the rest of the grid, so
//! extending a grid can only add entries to the breakdown.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ResultExt};
use crate::exec;
use crate::exponent::Exponent;
use crate::fit::{self, Trend};
use crate::funcs::{mean_on_ball, AbsPow, Affine, Ball, Domain, DyadicRing, FarField, LrAggregate, RealFunction};
use crate::norms::{self, NormResult};
use crate::quadrature::{self, QuadOptions};
use crate::solve;

/// Accuracy of ball means and classical oscillation integrals.
pub const MEAN_TOL: f64 = 1e-12;
const MEAN_REL: f64 = 1e-13;

/// `2^k` for `k = -10..=20`.
pub fn default_radius_grid() -> Vec<f64> {
    (-10..=20).map(|k| 2f64.powi(k)).collect()
}

pub const DEFAULT_K_RANGE: (i32, i32) = (-20, 20);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceNormResult {
    /// Grid supremum (CBMO) or truncated `ℓ^q` sum (Herz).
    pub value: f64,
    /// Set when the breakdown grows at the grid edge (CBMO) or the value
    /// is infinite.
    pub divergent: bool,
    /// `(scale, contribution)`: radius for CBMO, ring index `k` for Herz.
    pub breakdown: Vec<(f64, f64)>,
    /// Log-log trend over the last decade of the grid (CBMO only).
    pub divergence_fit: Option<Trend>,
    /// `ℓ^q` norm of the certified majorants outside `k_range` (Herz only).
    pub tail_bound: Option<f64>,
    /// Accumulated numerical error of the entries.
    pub abs_error_bound: f64,
}

impl SpaceNormResult {
    fn from_sup(breakdown: Vec<(f64, f64)>, errors: &[f64]) -> Self {
        let value = breakdown.iter().map(|e| e.1).fold(0.0, f64::max);
        let (scales, vals): (Vec<f64>, Vec<f64>) = breakdown.iter().copied().unzip();
        let trend = fit::last_decade_trend(&scales, &vals);
        SpaceNormResult {
            value,
            divergent: !value.is_finite() || trend.verdict == fit::Verdict::Divergent,
            breakdown,
            divergence_fit: Some(trend),
            tail_bound: None,
            abs_error_bound: errors.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CenterRule {
    BallAverage,
    PerBall { centers: Vec<f64> },
    Constant { c: f64 },
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("radius grid is empty"));
    }
    if let Some(r) = grid.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::invalid(format!("radius {r} in grid must be positive and finite")));
    }
    Ok(())
}

fn ball_mean(f: &dyn RealFunction, ball: &Ball) -> Result<f64> {
    let (lo, hi) = f.range_on_ball(ball.radius);
    if lo == hi {
        return Ok(lo);
    }
    Ok(mean_on_ball(f, ball, MEAN_TOL)?.value)
}

/// `‖(f - c)χ_B‖_{p(·)} / ‖χ_B‖_{p(·)}` and its error bound.
fn oscillation_ratio(f: &dyn RealFunction, e: &Exponent, r: f64, c: f64, tol: f64) -> Result<(f64, f64)> {
    let domain = Domain::Ball { radius: r };
    let shifted = Affine::new(f, 1.0, -c);
    let osc = norms::luxemburg_norm(&shifted, e, &domain, tol)?;
    let chi = norms::chi_norm(&domain, e)?;
    Ok(ratio(osc, chi))
}

fn ratio(num: NormResult, den: NormResult) -> (f64, f64) {
    let v = num.value / den.value;
    let err = num.abs_error_bound / den.value + v * den.abs_error_bound / den.value;
    (v, err)
}

fn sup_over_grid(
    grid: &[f64],
    per_ball: impl Fn(usize, f64) -> Result<(f64, f64)> + Sync + Send,
) -> Result<SpaceNormResult> {
    check_grid(grid)?;
    let idx: Vec<usize> = (0..grid.len()).collect();
    let rows = exec::try_map(&idx, |&i| per_ball(i, grid[i]).context_with(|| format!("ball B(0,{})", grid[i])))?;
    let breakdown = grid.iter().zip(&rows).map(|(r, v)| (*r, v.0)).collect();
    let errors: Vec<f64> = rows.iter().map(|v| v.1).collect();
    Ok(SpaceNormResult::from_sup(breakdown, &errors))
}

/// `sup_r ‖(f - f_B)χ_B‖_{p(·)} / ‖χ_B‖_{p(·)}` over `B = B(0, r)`, `r` in the grid.
pub fn cbmo_var_norm(f: &dyn RealFunction, e: &Exponent, radius_grid: &[f64], tol: f64) -> Result<SpaceNormResult> {
    let dim = e.dimension();
    sup_over_grid(radius_grid, |_, r| {
        let mean = ball_mean(f, &Ball::new(r, dim)?)?;
        oscillation_ratio(f, e, r, mean, tol)
    })
}

/// `sup_r (|B|^{-1} ∫_B |f - f_B|^p)^{1/p}`, `1 <= p < ∞`, in dimension `dim`.
pub fn cbmo_classical_norm(f: &dyn RealFunction, p: f64, dim: usize, radius_grid: &[f64], tol: f64) -> Result<SpaceNormResult> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("classical CBMO needs 1 <= p < ∞, got {p}")));
    }
    sup_over_grid(radius_grid, |_, r| {
        let ball = Ball::new(r, dim)?;
        let mean = ball_mean(f, &ball)?;
        let dev = AbsPow::new(Affine::new(f, 1.0, -mean), p);
        let opts = QuadOptions::new(tol * ball.volume()).with_rel(MEAN_REL);
        let q = quadrature::integrate_domain(&dev, &ball.domain(), dim, &opts)?;
        let avg = (q.value / ball.volume()).max(0.0);
        let v = avg.powf(1.0 / p);
        // d(a^{1/p}) = a^{1/p-1}/p da
        let err = if avg > 0.0 {
            v / (p * avg) * q.abs_error_bound / ball.volume()
        } else {
            (q.abs_error_bound / ball.volume()).powf(1.0 / p)
        };
        Ok((v, err))
    })
}

/// `sup_r ‖(f - c_B)χ_B‖ / ‖χ_B‖` with centres from `rule`.
pub fn cbmo_star_norm(f: &dyn RealFunction, e: &Exponent, rule: &CenterRule, radius_grid: &[f64], tol: f64) -> Result<SpaceNormResult> {
    if let CenterRule::PerBall { centers } = rule {
        if centers.len() != radius_grid.len() {
            return Err(Error::invalid(format!(
                "{} centres for {} balls",
                centers.len(),
                radius_grid.len()
            )));
        }
    }
    let dim = e.dimension();
    sup_over_grid(radius_grid, |i, r| {
        let c = match rule {
            CenterRule::BallAverage => ball_mean(f, &Ball::new(r, dim)?)?,
            CenterRule::PerBall { centers } => centers[i],
            CenterRule::Constant { c } => *c,
        };
        oscillation_ratio(f, e, r, c, tol)
    })
}

/// Value range of `f` on `B(0, r)` used to bracket the optimal centre.
/// Infinite enclosures are replaced by sampled extremes, which are not
/// certified and so may be widened by the caller.
fn centre_bracket(f: &dyn RealFunction, r: f64) -> Result<(f64, f64, bool)> {
    let (lo, hi) = f.range_on_ball(r);
    if lo.is_finite() && hi.is_finite() {
        return Ok((lo, hi, true));
    }
    let mut lo_s = f64::INFINITY;
    let mut hi_s = f64::NEG_INFINITY;
    for i in 0..=2000 {
        let x = -r + 2.0 * r * (i as f64 + 0.5) / 2001.0;
        let v = f.value(x)?;
        if v.is_finite() {
            lo_s = lo_s.min(v);
            hi_s = hi_s.max(v);
        }
    }
    Ok((if lo.is_finite() { lo } else { lo_s }, if hi.is_finite() { hi } else { hi_s }, false))
}

/// Relative bracket width at which the centre search stops.
pub const CENTRE_REL: f64 = 1e-8;

/// `sup_r inf_c ‖(f - c)χ_B‖ / ‖χ_B‖`; the inner minimum is a golden-section
/// search over the range of `f` on the ball (the map is convex in `c`).
/// Also returns the minimizing centres.
pub fn cbmo_inf_norm_with_centres(f: &dyn RealFunction, e: &Exponent, radius_grid: &[f64], tol: f64) -> Result<(SpaceNormResult, Vec<f64>)> {
    check_grid(radius_grid)?;
    let rows = exec::try_map(radius_grid, |&r| -> Result<(f64, f64, f64)> {
        let (mut lo, mut hi, certified) = centre_bracket(f, r)?;
        if !(hi > lo) {
            return Ok((0.0, 0.0, lo));
        }
        let eval = |c: f64| oscillation_ratio(f, e, r, c, tol).map(|v| v.0);
        let mut m = solve::golden_section(eval, lo, hi, CENTRE_REL)?;
        if !certified {
            for _ in 0..8 {
                let w = hi - lo;
                let near_lo = m.x - lo < 1e-3 * w;
                let near_hi = hi - m.x < 1e-3 * w;
                if !near_lo && !near_hi {
                    break;
                }
                if near_lo {
                    lo -= w;
                }
                if near_hi {
                    hi += w;
                }
                m = solve::golden_section(eval, lo, hi, CENTRE_REL)?;
            }
        }
        let (v, err) = oscillation_ratio(f, e, r, m.x, tol)?;
        // the ball mean is itself a candidate centre
        let mean = ball_mean(f, &Ball::new(r, e.dimension())?)?;
        let (vm, em) = oscillation_ratio(f, e, r, mean, tol)?;
        Ok(if vm < v { (vm, em, mean) } else { (v, err, m.x) })
    })
    .context_with(|| "inf-centre oscillation".to_string())?;
    let breakdown: Vec<(f64, f64)> = radius_grid.iter().zip(&rows).map(|(r, v)| (*r, v.0)).collect();
    let errors: Vec<f64> = rows.iter().map(|v| v.1).collect();
    let centres = rows.iter().map(|v| v.2).collect();
    Ok((SpaceNormResult::from_sup(breakdown, &errors), centres))
}

pub fn cbmo_inf_norm(f: &dyn RealFunction, e: &Exponent, radius_grid: &[f64], tol: f64) -> Result<SpaceNormResult> {
    Ok(cbmo_inf_norm_with_centres(f, e, radius_grid, tol)?.0)
}

/// `(Σ a_k^q)^{1/q}` for `0 < q <= 1`, summed directly.
pub fn lq_sum_small(values: &[f64], q: f64) -> f64 {
    values.iter().map(|a| a.powf(q)).sum::<f64>().powf(1.0 / q)
}

/// `(Σ a_k^q)^{1/q}` for `q >= 1`, scaled by the largest entry.
pub fn lq_sum_large(values: &[f64], q: f64) -> f64 {
    let m = values.iter().copied().fold(0.0, f64::max);
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * values.iter().map(|a| (a / m).powf(q)).sum::<f64>().powf(1.0 / q)
}

/// `ℓ^q` quasi-norm, dispatching on the two regimes.
pub fn lq_sum(values: &[f64], q: f64) -> f64 {
    if q <= 1.0 {
        lq_sum_small(values, q)
    } else {
        lq_sum_large(values, q)
    }
}

/// Upper bound for the full norm given the truncated sum `s` and the tail
/// majorant `t`: `(s^q + t^q)^{1/q}` for `q <= 1` (q-subadditivity) and the
/// triangle inequality `s + t` for `q > 1`.
pub fn combine_tail(s: f64, t: f64, q: f64) -> f64 {
    if q <= 1.0 {
        (s.powf(q) + t.powf(q)).powf(1.0 / q)
    } else {
        s + t
    }
}

const TAIL_LIMIT: i32 = 1000;

/// Certified majorant `(Σ_{tail} (2^{αk} sup_{C_k}|f| ‖χ_k‖)^q)^{1/q}`
/// over the rings outside `k_range`.
fn herz_tail(f: &dyn RealFunction, e: &Exponent, alpha: f64, q: f64, k_range: (i32, i32), scale: f64) -> Result<f64> {
    let dim = e.dimension();
    let (pm, pp) = (e.p_minus(), e.p_plus());
    let term = |k: i32| -> f64 {
        let ring = DyadicRing::new(k, dim);
        let sup = f.sup_abs_between(ring.inner(), ring.outer());
        if sup == 0.0 {
            return 0.0;
        }
        let vol = ring.volume();
        let chi = vol.powf(1.0 / pm).max(vol.powf(1.0 / pp));
        2f64.powf(alpha * k as f64) * sup * chi
    };
    let uncontrolled = |side: &str, k: i32| {
        Error::NonConvergence {
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
            subdivisions: 0,
        }
        .context(format!("Herz {side} tail is not controlled near ring {k}"))
    };
    // ring majorants near 0 scale like 2^{k(α + a + n/p_+)} for |f| ~ |x|^a
    let rate = alpha + f.origin_power().unwrap_or(0.0) + dim as f64 / pp;
    if f.inner_radius() == 0.0 && k_range.0 > -TAIL_LIMIT && rate <= 0.0 {
        return Err(uncontrolled("lower", k_range.0 - 1).context(format!(
            "ring majorants do not decay towards the origin (rate α + a + n/p_+ = {rate})"
        )));
    }
    let mut total = 0.0;
    let negligible = |t: f64, acc: f64| t.powf(q) <= 1e-18 * (acc + scale.powf(q)).max(f64::MIN_POSITIVE);
    for (side, ks) in [
        ("upper", (k_range.1 + 1..=TAIL_LIMIT).collect::<Vec<i32>>()),
        ("lower", (-TAIL_LIMIT..k_range.0).rev().collect()),
    ] {
        let limit_r = if side == "upper" {
            f.support_radius()
        } else {
            f.inner_radius()
        };
        let mut quiet = 0;
        let mut done = false;
        let mut last = 0.0;
        for k in ks {
            let ring = DyadicRing::new(k, dim);
            if (side == "upper" && ring.inner() >= limit_r) || (side == "lower" && ring.outer() <= limit_r) {
                done = true;
                break;
            }
            let t = term(k);
            if !t.is_finite() {
                return Err(uncontrolled(side, k));
            }
            last = t;
            let tq = t.powf(q);
            total += tq;
            quiet = if negligible(t, total) { quiet + 1 } else { 0 };
            // geometric decay: 40 consecutive negligible terms end the sum
            if quiet >= 40 {
                done = true;
                break;
            }
        }
        if !done {
            // past the ring limit the majorants are exactly geometric when the
            // local power law is known, so close the sum analytically
            let ratio = match (side, f.far_field()) {
                ("lower", _) if rate > 0.0 => Some(2f64.powf(-rate)),
                ("upper", FarField::Power { exponent, .. }) => {
                    let up = alpha + exponent + dim as f64 / pm;
                    (up < 0.0).then(|| 2f64.powf(up))
                }
                _ => None,
            };
            match ratio {
                Some(r) => {
                    let rq = r.powf(q);
                    total += last.powf(q) * rq / (1.0 - rq);
                }
                None => return Err(uncontrolled(side, if side == "upper" { TAIL_LIMIT } else { -TAIL_LIMIT })),
            }
        }
    }
    Ok(total.powf(1.0 / q))
}

/// `‖f‖_{K̇^{α,q}_{p(·)}}` truncated to `k_range` (inclusive), with the
/// tail majorant reported separately.
pub fn herz_norm(f: &dyn RealFunction, e: &Exponent, alpha: f64, q: f64, k_range: (i32, i32), tol: f64) -> Result<SpaceNormResult> {
    Ok(herz_norm_impl(f, e, alpha, &[q], k_range, tol, lq_sum)?.remove(0))
}

/// Same as [`herz_norm`] but forcing one of the two `ℓ^q` summation paths;
/// used to check that they agree at `q = 1`.
pub fn herz_norm_branch(f: &dyn RealFunction, e: &Exponent, alpha: f64, q: f64, k_range: (i32, i32), tol: f64, small_branch: bool) -> Result<SpaceNormResult> {
    let sum = if small_branch { lq_sum_small } else { lq_sum_large };
    Ok(herz_norm_impl(f, e, alpha, &[q], k_range, tol, sum)?.remove(0))
}

fn herz_norm_impl(
    f: &dyn RealFunction,
    e: &Exponent,
    alpha: f64,
    qs: &[f64],
    k_range: (i32, i32),
    tol: f64,
    sum: fn(&[f64], f64) -> f64,
) -> Result<Vec<SpaceNormResult>> {
    if let Some(q) = qs.iter().find(|q| !(**q > 0.0 && q.is_finite())) {
        return Err(Error::invalid(format!("Herz index q = {q} must lie in (0, ∞)")));
    }
    if !alpha.is_finite() {
        return Err(Error::invalid("Herz weight α must be finite"));
    }
    let (k0, k1) = k_range;
    if k0 > k1 || k0 < -TAIL_LIMIT || k1 > TAIL_LIMIT {
        return Err(Error::invalid(format!("ring range {k0}..={k1} is malformed")));
    }
    let ks: Vec<i32> = (k0..=k1).collect();
    let rows = exec::try_map(&ks, |&k| -> Result<(f64, f64)> {
        let w = 2f64.powf(alpha * k as f64);
        let n = norms::luxemburg_norm(f, e, &Domain::Ring { k }, tol).context_with(|| format!("ring C_{k}"))?;
        Ok((w * n.value, w * n.abs_error_bound))
    })?;
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let breakdown: Vec<(f64, f64)> = ks.iter().map(|k| *k as f64).zip(values.iter().copied()).collect();
    let abs_error_bound = rows.iter().map(|r| r.1).sum();
    qs.iter()
        .map(|&q| {
            let value = sum(&values, q);
            let tail = herz_tail(f, e, alpha, q, k_range, value)?;
            Ok(SpaceNormResult {
                value,
                divergent: !value.is_finite(),
                breakdown: breakdown.clone(),
                divergence_fit: None,
                tail_bound: Some(tail),
                abs_error_bound,
            })
        })
        .collect()
}

/// [`herz_norm`] for several `q` at once; the ring norms are shared.
pub fn herz_norm_multi(f: &dyn RealFunction, e: &Exponent, alpha: f64, qs: &[f64], k_range: (i32, i32), tol: f64) -> Result<Vec<SpaceNormResult>> {
    herz_norm_impl(f, e, alpha, qs, k_range, tol, lq_sum)
}

/// Herz norm of the pointwise aggregate `(Σ_j |f_j|^r)^{1/r}`.
pub fn herz_norm_vector(fs: &[&dyn RealFunction], r: f64, e: &Exponent, alpha: f64, q: f64, k_range: (i32, i32), tol: f64) -> Result<SpaceNormResult> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::invalid(format!("ℓ^r index r = {r} must lie in (1, ∞)")));
    }
    if fs.is_empty() {
        return Err(Error::invalid("empty function list"));
    }
    let agg = LrAggregate::new(fs.to_vec(), r);
    herz_norm(&agg, e, alpha, q, k_range, tol)
}
