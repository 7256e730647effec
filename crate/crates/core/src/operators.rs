//! Hardy operator, its dual, their commutators with a symbol `b`, and a
//! grid-approximated Hardy–Littlewood maximal function.
//!
//! Points are line coordinates for `n = 1` and radii for `n >= 2`.
//! Commutators are integrated in the form `∫ (b(x) - b(y)) f(y) dy` rather
//! than as `b Hf - H(bf)`, which avoids cancellation when `b` is large.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::funcs::{unit_ball_volume, Domain, FarField, Parity, RealFunction};
use crate::quadrature::{self, QuadOptions, QuadResult};

/// Default absolute tolerance for one operator value.
pub const DEFAULT_OP_TOL: f64 = 1e-12;
/// Relative accuracy demanded of the inner integrals.
pub const INNER_REL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSample {
    pub x: f64,
    pub value: f64,
    pub abs_error_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Hardy,
    DualHardy,
    CommutatorHardy,
    CommutatorDualHardy,
}

impl OperatorKind {
    pub fn needs_symbol(self) -> bool {
        matches!(self, OperatorKind::CommutatorHardy | OperatorKind::CommutatorDualHardy)
    }

    pub fn is_dual(self) -> bool {
        matches!(self, OperatorKind::DualHardy | OperatorKind::CommutatorDualHardy)
    }
}

fn opts(tol: f64) -> QuadOptions {
    QuadOptions::new(tol).with_rel(INNER_REL)
}

fn radius_of(x: f64) -> Result<f64> {
    if !x.is_finite() || x == 0.0 {
        return Err(Error::invalid(format!("operator evaluated at {x}; need a finite x != 0")));
    }
    Ok(x.abs())
}

fn mirrored(mut pts: Vec<f64>, dim: usize) -> Vec<f64> {
    let extra: Vec<f64> = pts.iter().map(|s| s.abs()).collect();
    pts.extend(extra.iter().map(|r| -r));
    pts.extend(extra);
    pts.push(0.0);
    if dim >= 2 {
        pts.retain(|s| *s >= 0.0);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `∫_{r0 <= |y| <= r1} g(y) dy`, split at `bps`, clipped to `|y| <= support`.
fn shell_integral<G>(g: &G, bps: &[f64], r0: f64, r1: f64, support: f64, dim: usize, tol: f64) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    if r0 >= r1.min(support) {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_bound: 0.0,
            subdivisions: 0,
        });
    }
    let pieces = quadrature::domain_pieces(&Domain::Annulus { inner: r0, outer: r1 }, dim, support, 0.0);
    let segments = quadrature::segments_for(&pieces, bps);
    quadrature::integrate_segments(g, segments, dim, &opts(tol))
}

fn symbol_breakpoints(b: Option<&dyn RealFunction>, f: &dyn RealFunction, dim: usize) -> Vec<f64> {
    let mut v = f.breakpoints();
    if let Some(b) = b {
        v.extend(b.breakpoints());
    }
    mirrored(v, dim)
}

fn check_tail(f: &dyn RealFunction, b: Option<&dyn RealFunction>) -> Result<()> {
    if f.support_radius().is_finite() {
        return Ok(());
    }
    let fa = match f.far_field() {
        FarField::Power { exponent, .. } => exponent,
        FarField::Compact { .. } => return Ok(()),
        FarField::Unknown => f64::INFINITY,
    };
    let ba = match b.map(|b| b.far_field()) {
        None | Some(FarField::Compact { .. }) => 0.0,
        Some(FarField::Power { exponent, .. }) => exponent.max(0.0),
        Some(FarField::Unknown) => f64::INFINITY,
    };
    // ∫_{|y|>r} |y|^{a-n} dy converges iff a < 0
    if fa + ba < 0.0 {
        Ok(())
    } else {
        Err(Error::NonConvergence {
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
            subdivisions: 0,
        }
        .context("dual Hardy tail is not certifiably small"))
    }
}

/// `Hf(x) = |x|^{-n} ∫_{|y| <= |x|} f(y) dy`.
pub fn hardy(f: &dyn RealFunction, x: f64, dim: usize, tol: f64) -> Result<OperatorSample> {
    let r = radius_of(x)?;
    let scale = r.powi(dim as i32);
    let bps = symbol_breakpoints(None, f, dim);
    let q = shell_integral(&|y| f.value(y), &bps, 0.0, r, f.support_radius(), dim, tol * scale)?;
    Ok(OperatorSample {
        x,
        value: q.value / scale,
        abs_error_bound: q.abs_error_bound / scale,
    })
}

/// `H*f(x) = ∫_{|y| > |x|} f(y) |y|^{-n} dy`.
pub fn dual_hardy(f: &dyn RealFunction, x: f64, dim: usize, tol: f64) -> Result<OperatorSample> {
    let r = radius_of(x)?;
    check_tail(f, None)?;
    let n = dim as i32;
    let bps = symbol_breakpoints(None, f, dim);
    let q = shell_integral(&|y| Ok(f.value(y)? / y.abs().powi(n)), &bps, r, f64::INFINITY, f.support_radius(), dim, tol)?;
    Ok(OperatorSample {
        x,
        value: q.value,
        abs_error_bound: q.abs_error_bound,
    })
}

/// `[b,H]f(x) = |x|^{-n} ∫_{|y| <= |x|} (b(x) - b(y)) f(y) dy`.
pub fn commutator_hardy(b: &dyn RealFunction, f: &dyn RealFunction, x: f64, dim: usize, tol: f64) -> Result<OperatorSample> {
    let r = radius_of(x)?;
    let bx = b.value(x)?;
    let scale = r.powi(dim as i32);
    let bps = symbol_breakpoints(Some(b), f, dim);
    let g = |y: f64| -> Result<f64> {
        let fy = f.value(y)?;
        if fy == 0.0 {
            return Ok(0.0);
        }
        Ok((bx - b.value(y)?) * fy)
    };
    let q = shell_integral(&g, &bps, 0.0, r, f.support_radius(), dim, tol * scale)?;
    Ok(OperatorSample {
        x,
        value: q.value / scale,
        abs_error_bound: q.abs_error_bound / scale,
    })
}

/// `[b,H*]f(x) = ∫_{|y| > |x|} (b(x) - b(y)) f(y) |y|^{-n} dy`.
pub fn commutator_dual_hardy(b: &dyn RealFunction, f: &dyn RealFunction, x: f64, dim: usize, tol: f64) -> Result<OperatorSample> {
    let r = radius_of(x)?;
    check_tail(f, Some(b))?;
    let bx = b.value(x)?;
    let n = dim as i32;
    let bps = symbol_breakpoints(Some(b), f, dim);
    let g = |y: f64| -> Result<f64> {
        let fy = f.value(y)?;
        if fy == 0.0 {
            return Ok(0.0);
        }
        Ok((bx - b.value(y)?) * fy / y.abs().powi(n))
    };
    let q = shell_integral(&g, &bps, r, f64::INFINITY, f.support_radius(), dim, tol)?;
    Ok(OperatorSample {
        x,
        value: q.value,
        abs_error_bound: q.abs_error_bound,
    })
}

/// Dispatch on [`OperatorKind`].
pub fn apply(kind: OperatorKind, b: Option<&dyn RealFunction>, f: &dyn RealFunction, x: f64, dim: usize, tol: f64) -> Result<OperatorSample> {
    let need = || Error::invalid(format!("{kind:?} needs a symbol b"));
    match kind {
        OperatorKind::Hardy => hardy(f, x, dim, tol),
        OperatorKind::DualHardy => dual_hardy(f, x, dim, tol),
        OperatorKind::CommutatorHardy => commutator_hardy(b.ok_or_else(need)?, f, x, dim, tol),
        OperatorKind::CommutatorDualHardy => commutator_dual_hardy(b.ok_or_else(need)?, f, x, dim, tol),
    }
}

/// Default radius grid of the maximal function: `2^{j/4}`, `j = -40..=40`.
pub fn default_maximal_grid() -> Vec<f64> {
    (-40..=40).map(|j| 2f64.powf(j as f64 / 4.0)).collect()
}

/// Ratio `r^{-n} ∫_{B(x,r)} |f|` / `|B(x,r)|^{-1} ∫_{B(x,r)} |f|`, i.e. `v_n`.
pub fn power_normalization_factor(dim: usize) -> f64 {
    unit_ball_volume(dim)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalSample {
    #[serde(flatten)]
    pub sample: OperatorSample,
    /// Radius attaining the grid maximum.
    pub radius: f64,
    /// Same supremum with the `r^{-n}` normalization.
    pub power_normalized: f64,
}

/// `sup_r |B(x,r)|^{-1} ∫_{B(x,r)} |f|` over `radius_grid` plus the radii at
/// which the ball meets a breakpoint of `f`. One-dimensional only: balls
/// not centred at the origin are not radial.
pub fn maximal(f: &dyn RealFunction, x: f64, radius_grid: &[f64], tol: f64) -> Result<MaximalSample> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("maximal function evaluated at {x}")));
    }
    let mut radii: Vec<f64> = radius_grid.iter().copied().filter(|r| *r > 0.0 && r.is_finite()).collect();
    radii.extend(f.breakpoints().into_iter().map(|s| (x - s).abs()).filter(|r| *r > 0.0));
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    if radii.is_empty() {
        return Err(Error::invalid("maximal function needs at least one positive radius"));
    }
    let bps = f.breakpoints();
    let support = f.support_radius();
    let avgs = exec::try_map(&radii, |&r| -> Result<(f64, f64)> {
        let (a, b) = ((x - r).max(-support), (x + r).min(support));
        let q = if a < b {
            let segments = quadrature::segments_for(&[(a, b)], &bps);
            quadrature::integrate_segments(&|y| Ok(f.value(y)?.abs()), segments, 1, &opts(tol * 2.0 * r))?
        } else {
            QuadResult {
                value: 0.0,
                abs_error_bound: 0.0,
                subdivisions: 0,
            }
        };
        Ok((q.value / (2.0 * r), q.abs_error_bound / (2.0 * r)))
    })?;
    let mut best = 0;
    for (i, a) in avgs.iter().enumerate() {
        if a.0 > avgs[best].0 {
            best = i;
        }
    }
    let (value, err) = avgs[best];
    Ok(MaximalSample {
        sample: OperatorSample {
            x,
            value,
            abs_error_bound: err,
        },
        radius: radii[best],
        power_normalized: value * power_normalization_factor(1),
    })
}

/// Lazy image `T f` of a catalog-style function, usable as an integrand.
///
/// Outside the support of `f` (and inside its inner radius) the operators
/// reduce to closed forms in a handful of precomputed moments, so the far
/// field costs no quadrature.
pub struct OperatorImage<'a> {
    kind: OperatorKind,
    b: Option<&'a dyn RealFunction>,
    f: &'a dyn RealFunction,
    dim: usize,
    tol: f64,
    support: f64,
    inner: f64,
    /// `∫ f` and `∫ b f` when `f` has compact support.
    total_f: f64,
    total_bf: f64,
    /// `∫ f |y|^{-n}` and `∫ b f |y|^{-n}` when `f` vanishes near 0.
    total_fk: f64,
    total_bfk: f64,
}

impl<'a> OperatorImage<'a> {
    pub fn new(kind: OperatorKind, b: Option<&'a dyn RealFunction>, f: &'a dyn RealFunction, dim: usize, tol: f64) -> Result<Self> {
        if kind.needs_symbol() && b.is_none() {
            return Err(Error::invalid(format!("{kind:?} needs a symbol b")));
        }
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if kind.is_dual() {
            check_tail(f, b)?;
        }
        let support = f.support_radius();
        let inner = f.inner_radius().min(support);
        let n = dim as i32;
        let bps = symbol_breakpoints(b, f, dim);
        let moment_tol = tol.min(1e-14);
        let bval = |y: f64| b.map_or(Ok(0.0), |b| b.value(y));
        let (mut total_f, mut total_bf, mut total_fk, mut total_bfk) = (0.0, 0.0, 0.0, 0.0);
        if support.is_finite() && !kind.is_dual() {
            total_f = shell_integral(&|y| f.value(y), &bps, 0.0, support, support, dim, moment_tol)?.value;
            if b.is_some() {
                total_bf = shell_integral(&|y| Ok(bval(y)? * f.value(y)?), &bps, 0.0, support, support, dim, moment_tol)?.value;
            }
        }
        if inner > 0.0 && kind.is_dual() {
            total_fk = shell_integral(&|y| Ok(f.value(y)? / y.abs().powi(n)), &bps, inner, f64::INFINITY, support, dim, moment_tol)?.value;
            if b.is_some() {
                total_bfk = shell_integral(
                    &|y| Ok(bval(y)? * f.value(y)? / y.abs().powi(n)),
                    &bps,
                    inner,
                    f64::INFINITY,
                    support,
                    dim,
                    moment_tol,
                )?
                .value;
            }
        }
        Ok(OperatorImage {
            kind,
            b,
            f,
            dim,
            tol,
            support,
            inner,
            total_f,
            total_bf,
            total_fk,
            total_bfk,
        })
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn sample(&self, x: f64) -> Result<OperatorSample> {
        let r = radius_of(x)?;
        let closed = |value: f64| {
            Ok(OperatorSample {
                x,
                value,
                abs_error_bound: 0.0,
            })
        };
        let rn = r.powi(self.dim as i32);
        match self.kind {
            OperatorKind::Hardy | OperatorKind::CommutatorHardy if r <= self.inner => closed(0.0),
            OperatorKind::Hardy if r >= self.support => closed(self.total_f / rn),
            OperatorKind::CommutatorHardy if r >= self.support => {
                let bx = self.b.unwrap().value(x)?;
                closed((bx * self.total_f - self.total_bf) / rn)
            }
            OperatorKind::DualHardy | OperatorKind::CommutatorDualHardy if r >= self.support => closed(0.0),
            OperatorKind::DualHardy if r <= self.inner => closed(self.total_fk),
            OperatorKind::CommutatorDualHardy if r <= self.inner => {
                let bx = self.b.unwrap().value(x)?;
                closed(bx * self.total_fk - self.total_bfk)
            }
            _ => apply(self.kind, self.b, self.f, x, self.dim, self.tol),
        }
    }
}

impl RealFunction for OperatorImage<'_> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.sample(x)?.value)
    }

    fn breakpoints(&self) -> Vec<f64> {
        symbol_breakpoints(self.b, self.f, self.dim)
    }

    fn support_radius(&self) -> f64 {
        if self.kind.is_dual() {
            self.support
        } else {
            f64::INFINITY
        }
    }

    fn inner_radius(&self) -> f64 {
        if self.kind.is_dual() {
            0.0
        } else {
            self.inner
        }
    }

    fn parity(&self) -> Parity {
        if self.dim >= 2 {
            return Parity::Even;
        }
        match self.kind {
            OperatorKind::Hardy | OperatorKind::DualHardy => Parity::Even,
            _ => match self.b.map(|b| b.parity()) {
                Some(Parity::Even) => Parity::Even,
                _ => Parity::Neither,
            },
        }
    }

    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        match self.kind {
            OperatorKind::Hardy | OperatorKind::CommutatorHardy if r1 <= self.inner => 0.0,
            OperatorKind::DualHardy if r1 <= self.inner => self.total_fk.abs(),
            OperatorKind::CommutatorDualHardy if r1 <= self.inner => {
                self.b.unwrap().sup_abs_between(r0, r1) * self.total_fk.abs() + self.total_bfk.abs()
            }
            _ => self.far_field().sup_between(r0, r1).unwrap_or(f64::INFINITY),
        }
    }

    fn far_field(&self) -> FarField {
        if !self.support.is_finite() {
            return FarField::Unknown;
        }
        let n = -(self.dim as f64);
        match self.kind {
            OperatorKind::DualHardy | OperatorKind::CommutatorDualHardy => FarField::Compact { radius: self.support },
            OperatorKind::Hardy => FarField::Power {
                radius: self.support,
                coeff: self.total_f.abs(),
                exponent: n,
            },
            OperatorKind::CommutatorHardy => match self.b.unwrap().far_field() {
                FarField::Compact { radius } => FarField::Power {
                    radius: radius.max(self.support),
                    coeff: self.total_bf.abs(),
                    exponent: n,
                },
                FarField::Power { radius, coeff, exponent } => {
                    let e = exponent.max(0.0);
                    FarField::Power {
                        radius: radius.max(self.support).max(1.0),
                        coeff: coeff * self.total_f.abs() + self.total_bf.abs(),
                        exponent: e + n,
                    }
                }
                FarField::Unknown => FarField::Unknown,
            },
        }
    }

    fn origin_power(&self) -> Option<f64> {
        // H and [b,H] average f, H* and [b,H*] inherit its blow-up.
        self.f.origin_power()
    }
}
